"""Fiber-sum kernels: numba loops with pure-numpy fallbacks.

Every kernel computes, for each sample s,

    sum_f prod_i  x/(x - 1),   x = c[s, i] * rho[K[f, i]]

together with the smallest |x - 1| met, which callers compare against the
singular margin.  ``rho`` holds L-th roots of unity.  Set the environment
variable GMCOCYCLE_NO_NUMBA=1 to use the numpy versions.
"""
import os

import numpy as np

from . import ddmath

USE_NUMBA = os.environ.get("GMCOCYCLE_NO_NUMBA", "").strip() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False


def fiber_sum_f64_numpy(K, rho, c):
    S = c.shape[0]
    out = np.empty(S, dtype=np.complex128)
    dmin = np.empty(S)
    for s in range(S):
        x = c[s][None, :] * rho[K]
        d = x - 1.0
        out[s] = np.prod(x / d, axis=1).sum()
        dmin[s] = np.abs(d).min()
    return out, dmin


def _pairwise_sum(h, l):
    # vectorized double-double summation by halving
    while h.shape[0] > 1:
        if h.shape[0] % 2:
            h = np.append(h, 0.0)
            l = np.append(l, 0.0)
        m = h.shape[0] // 2
        h, l = ddmath.plain.add(h[:m], l[:m], h[m:], l[m:])
    return h[0], l[0]


def fiber_sum_dd_numpy(K, rho, c):
    dd = ddmath.plain
    S, n = c.shape[0], c.shape[1]
    F = K.shape[0]
    out = np.empty((S, 4))
    dmin = np.empty(S)
    for s in range(S):
        prh, prl = np.ones(F), np.zeros(F)
        pih, pil = np.zeros(F), np.zeros(F)
        dm = np.inf
        for i in range(n):
            r = rho[K[:, i]]
            cs = c[s, i]
            x = dd.cmul(cs[0], cs[1], cs[2], cs[3], r[:, 0], r[:, 1], r[:, 2], r[:, 3])
            grh, grl, gih, gil, nrm = dd.g_factor(*x)
            dm = min(dm, float(nrm.min()))
            prh, prl, pih, pil = dd.cmul(prh, prl, pih, pil, grh, grl, gih, gil)
        out[s, 0], out[s, 1] = _pairwise_sum(prh, prl)
        out[s, 2], out[s, 3] = _pairwise_sum(pih, pil)
        dmin[s] = np.sqrt(dm)
    return out, dmin


if USE_NUMBA:
    _dd = ddmath.build(numba.njit(cache=True))
    _dd_add, _dd_cmul, _dd_g = _dd.add, _dd.cmul, _dd.g_factor

    @numba.njit(cache=True)
    def _f64_loop(K, rho, c, out, dmin):
        S, n = c.shape
        F = K.shape[0]
        for s in range(S):
            acc = 0j
            dm = np.inf
            for f in range(F):
                p = 1.0 + 0j
                for i in range(n):
                    x = c[s, i] * rho[K[f, i]]
                    d = x - 1.0
                    a = abs(d)
                    if a < dm:
                        dm = a
                    p *= x / d
                acc += p
            out[s] = acc
            dmin[s] = dm

    @numba.njit(cache=True)
    def _dd_loop(K, rho, c, out, dmin):
        S, n = c.shape[0], c.shape[1]
        F = K.shape[0]
        for s in range(S):
            arh, arl, aih, ail = 0.0, 0.0, 0.0, 0.0
            dm = np.inf
            for f in range(F):
                prh, prl, pih, pil = 1.0, 0.0, 0.0, 0.0
                for i in range(n):
                    k = K[f, i]
                    xrh, xrl, xih, xil = _dd_cmul(c[s, i, 0], c[s, i, 1], c[s, i, 2], c[s, i, 3],
                                                 rho[k, 0], rho[k, 1], rho[k, 2], rho[k, 3])
                    grh, grl, gih, gil, nrm = _dd_g(xrh, xrl, xih, xil)
                    if nrm < dm:
                        dm = nrm
                    prh, prl, pih, pil = _dd_cmul(prh, prl, pih, pil, grh, grl, gih, gil)
                arh, arl = _dd_add(arh, arl, prh, prl)
                aih, ail = _dd_add(aih, ail, pih, pil)
            out[s, 0] = arh
            out[s, 1] = arl
            out[s, 2] = aih
            out[s, 3] = ail
            dmin[s] = np.sqrt(dm)

    def fiber_sum_f64_numba(K, rho, c):
        out = np.empty(c.shape[0], dtype=np.complex128)
        dmin = np.empty(c.shape[0])
        _f64_loop(K, rho, c, out, dmin)
        return out, dmin

    def fiber_sum_dd_numba(K, rho, c):
        out = np.empty((c.shape[0], 4))
        dmin = np.empty(c.shape[0])
        _dd_loop(K, rho, c, out, dmin)
        return out, dmin

    fiber_sum_f64 = fiber_sum_f64_numba
    fiber_sum_dd = fiber_sum_dd_numba
    BACKEND = "numba"
else:
    fiber_sum_f64_numba = fiber_sum_dd_numba = None
    fiber_sum_f64 = fiber_sum_f64_numpy
    fiber_sum_dd = fiber_sum_dd_numpy
    BACKEND = "numpy"
