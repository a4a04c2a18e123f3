"""The d log regulator oracle.

For a square term coeff * M_*{1 - mu_i w_i} the coefficient of
d log z_1 ^ ... ^ d log z_n at z is

    coeff / det(M) * sum_{w : M(w) = z} prod_i mu_i w_i / (mu_i w_i - 1),

and the orientation symbol {-z_1, ..., -z_n} contributes its coefficient.
The fiber over z is w0 * exp(2 pi i kappa) with w0 = exp(M^{-1} Log z) and
kappa in the torsion kernel of M, so after adding the twists every factor is
w0_i times a power of one root of unity.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm
from typing import Optional

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .. import latlin
from ..errors import (DimensionMismatch, InputError, NearSingular,
                      NonSquareTerm, Singular, ZeroCoordinate)
from . import kernels

BACKENDS = ("auto", "mp", "dd", "f64")


@dataclass(frozen=True)
class SamplePlan:
    seed: int = 0
    count: int = 24
    radius_band: tuple = (0.5, 2.0)
    singular_margin: float = 1e-3
    precision_bits: int = 256
    tolerance: float = 1e-9
    backend: str = "auto"

    def __post_init__(self):
        lo, hi = self.radius_band
        if not 0 < lo < hi:
            raise InputError("radius band must satisfy 0 < r_min < r_max")
        if self.singular_margin <= 0 or self.tolerance <= 0:
            raise InputError("margin and tolerance must be positive")
        if self.count < 1:
            raise InputError("need at least one sample")
        if self.precision_bits < 24:
            raise InputError("precision too small")
        if self.backend not in BACKENDS:
            raise InputError(f"unknown backend {self.backend!r}")

    def resolve(self):
        if self.backend != "auto":
            return self.backend
        if self.precision_bits <= 53:
            return "f64"
        if self.precision_bits <= 106:
            return "dd"
        return "mp"

    def replace(self, **kw):
        d = dict(self.__dict__)
        d.update(kw)
        return SamplePlan(**d)

    def to_json(self):
        return {"seed": self.seed, "count": self.count,
                "radius_band": [repr(float(x)) for x in self.radius_band],
                "singular_margin": repr(float(self.singular_margin)),
                "precision_bits": self.precision_bits,
                "tolerance": repr(float(self.tolerance)),
                "backend": self.resolve()}


def fmt_real(x, digits=20):
    """Decimal string with a fixed number of significant digits."""
    x = mpfr(x)
    if x == 0:
        return "0"
    mant, exp, _ = x.digits(10, digits)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+d}"


class _Prepared:
    """Exact data of one square term, independent of the sample point."""

    def __init__(self, matrix, twists):
        n = len(matrix)
        self.n = n
        self.det = latlin.det(matrix)
        if self.det == 0:
            raise Singular("term with singular matrix")
        self.inv = latlin.inverse(matrix)
        L0, K0 = latlin.kernel_exponents(matrix)
        L = L0
        for t in twists:
            L = lcm(L, Fraction(t).denominator)
        tw = np.array([int(Fraction(t) * L) for t in twists], dtype=np.int64)
        self.L = L
        self.K = np.ascontiguousarray((K0 * (L // L0) + tw[None, :]) % L)
        self.F = self.K.shape[0]
        # per-coordinate distinct exponents for the mp path
        self.uniq = []
        for i in range(n):
            u, inv = np.unique(self.K[:, i], return_inverse=True)
            self.uniq.append(([int(x) for x in u], inv.reshape(-1).tolist()))


@lru_cache(maxsize=4096)
def _prepare(matrix, twists):
    return _Prepared(matrix, twists)


@lru_cache(maxsize=64)
def _rho_dd(L):
    """L-th roots of unity as double-double (L, 4) array."""
    B = max(1, int(np.ceil(np.sqrt(L))))
    with gmpy2.context(gmpy2.get_context(), precision=160):
        two_pi = 2 * gmpy2.const_pi()

        def split(k):
            z = gmpy2.exp(mpc(0, two_pi * k / L))
            rh = float(z.real)
            ih = float(z.imag)
            return (rh, float(z.real - rh), ih, float(z.imag - ih))

        small = np.array([split(b) for b in range(B)])
        big = np.array([split(a * B) for a in range((L + B - 1) // B)])
    dd = kernels.ddmath.plain
    idx = np.arange(L)
    s = small[idx % B]
    b = big[idx // B]
    out = dd.cmul(b[:, 0], b[:, 1], b[:, 2], b[:, 3], s[:, 0], s[:, 1], s[:, 2], s[:, 3])
    return np.ascontiguousarray(np.stack(out, axis=1))


@lru_cache(maxsize=64)
def _rho_f64(L):
    return np.exp(2j * np.pi * np.arange(L) / L)


_rho_mp_cache = {}


def _rho_mp(L, k, prec):
    key = (L, k, prec)
    v = _rho_mp_cache.get(key)
    if v is None:
        if len(_rho_mp_cache) > 200000:
            _rho_mp_cache.clear()
        v = gmpy2.exp(mpc(0, 2 * gmpy2.const_pi() * k / L))
        _rho_mp_cache[key] = v
    return v


def _terms_of(e):
    if any(not t.square for t in e.terms):
        raise NonSquareTerm("the regulator is only evaluated on square terms")
    return [(Fraction(t.coeff), _prepare(t.matrix, t.twists)) for t in e.terms]


def _logs(zs, n, power, log_shift):
    # principal Log z (+ 2 pi i shift), scaled by the pullback power
    two_pi_i = mpc(0, 2 * gmpy2.const_pi())
    out = []
    for z in zs:
        if len(z) != n:
            raise DimensionMismatch("sample point has the wrong length")
        row = []
        for j, zj in enumerate(z):
            zj = mpc(zj)
            if zj == 0:
                raise ZeroCoordinate("sample coordinate is zero")
            lg = gmpy2.log(zj)
            if log_shift is not None:
                lg += two_pi_i * int(log_shift[j])
            row.append(lg * power)
        out.append(row)
    return out


def _w0(prep, logrow):
    return [gmpy2.exp(sum((logrow[j] * mpfr(q.numerator) / q.denominator
                           for j, q in enumerate(r) if q), mpc(0)))
            for r in prep.inv]


def _sum_mp(prep, logs):
    vals, dmins = [], []
    for row in logs:
        w0 = _w0(prep, row)
        cols = []
        dmin = None
        for i in range(prep.n):
            ks, idx = prep.uniq[i]
            G = []
            for k in ks:
                x = w0[i] * _rho_mp(prep.L, k, gmpy2.get_context().precision)
                d = x - 1
                a = abs(d)
                if dmin is None or a < dmin:
                    dmin = a
                G.append(x / d)
            cols.append([G[j] for j in idx])
        total = mpc(0)
        if prep.n == 1:
            for a in cols[0]:
                total += a
        else:
            for vals_f in zip(*cols):
                p = vals_f[0]
                for v in vals_f[1:]:
                    p = p * v
                total += p
        vals.append(total)
        dmins.append(float(dmin))
    return vals, dmins


def _sum_dd(prep, logs):
    S = len(logs)
    c = np.empty((S, prep.n, 4))
    for s, row in enumerate(logs):
        for i, w in enumerate(_w0(prep, row)):
            rh, ih = float(w.real), float(w.imag)
            c[s, i] = (rh, float(w.real - rh), ih, float(w.imag - ih))
    out, dmin = kernels.fiber_sum_dd(prep.K, _rho_dd(prep.L), c)
    vals = [mpc(mpfr(o[0]) + mpfr(o[1]), mpfr(o[2]) + mpfr(o[3])) for o in out]
    return vals, [float(d) for d in dmin]


def _sum_f64(prep, logs):
    c = np.array([[complex(w) for w in _w0(prep, row)] for row in logs], dtype=np.complex128)
    out, dmin = kernels.fiber_sum_f64(prep.K, _rho_f64(prep.L), c)
    return [mpc(complex(o)) for o in out], [float(d) for d in dmin]


_WORK_BITS = {"f64": 64, "dd": 160}


def evaluate_many(e, zs, plan=None, power=1, log_shift=None):
    """Regulator coefficients of e at each point of zs.

    With power = k the pullback [k]^* e is evaluated, i.e. k^n * eval(e, z^k).
    Returns (values, ok) where ok[s] is False when sample s is within the
    singular margin of a pole.
    """
    plan = plan or SamplePlan()
    backend = plan.resolve()
    n = e.n
    prec = _WORK_BITS.get(backend, plan.precision_bits)
    terms = _terms_of(e)
    with gmpy2.context(gmpy2.get_context(), precision=max(prec, 64)):
        logs = _logs(zs, n, power, log_shift)
        S = len(logs)
        total = [mpc(e.orient.numerator) / e.orient.denominator for _ in range(S)]
        ok = [True] * S
        for coeff, prep in terms:
            if backend == "mp":
                sums, dmins = _sum_mp(prep, logs)
            elif backend == "dd":
                sums, dmins = _sum_dd(prep, logs)
            else:
                sums, dmins = _sum_f64(prep, logs)
            scale = mpfr(coeff.numerator) / (coeff.denominator * prep.det)
            for s in range(S):
                total[s] += scale * sums[s]
                if dmins[s] < plan.singular_margin:
                    ok[s] = False
        if power != 1:
            f = mpfr(power) ** n
            total = [f * v for v in total]
    return total, ok


def evaluate(e, z, plan=None, log_shift=None):
    vals, ok = evaluate_many(e, [z], plan, log_shift=log_shift)
    if not ok[0]:
        raise NearSingular("sample point within the singular margin")
    return vals[0]


def draw_samples(rng, n, count, band):
    r = rng.uniform(band[0], band[1], size=(count, n))
    th = rng.uniform(0.0, 2 * np.pi, size=(count, n))
    z = r * np.exp(1j * th)
    return [tuple(complex(x) for x in row) for row in z]


def complex_fiber(M, z, precision_bits=128, tol=None):
    """All w with prod_i w_i^{M_ji} = z_j, via coset representatives of M Z^n."""
    M = latlin.as_matrix(M)
    n = len(M)
    if len(M[0]) != n or len(z) != n:
        raise DimensionMismatch("complex fiber needs a square matrix")
    if latlin.det(M) == 0:
        raise Singular("complex fiber of a singular map")
    if any(complex(x) == 0 for x in z):
        raise ZeroCoordinate("zero coordinate")
    U, S, V = latlin.snf(M)
    Uinv = latlin.inverse(U)
    inv = latlin.inverse(M)
    s = [S[i][i] for i in range(n)]
    out = []
    with gmpy2.context(gmpy2.get_context(), precision=precision_bits):
        tol = tol if tol is not None else mpfr(2) ** (-(precision_bits // 2))
        two_pi_i = mpc(0, 2 * gmpy2.const_pi())
        logs = [gmpy2.log(mpc(x)) for x in z]
        for t in product(*(range(d) for d in s)):
            y = latlin.matvec(Uinv, t)  # representative of Z^n / M Z^n
            arg = [logs[j] + two_pi_i * int(y[j]) for j in range(n)]
            w = tuple(gmpy2.exp(sum((arg[j] * mpfr(q.numerator) / q.denominator
                                     for j, q in enumerate(r) if q), mpc(0))) for r in inv)
            for j in range(n):
                img = mpc(1)
                for i in range(n):
                    img *= w[i] ** M[j][i]
                if abs(img - mpc(z[j])) > tol * abs(mpc(z[j])):
                    raise InputError("fiber point failed to reproduce z")
            out.append(w)
    return out


@dataclass
class RegulatorReport:
    mode: str
    verdict: str
    values: list
    residuals: list
    max_residual: float
    tolerance: float
    constant: Optional[object] = None
    plan: Optional[SamplePlan] = None
    samples: list = field(default_factory=list)

    @property
    def consistent(self):
        return self.verdict != "Distinct"

    def integer_constant(self, tol=1e-6):
        """Nearest integer to the fitted constant, or None if not within tol."""
        if self.constant is None:
            return None
        c = self.constant
        k = int(gmpy2.rint(c.real))
        if abs(c.real - k) < tol and abs(c.imag) < tol:
            return k
        return None

    def to_json(self):
        d = {"mode": self.mode, "verdict": self.verdict,
             "max_residual": fmt_real(self.max_residual, 6),
             "residuals": [fmt_real(r, 6) for r in self.residuals],
             "tolerance": repr(float(self.tolerance))}
        if self.constant is not None:
            d["constant"] = {"re": fmt_real(self.constant.real), "im": fmt_real(self.constant.imag)}
        if self.plan is not None:
            d["plan"] = self.plan.to_json()
        return d


def compare(e1, e2, plan=None, mode="strict", power1=1, max_attempts=None):
    """Numeric equality test of two elements at random torus points.

    mode is "strict" or "mod_orientation".  With power1 = k the left side is
    replaced by its pullback [k]^* e1.  Equality here is a necessary
    condition only: the reports say "consistent", never "proved".
    """
    plan = plan or SamplePlan()
    if e1.n != e2.n:
        raise DimensionMismatch("ambient dimensions differ")
    if mode not in ("strict", "mod_orientation"):
        raise InputError(f"unknown compare mode {mode!r}")
    n = e1.n
    rng = np.random.default_rng(plan.seed)
    diffs, pts = [], []
    attempts = 0
    limit = max_attempts or 50 * plan.count
    while len(diffs) < plan.count:
        if attempts >= limit:
            raise NearSingular("could not find enough regular sample points")
        batch = draw_samples(rng, n, plan.count, plan.radius_band)
        attempts += len(batch)
        v1, ok1 = evaluate_many(e1, batch, plan, power=power1)
        v2, ok2 = evaluate_many(e2, batch, plan)
        for z, a, b, o1, o2 in zip(batch, v1, v2, ok1, ok2):
            if o1 and o2 and len(diffs) < plan.count:
                diffs.append(a - b)
                pts.append(z)
    prec = max(_WORK_BITS.get(plan.resolve(), plan.precision_bits), 64)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        if mode == "strict":
            res = [abs(d) for d in diffs]
            const = None
        else:
            const = sum(diffs, mpc(0)) / len(diffs)
            res = [abs(d - const) for d in diffs]
        mx = max(res)
        good = all(r < plan.tolerance for r in res)
    if mode == "strict":
        verdict = "Equal" if good else "Distinct"
    else:
        verdict = "EqualModOrientation" if good else "Distinct"
    return RegulatorReport(mode, verdict, diffs, [float(r) for r in res], float(mx),
                           plan.tolerance, const, plan, pts)
