import os
import subprocess
import sys

import numpy as np
import pytest

from gmcocycle.regulator import kernels

needs_numba = pytest.mark.skipif(kernels.fiber_sum_f64_numba is None, reason="numba disabled")


def _inputs(seed=0, F=300, S=5, n=3, L=12):
    rng = np.random.default_rng(seed)
    K = rng.integers(0, L, size=(F, n)).astype(np.int64)
    rho = np.exp(2j * np.pi * np.arange(L) / L)
    c = rng.uniform(0.5, 2.0, size=(S, n)) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(S, n)))
    rho_dd = np.stack([rho.real, np.zeros(L), rho.imag, np.zeros(L)], axis=1)
    c_dd = np.stack([c.real, np.zeros((S, n)), c.imag, np.zeros((S, n))], axis=2)
    return K, rho, c, rho_dd, c_dd


def _direct(K, rho, c):
    out = []
    for s in range(c.shape[0]):
        x = c[s][None, :] * rho[K]
        out.append(np.prod(x / (x - 1), axis=1).sum())
    return np.array(out)


def _dd_value(o):
    return o[:, 0] + o[:, 1] + 1j * (o[:, 2] + o[:, 3])


def test_numpy_kernels_match_direct():
    K, rho, c, rho_dd, c_dd = _inputs()
    ref = _direct(K, rho, c)
    out, dmin = kernels.fiber_sum_f64_numpy(K, rho, c)
    assert np.allclose(out, ref, rtol=1e-12)
    assert np.all(dmin > 0)
    out_dd, dmin_dd = kernels.fiber_sum_dd_numpy(K, rho_dd, c_dd)
    assert np.allclose(_dd_value(out_dd), ref, rtol=1e-12)
    assert np.allclose(dmin, dmin_dd)


@needs_numba
def test_numba_matches_numpy():
    K, rho, c, rho_dd, c_dd = _inputs(seed=3)
    a, da = kernels.fiber_sum_f64_numpy(K, rho, c)
    b, db = kernels.fiber_sum_f64_numba(K, rho, c)
    assert np.allclose(a, b, rtol=1e-12) and np.allclose(da, db)
    a, da = kernels.fiber_sum_dd_numpy(K, rho_dd, c_dd)
    b, db = kernels.fiber_sum_dd_numba(K, rho_dd, c_dd)
    # summation order differs; double-double keeps ~30 digits either way
    assert np.max(np.abs(_dd_value(a) - _dd_value(b))) < 1e-25 * np.max(np.abs(_dd_value(a)))
    assert np.allclose(da, db)


def test_env_flag_selects_numpy():
    env = dict(os.environ, GMCOCYCLE_NO_NUMBA="1")
    code = ("from gmcocycle.regulator import kernels, KERNEL_BACKEND;"
            "print(kernels.BACKEND, KERNEL_BACKEND, kernels.fiber_sum_dd_numba is None)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "numpy", "True"]


def test_numpy_fallback_end_to_end():
    code = ("from gmcocycle.ksym import KElement, generator;"
            "from gmcocycle.regulator import SamplePlan, compare;"
            "a = KElement.of(generator([[1,0],[0,1]]));"
            "b = KElement.of(generator([[1,1],[0,1]])) + KElement.of(generator([[1,0],[1,1]]));"
            "r = compare(a, b, SamplePlan(precision_bits=100)); print(r.verdict, r.max_residual < 1e-25)")
    env = dict(os.environ, GMCOCYCLE_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["Equal", "True"]
