"""Time the numba fiber-sum kernels against the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--fiber 2000] [--samples 24] [--n 3]

Both backends are run on the same inputs and their results compared; numba
timings exclude the first (compiling) call.
"""
import argparse
import time

import numpy as np

from gmcocycle.regulator import kernels


def _inputs(rng, F, S, n, L):
    K = rng.integers(0, L, size=(F, n)).astype(np.int64)
    ang = 2 * np.pi * np.arange(L) / L
    rho = np.exp(1j * ang)
    c = rng.uniform(0.5, 2.0, size=(S, n)) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(S, n)))
    z = np.zeros(L)
    rho_dd = np.stack([rho.real, z, rho.imag, z], axis=1)
    zs = np.zeros((S, n))
    c_dd = np.stack([c.real, zs, c.imag, zs], axis=2)
    return K, rho, c, rho_dd, c_dd


def _time(fn, *args, repeat=3):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fiber", type=int, default=2000)
    ap.add_argument("--samples", type=int, default=24)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    K, rho, c, rho_dd, c_dd = _inputs(rng, args.fiber, args.samples, args.n, 60)

    if kernels.fiber_sum_f64_numba is None:
        print("numba disabled (GMCOCYCLE_NO_NUMBA set); timing numpy only")
    print(f"fiber {args.fiber}, samples {args.samples}, n {args.n}")
    rows = [("f64", kernels.fiber_sum_f64_numpy, kernels.fiber_sum_f64_numba, rho, c),
            ("dd", kernels.fiber_sum_dd_numpy, kernels.fiber_sum_dd_numba, rho_dd, c_dd)]
    for name, np_fn, nb_fn, r, cc in rows:
        t_np, (out_np, _) = _time(np_fn, K, r, cc)
        line = f"{name:>4}  numpy {t_np * 1e3:9.2f} ms"
        if nb_fn is not None:
            nb_fn(K, r, cc)  # compile
            t_nb, (out_nb, _) = _time(nb_fn, K, r, cc)
            if name == "dd":
                a = out_np[:, 0] + out_np[:, 1] + 1j * (out_np[:, 2] + out_np[:, 3])
                b = out_nb[:, 0] + out_nb[:, 1] + 1j * (out_nb[:, 2] + out_nb[:, 3])
            else:
                a, b = out_np, out_nb
            diff = np.max(np.abs(a - b) / np.maximum(1, np.abs(a)))
            line += f"  numba {t_nb * 1e3:9.2f} ms  speedup {t_np / t_nb:6.1f}x  max rel diff {diff:.1e}"
        print(line)


if __name__ == "__main__":
    main()
