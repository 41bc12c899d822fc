"""Compare the numba and pure-numpy kernel implementations.

Run with `python benchmarks/bench_kernels.py`.  Set WEIGHTLAB_NO_NUMBA=1
before importing to benchmark the fallback path only.
"""

import time

import numpy as np

from weightlab import _kernels


def _time(fn, *args, repeats=5):
    fn(*args)  # warm up (JIT compile on the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)

    us = np.sort(rng.uniform(0, 100, 200))
    us[0] = 0.0
    vs = np.cumsum(rng.uniform(0, 1, 200))
    u_query = rng.uniform(-10, 120, 200_000)

    vals = np.cumsum(rng.uniform(0, 1, 512))
    xs = np.linspace(0, 50, 2000)
    ys = np.linspace(0, 60, 2000)
    phis = np.exp(ys / 10)

    cases = [
        ("pl_eval", (u_query, us, vs, 2.0)),
        ("pairwise_subadd_violation", (vals,)),
        ("grid_conjugate", (xs, ys, phis)),
    ]

    print(f"{'kernel':<28} " + " ".join(f"{name:>12}" for name in _kernels.IMPLS))
    for name, args in cases:
        row = [f"{name:<28}"]
        ref = None
        for impl_name, impl in _kernels.IMPLS.items():
            t = _time(impl[name], *args)
            row.append(f"{t * 1e3:10.2f}ms")
            out = impl[name](*args)
            flat = np.concatenate([np.atleast_1d(np.asarray(o, dtype=float))
                                   for o in (out if isinstance(out, tuple) else (out,))])
            if ref is None:
                ref = flat
            elif not np.allclose(ref, flat, rtol=1e-12, atol=1e-12):
                row.append("  (MISMATCH)")
        print(" ".join(row))


if __name__ == "__main__":
    main()
