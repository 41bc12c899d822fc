"""Hot numerical kernels with a numba fast path and a pure-numpy fallback.

Set the environment variable ``WEIGHTLAB_NO_NUMBA=1`` to force the numpy
implementations (useful for debugging, and on platforms where numba is
unavailable).  ``benchmarks/bench_kernels.py`` compares the two paths.
"""

import os

import numpy as np

__all__ = [
    "pl_eval",
    "pairwise_subadd_violation",
    "grid_conjugate",
    "NUMBA_ENABLED",
]


# ---------------------------------------------------------------------------
# pure numpy implementations
# ---------------------------------------------------------------------------

def _pl_eval_np(u, us, vs, final_slope):
    """Evaluate a piecewise-linear function given by corners (us, vs).

    Left of us[0] the value is 0; right of us[-1] the last value is
    extended with `final_slope`.  `u` is a 1-d array.
    """
    out = np.interp(u, us, vs)
    right = u > us[-1]
    if np.any(right):
        out[right] = vs[-1] + final_slope * (u[right] - us[-1])
    out[u < us[0]] = 0.0
    return out


def _pairwise_subadd_violation_np(vals):
    """Worst subadditivity violation on a uniform grid.

    vals[i] = w(i*h).  Returns (max of w(s+t)-w(s)-w(t), i, j) over all
    i <= j with i+j < len(vals).
    """
    n = len(vals)
    idx = np.arange(n)
    s = idx[:, None] + idx[None, :]
    mask = (s < n) & (idx[:, None] <= idx[None, :])
    gap = np.where(mask, vals[np.minimum(s, n - 1)] - vals[:, None] - vals[None, :], -np.inf)
    flat = np.argmax(gap)
    i, j = divmod(flat, n)
    return gap[i, j], i, j


def _grid_conjugate_np(xs, ys, phis):
    """For each x in xs, max over the y-grid of x*y - phi(y); returns (vals, arg)."""
    g = xs[:, None] * ys[None, :] - phis[None, :]
    arg = np.argmax(g, axis=1)
    return g[np.arange(len(xs)), arg], arg


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

NUMBA_ENABLED = False

if os.environ.get("WEIGHTLAB_NO_NUMBA", "") not in ("1", "true", "yes"):
    try:
        import numba as nb

        @nb.njit(cache=True)
        def _pl_eval_nb(u, us, vs, final_slope):
            out = np.empty_like(u)
            n = len(us)
            for i in range(len(u)):
                x = u[i]
                if x < us[0]:
                    out[i] = 0.0
                elif x >= us[n - 1]:
                    out[i] = vs[n - 1] + final_slope * (x - us[n - 1])
                else:
                    lo, hi = 0, n - 1
                    while hi - lo > 1:
                        mid = (lo + hi) // 2
                        if us[mid] <= x:
                            lo = mid
                        else:
                            hi = mid
                    t = (x - us[lo]) / (us[hi] - us[lo])
                    out[i] = vs[lo] + t * (vs[hi] - vs[lo])
            return out

        @nb.njit(cache=True)
        def _pairwise_subadd_violation_nb(vals):
            n = len(vals)
            best = -np.inf
            bi, bj = 0, 0
            for i in range(n):
                for j in range(i, n - i):
                    gap = vals[i + j] - vals[i] - vals[j]
                    if gap > best:
                        best = gap
                        bi, bj = i, j
            return best, bi, bj

        @nb.njit(cache=True)
        def _grid_conjugate_nb(xs, ys, phis):
            m = len(xs)
            vals = np.empty(m)
            args = np.empty(m, dtype=np.int64)
            for i in range(m):
                best = -np.inf
                bk = 0
                for k in range(len(ys)):
                    g = xs[i] * ys[k] - phis[k]
                    if g > best:
                        best = g
                        bk = k
                vals[i] = best
                args[i] = bk
            return vals, args

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False


if NUMBA_ENABLED:
    pl_eval = _pl_eval_nb
    pairwise_subadd_violation = _pairwise_subadd_violation_nb
    grid_conjugate = _grid_conjugate_nb
else:
    pl_eval = _pl_eval_np
    pairwise_subadd_violation = _pairwise_subadd_violation_np
    grid_conjugate = _grid_conjugate_np

# both paths kept importable for the benchmark / agreement tests
IMPLS = {
    "numpy": {
        "pl_eval": _pl_eval_np,
        "pairwise_subadd_violation": _pairwise_subadd_violation_np,
        "grid_conjugate": _grid_conjugate_np,
    }
}
if NUMBA_ENABLED:
    IMPLS["numba"] = {
        "pl_eval": _pl_eval_nb,
        "pairwise_subadd_violation": _pairwise_subadd_violation_nb,
        "grid_conjugate": _grid_conjugate_nb,
    }
