"""Growth index, the kappa integral transform, and slow-variation diagnostics.

All improper integrals are computed after the substitution t = e^v, which
turns  int_1^oo w(y t) / t^2 dt  into  int_0^oo phi(log y + v) e^{-v} dv.
This keeps every intermediate quantity in a safe range even for weights
whose interesting behaviour lives at astronomically large t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .core import Dilated, Log, LogPower, PiecewiseLogLinear, Power, Scaled, WeightFunction
from .errors import HorizonTooSmall, NotMonotone, QuadratureFailure
from .verdict import Verdict, fails, holds, inconclusive

__all__ = [
    "KappaResult",
    "IndexEstimate",
    "kappa",
    "kappa_equivalence_check",
    "growth_index",
    "slowly_varying_check",
    "DEFAULT_GAMMA_GRID",
    "DEFAULT_K_GRID",
]

DEFAULT_GAMMA_GRID = (0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0)
DEFAULT_K_GRID = tuple([math.e] + [2.0 ** k for k in range(1, 7)])

_C_GRID = 2.0 ** np.arange(0, 41)


@dataclass
class KappaResult:
    kind: str  # "finite" | "divergent"
    value: float | None
    tail_low: float | None
    tail_high: float | None
    evidence: dict

    @property
    def divergent(self):
        return self.kind == "divergent"


def _segment_integral(alpha, beta, v1, v2):
    """int_{v1}^{v2} (alpha + beta*v) e^{-v} dv, v2 may be +inf."""

    def anti(v):
        return -(alpha + beta + beta * v) * math.exp(-v)

    upper = 0.0 if math.isinf(v2) else anti(v2)
    return upper - anti(v1)


def _kappa_profile_exact(w: PiecewiseLogLinear, u0: float) -> float:
    """Exact integral of phi(u0 + v) e^{-v} over [0, oo) for a profile."""
    # v-breakpoints where u0 + v crosses a corner
    vs = [v for v in (w.us - u0) if v > 0]
    vs = [0.0] + sorted(vs)
    total = 0.0
    for i, v1 in enumerate(vs):
        v2 = vs[i + 1] if i + 1 < len(vs) else math.inf
        # phi is affine on (u0+v1, u0+v2): value + slope
        umid = u0 + v1
        p1 = float(w.phi(u0 + v1))
        if math.isinf(v2):
            slope = w.final_slope if umid >= w.us[-1] - 1e-300 else _local_slope(w, umid)
        else:
            slope = (float(w.phi(u0 + v2)) - p1) / (v2 - v1)
        # phi(u0+v) = p1 + slope*(v - v1) on the segment
        total += _segment_integral(p1 - slope * v1, slope, v1, v2)
    return total


def _local_slope(w: PiecewiseLogLinear, u: float) -> float:
    if u < w.us[0]:
        return 0.0
    if u >= w.us[-1]:
        return w.final_slope
    k = int(np.searchsorted(w.us, u, side="right")) - 1
    k = min(max(k, 0), len(w.slopes) - 1)
    return float(w.slopes[k])


def kappa(w: WeightFunction, y: float, T: float = 1e6) -> KappaResult:
    """int_1^T w(y t)/t^2 dt plus a certified tail estimate.

    Returns a finite value only when the integrand passes a decay test on
    the final window; otherwise the result is flagged divergent with the
    observed evidence.
    """
    if y < 0:
        raise ValueError("y must be >= 0")
    if T <= 10:
        raise HorizonTooSmall("kappa horizon must exceed 10")
    u0 = math.log(y) if y > 0 else -745.0
    v_max = math.log(T)

    if isinstance(w, PiecewiseLogLinear):
        value = _kappa_profile_exact(w, u0)
        g_end = float(w.phi(u0 + v_max)) * math.exp(-v_max)
        return KappaResult("finite", value, g_end, value, {
            "method": "exact piecewise integral with final-slope extension",
            "u0": u0,
        })

    def g(v):
        v = np.asarray(v, dtype=float)
        val = w._phi_unchecked(u0 + v)
        with np.errstate(over="ignore", invalid="ignore"):
            return np.asarray(val) * np.exp(-v)

    # decay test on the final window
    win = np.linspace(max(v_max - 5.0, v_max / 2), v_max, 24)
    gw = np.asarray(g(win), dtype=float).reshape(-1)
    if not np.all(np.isfinite(gw)):
        return KappaResult("divergent", None, None, None, {
            "reason": "integrand overflows inside the horizon",
        })
    pos = gw > 0
    if np.count_nonzero(pos) < 4:
        rate = 1.0  # integrand vanished; trivially integrable tail
    else:
        coeff = np.polyfit(win[pos], np.log(gw[pos]), 1)
        rate = -coeff[0]
    if rate <= 1e-3:
        return KappaResult("divergent", None, None, None, {
            "reason": "integrand decay rate below threshold on final window",
            "rate": float(rate),
            "window": [float(win[0]), float(win[-1])],
        })

    def g_scalar(v):
        return float(np.asarray(g(v)).reshape(-1)[0])

    points = [p for p in (-u0,) if 0 < p < v_max]
    val, err = integrate.quad(g_scalar, 0.0, v_max, limit=300,
                              points=points or None, epsabs=1e-12, epsrel=1e-10)
    if err > 1e-8 * (abs(val) + 1.0):
        raise QuadratureFailure(f"quadrature error {err} too large for kappa")
    g_end = g_scalar(v_max)
    tail = g_end / rate
    return KappaResult("finite", val + tail, g_end, tail * 1.5 + 1e-300, {
        "method": "adaptive quadrature in log variable + exponential tail",
        "rate": float(rate),
        "quad_error": float(err),
        "horizon": T,
    })


def kappa_equivalence_check(w: WeightFunction, y_grid=None, T: float = 1e6) -> Verdict:
    """Two-sided comparison of w with its kappa transform on a y-grid."""
    if y_grid is None:
        y_grid = np.geomspace(1.0, 1e4, 25)
    y_grid = np.asarray(y_grid, dtype=float)
    kv = []
    for y in y_grid:
        res = kappa(w, float(y), T)
        if res.divergent:
            return fails({"y": float(y), "evidence": res.evidence},
                         notes="kappa transform divergent")
        kv.append(res.value)
    kv = np.asarray(kv)
    wv = np.asarray([w.evaluate(float(y)) for y in y_grid])

    if w.nondecreasing:
        # kappa(y) >= w(y) holds exactly for nondecreasing w; check it
        slack = float(np.min(kv - wv))
        if slack < -1e-6 * (1 + np.max(wv)):
            return fails({"y": float(y_grid[np.argmin(kv - wv)])},
                         notes="kappa < w for a nondecreasing weight (numerical inconsistency)")

    for C in _C_GRID:
        if np.all(kv <= C * wv + C) and np.all(wv <= C * kv + C):
            return holds({"C": float(C)},
                         margin=float(np.max(kv - C * wv - C)),
                         horizon={"T": T, "y_min": float(y_grid[0]), "y_max": float(y_grid[-1])})
    need = np.max((kv - 1) / (wv + 1))
    return inconclusive(margin=float(need),
                        horizon={"T": T},
                        notes="no constant up to 2^40 certifies two-sided equivalence")


@dataclass
class IndexEstimate:
    lower_bound: float
    upper_bound: float
    table: list
    horizon: float
    refined: bool = False
    notes: str = ""

    @property
    def infinite(self):
        return math.isinf(self.upper_bound) and self.lower_bound > 0

    def to_dict(self):
        return {
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "table": self.table,
            "horizon": self.horizon,
            "refined": self.refined,
            "notes": self.notes,
        }


def _classify_gamma(w, gamma, K_grid, tg, T):
    """One row of the index scan: limsup estimates of w(K^gamma t)/w(t)."""
    last = tg >= T / 10
    wt = np.asarray(w.evaluate(tg))
    ok = wt > 0
    best = None
    certified = False
    refutes = 0
    for K in K_grid:
        scale = K ** gamma
        if scale * T > 1e305:
            continue
        wk = np.asarray(w.evaluate(scale * tg))
        ratio = np.where(ok, wk / np.where(ok, wt, 1.0), np.nan)
        est_last = float(np.nanmax(ratio[last & ok]))
        est_prev = float(np.nanmax(ratio[~last & ok]))
        agree = abs(est_last - est_prev) <= 0.01 * max(est_prev, 1e-12)
        # a decreasing estimate is a safe upper bound for the limsup, an
        # increasing one is safe evidence for refutation
        trend_down = est_last <= est_prev * (1 + 1e-9)
        trend_up = est_last >= est_prev * (1 - 1e-9)
        if best is None or est_last / K < best["est"] / best["K"]:
            best = {"K": float(K), "est": est_last, "agree": bool(agree)}
        if est_last < K * (1 - 1e-3) and (agree or trend_down):
            certified = True
        if est_last >= K * (1 - 1e-4) and (agree or trend_up):
            refutes += 1
    n_considered = sum(1 for K in K_grid if K ** gamma * T <= 1e305)
    refuted = (not certified) and n_considered > 0 and refutes == n_considered
    status = "certified" if certified else ("refuted" if refuted else "inconclusive")
    row = {"gamma": float(gamma), "status": status}
    row.update(best or {})
    return row


def growth_index(w: WeightFunction, gamma_grid=None, K_grid=None,
                 T: float = 1e8, refine: bool = True) -> IndexEstimate:
    """Bracket the growth index by certifying / refuting the defining
    property on a gamma grid, with optional geometric bisection between
    the last certified and first refuted gamma."""
    if not w.nondecreasing:
        raise NotMonotone("growth index requires a nondecreasing weight")
    if T < 1e4:
        raise HorizonTooSmall("need at least 4 decades of horizon")
    gamma_grid = sorted(gamma_grid if gamma_grid is not None else DEFAULT_GAMMA_GRID)
    K_grid = tuple(K_grid if K_grid is not None else DEFAULT_K_GRID)
    tg = np.geomspace(T / 100, T, 300)

    rows = [_classify_gamma(w, g, K_grid, tg, T) for g in gamma_grid]
    certified = [r["gamma"] for r in rows if r["status"] == "certified"]
    refuted = [r["gamma"] for r in rows if r["status"] == "refuted"]

    # the certified set must be downward closed on the grid
    if certified:
        top = max(certified)
        for r in rows:
            if r["gamma"] <= top and r["status"] == "refuted":
                raise AssertionError("certified gamma set is not downward closed")

    lower = max(certified) if certified else 0.0
    upper = min(refuted) if refuted else math.inf
    est = IndexEstimate(lower, upper, rows, T)

    if refine and certified and refuted and upper / max(lower, 1e-12) > 1.02:
        lo, hi = lower, upper
        for _ in range(60):
            if hi / lo <= 1.02:
                break
            mid = math.sqrt(lo * hi)
            row = _classify_gamma(w, mid, K_grid, tg, T)
            est.table.append(row)
            if row["status"] == "certified":
                lo = mid
            elif row["status"] == "refuted":
                hi = mid
            else:
                est.notes = "refinement stopped at an inconclusive gamma"
                break
        est.lower_bound, est.upper_bound = lo, hi
        est.refined = True
    if not refuted:
        est.notes = (est.notes + " no refutation found at horizon").strip()
    return est


def _sv_limit(w: WeightFunction, u: float):
    """Exact limit of |w(tu)/w(t) - 1| for families where it is closed-form."""
    if isinstance(w, Power):
        return abs(u ** w.alpha - 1.0)
    if isinstance(w, (Log, LogPower)):
        return 0.0
    if isinstance(w, (Scaled, Dilated)):
        return _sv_limit(w.base, u)
    return None


def slowly_varying_check(w: WeightFunction, u_set, T: float = 1e6, tol: float = 0.05) -> Verdict:
    """Check whether w(tu)/w(t) settles at 1 for every u in u_set."""
    rows = []
    worst = 0.0
    all_exact = True
    for u in u_set:
        exact = _sv_limit(w, float(u))
        if exact is not None and exact > tol:
            return fails({"u": float(u), "limit_deviation": exact},
                         notes="closed-form ratio limit differs from 1")
        tg = np.geomspace(T / 100, T, 200)
        wt = np.asarray(w.evaluate(tg))
        wu = np.asarray(w.evaluate(float(u) * tg))
        ok = wt > 0
        dev = np.abs(wu[ok] / wt[ok] - 1.0)
        last = tg[ok] >= T / 10
        sup_last = float(np.max(dev[last]))
        sup_prev = float(np.max(dev[~last])) if np.any(~last) else sup_last
        trend_ok = sup_last <= sup_prev * 1.05 + 1e-9
        rows.append({"u": float(u), "sup_last": sup_last, "sup_prev": sup_prev,
                     "trend_ok": trend_ok, "exact_limit": exact})
        worst = max(worst, sup_last)
        if exact is None:
            all_exact = False
        if sup_last > tol or not trend_ok:
            if exact == 0.0:
                continue  # closed form says it converges; horizon just too small
            return inconclusive(margin=sup_last,
                                horizon={"T": T},
                                notes=f"deviation at u={u} above tolerance at horizon")
    return holds({"tolerance": tol, "rows": rows, "closed_form": all_exact},
                 margin=worst, horizon={"T": T})
