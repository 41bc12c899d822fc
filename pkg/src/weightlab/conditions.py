"""Finite-horizon decision procedures for weight growth/regularity conditions.

Condition identifiers
---------------------
om1   doubling:                w(2t) = O(w(t))
om2   at most linear:          w(t) = O(t)
om3   log strictly dominated:  log t = o(w(t))
om3w  log dominated:           log t = O(w(t))
om4   convexity in log scale:  u -> w(e^u) convex
om5   sublinear:               w(t) = o(t)
om6   doubling with slack:     exists H >= 1: 2 w(t) <= w(H t) + H
om_nq integral tail finite:    int_1^oo w(t)/t^2 dt < oo
om_snq uniform integral bound: int_1^oo w(yt)/t^2 dt <= C w(y) + C
alpha0 scaling bound:          w(lam t) <= C lam w(t) for t >= t0, lam >= 1
om_sub subadditive:            w(s+t) <= w(s) + w(t)
plus the structural checks: normalized, nondecreasing, unbounded_limit.

Asymptotic conditions can never be refuted from finite data alone, so a
``fails`` status is produced only from closed-form reasoning (analytic
families) or from a genuine pointwise witness (om4 slope inversion,
subadditivity violation, a nonzero sample on [0,1], ...).  Everything
else that cannot be certified gets an honest ``inconclusive``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, growth
from .core import (Associated, Dilated, Exp, GridSpec, Log, LogPower, Normalized,
                   PiecewiseLogLinear, Power, Scaled, WeightFunction)
from .errors import ChainViolation, HorizonTooSmall, NotMonotone
from .verdict import Status, Verdict, conjunction, fails, holds, inconclusive

__all__ = [
    "CONDITION_IDS",
    "check_condition",
    "classify",
    "check_implication_chain",
    "ClassReport",
    "ConsistencyReport",
    "DEFAULT_GRID",
]

CONDITION_IDS = (
    "om1", "om2", "om3", "om3w", "om4", "om5", "om6",
    "om_nq", "om_snq", "om_sub", "alpha0",
    "normalized", "nondecreasing", "unbounded_limit",
)

DEFAULT_GRID = GridSpec(1e-2, 1e6, 600)

_ASYMPTOTIC = {"om1", "om2", "om3", "om3w", "om5", "om6", "om_nq", "om_snq", "alpha0",
               "unbounded_limit"}

# conditions that are invariant under passing to an equivalent weight
EQUIVALENCE_INVARIANT = ("om1", "om2", "om3", "om3w", "om5", "om6",
                         "om_nq", "om_snq", "alpha0", "unbounded_limit")


# ---------------------------------------------------------------------------
# closed-form answers for the analytic families
# ---------------------------------------------------------------------------

def _closed_form(w: WeightFunction, cond: str):
    """True / False when the family admits an exact answer, else None."""
    if isinstance(w, Power):  # includes Gevrey
        a = w.alpha
        return {
            "om1": True, "om2": a <= 1, "om3": True, "om3w": True, "om4": True,
            "om5": a < 1, "om6": True, "om_nq": a < 1, "om_snq": a < 1,
            "alpha0": a <= 1, "om_sub": a <= 1,
            "normalized": False, "nondecreasing": True, "unbounded_limit": True,
        }.get(cond)
    if isinstance(w, Log):
        return {
            "om1": True, "om2": True, "om3": False, "om3w": True, "om4": True,
            "om5": True, "om6": False, "om_nq": True, "om_snq": True,
            "alpha0": True, "om_sub": True,
            "normalized": False, "nondecreasing": True, "unbounded_limit": True,
        }.get(cond)
    if isinstance(w, LogPower):
        b = w.beta
        return {
            "om1": True, "om2": True, "om3": b > 1, "om3w": True, "om4": True,
            "om5": True, "om6": False, "om_nq": True, "om_snq": True,
            "alpha0": True, "om_sub": b == 1,
            "normalized": False, "nondecreasing": True, "unbounded_limit": True,
        }.get(cond)
    if isinstance(w, Exp):
        return {
            "om1": False, "om2": False, "om3": True, "om3w": True, "om4": True,
            "om5": False, "om6": True, "om_nq": False, "om_snq": False,
            "alpha0": False, "om_sub": False,
            "normalized": False, "nondecreasing": True, "unbounded_limit": True,
        }.get(cond)
    if isinstance(w, Associated):
        if cond == "om4":
            return True  # supremum of affine functions of u
        if cond == "nondecreasing":
            return True
        return None
    if isinstance(w, (Scaled, Dilated)):
        # every listed condition survives positive scaling / dilation exactly
        if cond == "normalized":
            if isinstance(w, Scaled):
                return _closed_form(w.base, cond)
            return _closed_form(w.base, cond) if w.c <= 1 else None
        return _closed_form(w.base, cond)
    if isinstance(w, Normalized):
        if cond in EQUIVALENCE_INVARIANT:
            return _closed_form(w.base, cond)
        if cond == "normalized":
            return True
        if cond == "nondecreasing":
            return _closed_form(w.base, cond)
        if cond == "om4":
            # clipping a convex nondecreasing profile keeps convexity
            base = _closed_form(w.base, cond)
            return True if (base is True and w.base.nondecreasing) else None
        return None
    return None


# ---------------------------------------------------------------------------
# numeric machinery
# ---------------------------------------------------------------------------

def _require_decades(grid: GridSpec, n=2):
    if grid.t_max / max(grid.t_min, 1e-300) < 10 ** n:
        raise HorizonTooSmall(f"grid must span at least {n} decades")


def _split_top(tg):
    """Boolean masks for the last decade and the one before it."""
    T = tg[-1]
    last = tg >= T / 10
    prev = (tg >= T / 100) & ~last
    return last, prev


def _sup_ratio_verdict(tg, ratio, grid, small_o: bool, horizon_note=""):
    """Shared trend test for O- and small-o-style ratio conditions."""
    ok = np.isfinite(ratio)
    last, prev = _split_top(tg)
    if not (np.any(last & ok) and np.any(prev & ok)):
        return inconclusive(notes="ratio undefined on the top decades",
                            horizon=grid.describe())
    sup_last = float(np.max(ratio[last & ok]))
    sup_prev = float(np.max(ratio[prev & ok]))
    if small_o:
        if sup_last <= 0.5 * sup_prev + 1e-15:
            return holds({"sup_last_decade": sup_last,
                          "decay_factor": sup_last / max(sup_prev, 1e-300)},
                         margin=sup_last, horizon=grid.describe(), notes=horizon_note)
        return inconclusive(margin=sup_last, horizon=grid.describe(),
                            notes="ratio not clearly vanishing at horizon")
    if sup_last <= sup_prev * 1.05 + 1e-9:
        return holds({"C": sup_last * 1.1},
                     margin=sup_prev * 1.05 - sup_last,
                     horizon=grid.describe(), notes=horizon_note)
    return inconclusive(margin=sup_last, horizon=grid.describe(),
                        notes="ratio still growing between the top decades")


def _ratio_condition(w, cond, grid):
    tg = grid.points()
    tg = tg[tg >= max(grid.t_min, 1e-12)]
    wt = np.asarray(w.evaluate(tg))
    with np.errstate(divide="ignore", invalid="ignore"):
        if cond == "om1":
            ratio = np.asarray(w.evaluate(2 * tg)) / (wt + 1.0)
        elif cond in ("om2", "om5"):
            ratio = wt / tg
        elif cond in ("om3", "om3w"):
            num = np.log(tg)
            ratio = np.where(wt > 0, num / np.where(wt > 0, wt, 1.0), np.nan)
            ratio[num <= 0] = 0.0
        else:  # pragma: no cover
            raise ValueError(cond)
    return _sup_ratio_verdict(tg, ratio, grid, small_o=cond in ("om3", "om5"))


def _check_om4(w, grid):
    if isinstance(w, PiecewiseLogLinear):
        slopes = w.slopes
        scale = max(1.0, float(np.max(np.abs(slopes))))
        drops = np.diff(slopes) < -1e-12 * scale
        if np.any(drops):
            k = int(np.argmax(drops)) + 1  # corner index where the slope falls
            return fails({"corner_index": k, "u": float(w.us[k]),
                          "slope_before": float(slopes[k - 1]),
                          "slope_after": float(slopes[k])},
                         margin=float(slopes[k] - slopes[k - 1]),
                         notes="exact slope inversion in the profile")
        return holds({"exact": True, "min_slope_increase": float(np.min(np.diff(slopes)))
                      if len(slopes) > 1 else 0.0},
                     notes="profile slopes nondecreasing")
    u = np.linspace(math.log(max(grid.t_min, 1e-6)), math.log(grid.t_max), 801)
    vals = np.asarray(w.phi(u))
    second = np.diff(vals, 2)
    scale = max(1.0, float(np.max(np.abs(vals))))
    worst = float(np.min(second))
    if worst >= -1e-9 * scale:
        return holds({"min_second_difference": worst}, margin=worst,
                     horizon=grid.describe())
    k = int(np.argmin(second)) + 1
    return fails({"u": float(u[k]), "second_difference": worst},
                 margin=worst, horizon=grid.describe(),
                 notes="clear concavity in the sampled log-scale values")


def _check_om6(w, grid):
    if not w.nondecreasing:
        raise NotMonotone("om6 check requires a nondecreasing weight")
    tg = grid.points()
    wt = np.asarray(w.evaluate(tg))
    last, prev = _split_top(tg)
    for k in range(1, 41):
        H = 2.0 ** k
        gap = 2 * wt - np.asarray(w.evaluate(H * tg))
        if float(np.max(gap)) <= H:
            sup_last = float(np.max(gap[last]))
            sup_prev = float(np.max(gap[prev]))
            if sup_last <= max(sup_prev * 1.05 + 1e-9, 0.0) or sup_last <= 0:
                return holds({"H": H}, margin=H - float(np.max(gap)),
                             horizon=grid.describe())
    return inconclusive(horizon=grid.describe(),
                        notes="no H up to 2^40 certified at this horizon")


def _check_om_nq(w, grid):
    T = grid.t_max
    r1 = growth.kappa(w, 1.0, T)
    if r1.divergent:
        return inconclusive(horizon=grid.describe(),
                            notes=f"integrand decay test failed: {r1.evidence}")
    r2 = growth.kappa(w, 1.0, 2 * T)
    if r2.divergent or abs(r2.value - r1.value) > 1e-6 * (abs(r1.value) + 1.0):
        return inconclusive(margin=abs(r2.value - r1.value) if not r2.divergent else None,
                            horizon=grid.describe(),
                            notes="value still moving under horizon doubling")
    return holds({"integral": r1.value, "tail_interval": [r1.tail_low, r1.tail_high]},
                 margin=abs(r2.value - r1.value), horizon=grid.describe())


def _check_om_snq(w, grid):
    y = np.geomspace(max(grid.t_min, 1.0), min(grid.t_max, 1e5), 30)
    vals = []
    for yy in y:
        res = growth.kappa(w, float(yy), grid.t_max)
        if res.divergent:
            return inconclusive(notes=f"kappa divergent at y={yy}",
                                horizon=grid.describe())
        vals.append(res.value)
    wy = np.asarray(w.evaluate(y))
    ratio = np.asarray(vals) / (wy + 1.0)
    return _sup_ratio_verdict(y, ratio, grid, small_o=False)


def _check_alpha0(w, grid):
    t0 = max(grid.t_min * 10, 1.0)
    tg = grid.points()
    tg = tg[(tg >= t0)]
    lam = np.geomspace(1.0, 2.0 ** 10, 22)
    wt = np.asarray(w.evaluate(tg))
    ok = wt > 0
    if not np.any(ok):
        return inconclusive(notes="weight vanishes on the whole test range")
    needed = np.zeros_like(tg)
    for L in lam:
        wl = np.asarray(w.evaluate(L * tg))
        with np.errstate(divide="ignore", invalid="ignore"):
            c = np.where(ok, wl / (L * np.where(ok, wt, 1.0)), 0.0)
        needed = np.maximum(needed, c)
    last, prev = _split_top(tg)
    sup_last = float(np.max(needed[last])) if np.any(last) else math.inf
    sup_prev = float(np.max(needed[prev])) if np.any(prev) else sup_last
    if sup_last <= sup_prev * 1.05 + 1e-9:
        C = float(np.max(needed)) * 1.05
        return holds({"C": C, "t0": t0, "lambda_max": float(lam[-1])},
                     margin=C - float(np.max(needed)), horizon=grid.describe())
    return inconclusive(margin=sup_last, horizon=grid.describe(),
                        notes="scaling constant still growing at horizon")


def _check_om_sub(w, grid):
    # the index-addition scan needs a uniform grid with 0, so small- and
    # large-argument violations are probed on separate linear scales
    n = 512
    scales = [s for s in (2.0, 64.0, 2048.0, grid.t_max) if s <= grid.t_max]
    worst, wi, wj, wtg = -np.inf, 0, 0, None
    concave = True
    for t_max in dict.fromkeys(scales):
        tg = np.linspace(0.0, t_max, n)
        vals = np.asarray(w.evaluate(tg))
        gap, i, j = _kernels.pairwise_subadd_violation(vals)
        tol = 1e-9 * (1.0 + float(np.max(vals)))
        if float(gap) > worst:
            worst, wi, wj, wtg = float(gap), int(i), int(j), tg
        concave = concave and bool(np.all(np.diff(vals, 2) <= tol)) \
            and float(vals[0]) == 0.0
    tol = 1e-9 * (1.0 + float(np.max(np.asarray(w.evaluate(wtg)))))
    if worst > tol:
        return fails({"s": float(wtg[wi]), "t": float(wtg[wj]), "violation": worst},
                     margin=worst, horizon=grid.describe())
    if concave and w.nondecreasing:
        return holds({"reason": "concave with value 0 at the origin", "scan_max_gap": worst},
                     margin=-worst, horizon=grid.describe())
    return inconclusive(margin=worst, horizon=grid.describe(),
                        notes="no violation found, but subadditivity beyond the grid unproven")


def _check_normalized(w, grid):
    ts = np.linspace(0.0, 1.0, 64)
    vals = np.asarray(w.evaluate(ts))
    if np.any(vals > 0):
        k = int(np.argmax(vals > 0))
        return fails({"t": float(ts[k]), "value": float(vals[k])})
    if w.normalized:
        return holds({"flag": True, "samples_zero": True})
    return inconclusive(notes="samples vanish on [0,1] but no structural guarantee")


def _check_nondecreasing(w, grid):
    tg = np.concatenate([np.linspace(0, 1, 50)[1:], grid.points()])
    vals = np.asarray(w.evaluate(tg))
    diffs = np.diff(vals)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.any(diffs < -1e-12 * scale):
        k = int(np.argmax(diffs < -1e-12 * scale))
        return fails({"t_left": float(tg[k]), "t_right": float(tg[k + 1]),
                      "drop": float(diffs[k])})
    if w.nondecreasing:
        return holds({"flag": True, "grid_monotone": True})
    return inconclusive(notes="monotone on samples but flag not declared")


def _check_unbounded(w, grid):
    if isinstance(w, PiecewiseLogLinear):
        if w.final_slope > 0:
            return holds({"exact": True, "final_slope": float(w.final_slope)})
        bound = float(np.max(w.vs))
        return fails({"sup": bound}, notes="profile levels off; weight is bounded")
    chunks = grid.decades()
    if len(chunks) < 3:
        raise HorizonTooSmall("need at least 3 decades for the unboundedness trend")
    tops = [float(np.max(np.asarray(w.evaluate(c)))) for c in chunks]
    if all(b > a * (1 + 1e-3) + 1e-12 for a, b in zip(tops[:-1], tops[1:])):
        return holds({"decade_maxima": tops}, horizon=grid.describe())
    return inconclusive(horizon=grid.describe(),
                        notes="decade maxima not strictly growing")


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def check_condition(w: WeightFunction, cond: str, grid: GridSpec = DEFAULT_GRID) -> Verdict:
    if cond not in CONDITION_IDS:
        raise ValueError(f"unknown condition {cond!r}; choose from {CONDITION_IDS}")
    if cond in _ASYMPTOTIC:
        _require_decades(grid)

    exact = _closed_form(w, cond)
    if exact is True:
        return holds({"closed_form": True}, notes="exact family-level answer")
    if exact is False:
        return fails({"closed_form": True}, notes="exact family-level refutation")

    if cond in ("om1", "om2", "om3", "om3w", "om5"):
        return _ratio_condition(w, cond, grid)
    if cond == "om4":
        return _check_om4(w, grid)
    if cond == "om6":
        return _check_om6(w, grid)
    if cond == "om_nq":
        return _check_om_nq(w, grid)
    if cond == "om_snq":
        return _check_om_snq(w, grid)
    if cond == "alpha0":
        return _check_alpha0(w, grid)
    if cond == "om_sub":
        return _check_om_sub(w, grid)
    if cond == "normalized":
        return _check_normalized(w, grid)
    if cond == "nondecreasing":
        return _check_nondecreasing(w, grid)
    if cond == "unbounded_limit":
        return _check_unbounded(w, grid)
    raise AssertionError(cond)  # pragma: no cover


@dataclass
class ClassReport:
    conditions: dict
    classes: dict

    def to_dict(self):
        return {
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
            "classes": {k: v.to_dict() for k, v in self.classes.items()},
        }


def _zero_at_origin(w):
    v = float(w.evaluate(0.0))
    if v == 0.0:
        return holds({"value": 0.0})
    return fails({"value": v})


def classify(w: WeightFunction, grid: GridSpec = DEFAULT_GRID) -> ClassReport:
    """Membership verdicts for the standard weight classes."""
    conds = {c: check_condition(w, c, grid) for c in CONDITION_IDS}
    continuous = holds({"by_representation": True},
                       notes="all supported representations are continuous")
    zero0 = _zero_at_origin(w)

    base = {
        "continuous": continuous,
        "zero_at_origin": zero0,
        "nondecreasing": conds["nondecreasing"],
        "unbounded_limit": conds["unbounded_limit"],
    }
    weight_function = conjunction(base)
    bmt = conjunction({**base, "om1": conds["om1"], "om3": conds["om3"],
                       "om4": conds["om4"]})
    bb = conjunction({
        "continuous": continuous, "zero_at_origin": zero0,
        "om_sub": conds["om_sub"], "om_nq": conds["om_nq"], "om3w": conds["om3w"],
    })
    matrix_admissible = conjunction({
        "nondecreasing": conds["nondecreasing"], "om3": conds["om3"],
    })
    pv = conjunction({
        "nondecreasing": conds["nondecreasing"], "om_sub": conds["om_sub"],
        "om_nq": conds["om_nq"], "om3w": conds["om3w"],
    })

    classes = {
        "weight_function": weight_function,
        "bmt": bmt,
        "bb": bb,
        "matrix_admissible": matrix_admissible,
        "petzsche_vogt_1_4": pv,
        "petzsche_vogt_5": conds["om3"],
        "petzsche_vogt_6": conds["om2"],
    }

    # a weight can miss subadditivity itself yet be equivalent to its own
    # kappa transform, which is concave; that rescues membership up to
    # equivalence
    if not bb.holds:
        try:
            ke = growth.kappa_equivalence_check(w, T=grid.t_max)
        except Exception as exc:  # evaluation trouble should not sink the report
            ke = inconclusive(notes=f"kappa equivalence unavailable: {exc}")
        classes["bb_equivalent"] = conjunction({
            "kappa_equivalence": ke, "om3w": conds["om3w"],
            "continuous": continuous, "zero_at_origin": zero0,
        })
    else:
        classes["bb_equivalent"] = bb
    return ClassReport(conditions=conds, classes=classes)


@dataclass
class ConsistencyReport:
    items: dict
    edges: list
    consistent: bool

    def to_dict(self):
        return {
            "items": {k: (v.to_dict() if isinstance(v, Verdict) else v)
                      for k, v in self.items.items()},
            "edges": self.edges,
            "consistent": self.consistent,
        }


def check_implication_chain(w: WeightFunction, grid: GridSpec = DEFAULT_GRID,
                            index_horizon: float = 1e8) -> ConsistencyReport:
    """Cross-check the one-way street between index > 1, the integral
    conditions, sublinearity, and the scaling bound."""
    if not w.nondecreasing:
        raise NotMonotone("implication chain requires a nondecreasing weight")

    est = growth_gt1 = None
    est = growth.growth_index(w, gamma_grid=(1.25, 2.0), T=index_horizon, refine=False)
    if est.lower_bound > 1.0:
        growth_gt1 = holds({"lower_bound": est.lower_bound})
    elif est.upper_bound <= 1.0:
        growth_gt1 = fails({"upper_bound": est.upper_bound})
    else:
        growth_gt1 = inconclusive(notes="index bracket straddles 1")

    items = {
        "gamma_gt_1": growth_gt1,
        "om_snq": check_condition(w, "om_snq", grid),
        "om_nq": check_condition(w, "om_nq", grid),
        "om5": check_condition(w, "om5", grid),
        "om2": check_condition(w, "om2", grid),
        "alpha0": check_condition(w, "alpha0", grid),
    }

    chain = [("gamma_gt_1", "om_snq"), ("om_snq", "gamma_gt_1"),
             ("om_snq", "om_nq"), ("om_nq", "om5"), ("om5", "om2"),
             ("gamma_gt_1", "alpha0")]
    edges = []
    consistent = True
    for a, b in chain:
        va, vb = items[a], items[b]
        ok = not (va.holds and vb.fails)
        edges.append({"from": a, "to": b, "ok": ok,
                      "skipped": va.inconclusive or vb.inconclusive})
        if not ok:
            consistent = False
            raise ChainViolation(f"{a} holds but {b} fails — checker inconsistency")
    return ConsistencyReport(items=items, edges=edges, consistent=consistent)
