"""Pairwise growth relations, weight matrices, and their comparison calculus.

Scalar relations between weights sigma, tau (all inequalities for every t):

    le         tau <= sigma pointwise
    preceq     tau <= C sigma + C for some C
    sim        preceq in both directions
    triangle   for every eps > 0 there is C with tau <= eps sigma + C
    preceq_c   tau(t) <= sigma(C1 t) + C2
    sim_c      preceq_c in both directions
    triangle_c for every eps > 0 there is C with tau(t) <= sigma(eps t) + C

Matrix relations (sigma^n from S, tau^ell from T):

    beurling   for all ell exists n, C:   tau^ell <= sigma^n + C
    roumieu    for all n exists ell, C:   tau^ell <= sigma^n + C
    triangle   for all ell, n exists D:   tau^ell <= sigma^n + D
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Dilated, Exp, GridSpec, Scaled, WeightFunction
from .errors import (BridgeViolation, HorizonTooSmall, IndexSearchExhausted,
                     NotMonotone, ValidationFailed)
from .verdict import Status, Verdict, conjunction, fails, holds, inconclusive

__all__ = [
    "WeightMatrix",
    "RelationVerdict",
    "LadderReport",
    "DEFAULT_ELL_GRID",
    "compare",
    "bridge_check",
    "matrix_relation",
    "truncated_matrix_relation",
    "matrix_condition",
]

DEFAULT_GRID = GridSpec(1e-2, 1e6, 600)
DEFAULT_ELL_GRID = tuple(2.0 ** k for k in range(-6, 7))
_EXTENDED_ELL_GRID = tuple(2.0 ** k for k in range(-12, 13))
_C_GRID = tuple(2.0 ** k for k in range(41))
_EPS_GRID = (1.0, 0.5, 0.1, 0.01)


# ---------------------------------------------------------------------------
# weight matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightMatrix:
    """A family {w^ell : ell > 0}, pointwise nondecreasing in ell."""

    kind: str                              # "exponential" | "dilatation" | "explicit"
    base: WeightFunction | None = None
    entries: tuple = ()                    # ((ell, WeightFunction), ...) for explicit
    continuous: bool = True
    nondecreasing: bool = True
    radial: bool = True
    unbounded: bool = True

    @staticmethod
    def exponential(w: WeightFunction) -> "WeightMatrix":
        """w^ell = ell * w."""
        return WeightMatrix(kind="exponential", base=w,
                            nondecreasing=w.nondecreasing)

    @staticmethod
    def dilatation(w: WeightFunction) -> "WeightMatrix":
        """w^ell = w(ell *)."""
        if not w.nondecreasing:
            raise NotMonotone("dilatation-type matrices require a nondecreasing base")
        return WeightMatrix(kind="dilatation", base=w)

    @staticmethod
    def explicit(entries) -> "WeightMatrix":
        items = tuple((float(l), w) for l, w in entries)
        if not items:
            raise ValidationFailed("explicit matrix needs at least one entry")
        ells = [l for l, _ in items]
        if any(b <= a for a, b in zip(ells[:-1], ells[1:])):
            raise ValidationFailed("explicit matrix indices must be strictly increasing")
        nd = all(w.nondecreasing for _, w in items)
        return WeightMatrix(kind="explicit", entries=items, nondecreasing=nd)

    def weight_at(self, ell: float) -> WeightFunction:
        if ell <= 0:
            raise ValidationFailed("matrix index must be positive")
        if self.kind == "exponential":
            return Scaled(ell, self.base)
        if self.kind == "dilatation":
            return Dilated(ell, self.base)
        for l, w in self.entries:
            if math.isclose(l, ell, rel_tol=1e-12):
                return w
        raise KeyError(f"index {ell} not present in the explicit matrix")

    def indices(self, ell_grid, extended=False):
        if self.kind == "explicit":
            return tuple(l for l, _ in self.entries)
        return tuple(_EXTENDED_ELL_GRID) if extended else tuple(ell_grid)

    def verify_pointwise_order(self, ell_grid=DEFAULT_ELL_GRID, grid=DEFAULT_GRID):
        tg = grid.points()
        ells = sorted(self.indices(ell_grid))
        prev = None
        for l in ells:
            cur = np.asarray(self.weight_at(l).evaluate(tg))
            if prev is not None:
                tol = 1e-9 * (1.0 + float(np.max(np.abs(cur))))
                bad = prev > cur + tol
                if np.any(bad):
                    k = int(np.argmax(bad))
                    raise ValidationFailed(
                        f"matrix order violated at t={tg[k]:g} between indices")
            prev = cur


@dataclass(frozen=True)
class RelationVerdict:
    verdict: Verdict
    rel: str
    index_map: dict | None = None

    @property
    def holds(self):
        return self.verdict.holds

    @property
    def fails(self):
        return self.verdict.fails

    @property
    def inconclusive(self):
        return self.verdict.inconclusive

    def to_dict(self):
        return {"rel": self.rel, "verdict": self.verdict.to_dict(),
                "index_map": self.index_map}


# ---------------------------------------------------------------------------
# bounded-gap machinery shared by all relation checks
# ---------------------------------------------------------------------------

def _decade_sups(tg, d):
    T = tg[-1]
    sups = []
    hi = T
    while hi > tg[0] * 10:
        m = (tg > hi / 10) & (tg <= hi)
        if np.any(m):
            sups.append(float(np.max(d[m])))
        hi /= 10
    return sups[::-1]  # chronological: early decades first


def _smallest_C(bound):
    for C in _C_GRID:
        if C >= bound:
            return C
    return None


def _bounded_gap(tg, d, what="gap"):
    """Verdict on sup d < oo from the decade trend of d."""
    sups = _decade_sups(tg, d)
    if len(sups) < 3:
        raise HorizonTooSmall("relation checks need at least 3 decades")
    a, b, c = sups[-3], sups[-2], sups[-1]
    growing = c > b + max(1e-9, 0.05 * abs(b)) and b > a + max(1e-9, 0.05 * abs(a))
    strongly = growing and c > 0 and c >= 1.2 * max(b, 1e-300) and b >= 1.2 * max(a, 1e-300)
    peak = float(np.max(d))
    if strongly:
        k = int(np.argmax(d))
        return fails({"t": float(tg[k]), what: peak,
                      "decade_sups": sups[-3:]},
                     margin=peak, notes=f"{what} grows by >=20% per decade")
    C = _smallest_C(max(peak, 1.0))
    if C is not None and not growing:
        return holds({"C": C, "decade_sups": sups[-3:]}, margin=C - peak)
    return inconclusive(margin=peak, notes=f"{what} trend undecided at horizon")


def _affine_dom(tg, s, t):
    """tau <= C sigma + C: bounded ratio tau/(sigma+1)."""
    with np.errstate(invalid="ignore"):
        r = t / (s + 1.0)
    return _bounded_gap(tg, r, what="ratio")


def _ratio_vanishes(tg, s, t):
    """tau/sigma -> 0, tested on decade suprema of the damped ratio."""
    with np.errstate(invalid="ignore"):
        r = t / (s + 1.0)
    sups = _decade_sups(tg, r)
    if len(sups) < 3:
        raise HorizonTooSmall("ratio trend needs >= 3 decades")
    peak, last = float(max(sups)), float(sups[-1])
    if peak <= 1e-12:
        return holds({"ratio_sup": peak}, margin=-peak)
    if last <= 0.5 * peak and sups[-1] <= sups[-2] <= sups[-3]:
        consts = {f"eps={eps}": float(np.max(t - eps * s))
                  for eps in _EPS_GRID}
        return holds({"eps_constants": consts, "decade_sups": sups},
                     margin=0.5 * peak - last)
    if last >= 0.9 * peak:
        k = int(np.argmax(r))
        return fails({"t": float(tg[k]), "ratio": float(r[k]),
                      "decade_sups": sups},
                     notes="tau/sigma shows no decay across the horizon")
    return inconclusive(notes="ratio decays too slowly to classify")


# ---------------------------------------------------------------------------
# scalar comparisons
# ---------------------------------------------------------------------------

def compare(sigma: WeightFunction, tau: WeightFunction, rel: str,
            grid: GridSpec = DEFAULT_GRID) -> RelationVerdict:
    if grid.t_max / max(grid.t_min, 1e-300) < 1e3:
        raise HorizonTooSmall("compare requires a grid spanning >= 3 decades")
    tg = grid.points()
    s = np.asarray(sigma.evaluate(tg))
    t = np.asarray(tau.evaluate(tg))

    if rel == "le":
        tol = 1e-12 * (1.0 + float(np.max(np.abs(s))))
        bad = t > s + tol
        if np.any(bad):
            k = int(np.argmax(bad))
            v = fails({"t": float(tg[k]), "sigma": float(s[k]), "tau": float(t[k])})
        else:
            v = holds({"pointwise": True}, margin=float(np.min(s - t)))
        return RelationVerdict(v, rel)

    if rel == "preceq":
        return RelationVerdict(_affine_dom(tg, s, t), rel)

    if rel == "sim":
        fwd = compare(sigma, tau, "preceq", grid).verdict
        bwd = compare(tau, sigma, "preceq", grid).verdict
        return RelationVerdict(conjunction({"forward": fwd, "backward": bwd}), rel)

    if rel == "triangle":
        # the eps-quantified bound is equivalent to tau/sigma -> 0, which is
        # scale-free and immune to eps-dependent crossover points beyond the
        # grid horizon
        return RelationVerdict(_ratio_vanishes(tg, s, t), rel)

    if rel == "preceq_c":
        return RelationVerdict(_dilation_dom(sigma, tau, tg, t), rel)

    if rel == "sim_c":
        fwd = compare(sigma, tau, "preceq_c", grid).verdict
        bwd = compare(tau, sigma, "preceq_c", grid).verdict
        return RelationVerdict(conjunction({"forward": fwd, "backward": bwd}), rel)

    if rel == "triangle_c":
        parts = {}
        for eps in _EPS_GRID:
            d = t - np.asarray(sigma.evaluate(eps * tg))
            parts[f"eps={eps}"] = _bounded_gap(tg, d)
        return RelationVerdict(conjunction(parts), rel)

    raise ValueError(f"unknown relation {rel!r}")


def _dilation_dom(sigma, tau, tg, t):
    """tau(t) <= sigma(C1 t) + C2 for some C1, C2."""
    last_peak = prev_peak = None
    for k in range(0, 13):
        C1 = 2.0 ** k
        d = t - np.asarray(sigma.evaluate(C1 * tg))
        v = _bounded_gap(tg, d)
        if v.holds:
            return holds({"C1": C1, "C2": v.certificate["C"]},
                         margin=v.margin)
        prev_peak, last_peak = last_peak, float(np.max(d))
    # dilation-insensitive divergence: doubling C1 no longer helps, and the
    # gap still grows between decades — certifies failure
    if prev_peak is not None and last_peak > 0 \
            and abs(prev_peak - last_peak) <= 0.1 * abs(last_peak):
        d = t - np.asarray(sigma.evaluate(2.0 ** 12 * tg))
        if _bounded_gap(tg, d).fails:
            k = int(np.argmax(d))
            return fails({"t": float(tg[k]), "gap": float(d[k]),
                          "C1_max": 2.0 ** 12},
                         notes="gap diverges and is insensitive to further dilation")
    return inconclusive(notes="no dilation factor up to 2^12 certified")


# ---------------------------------------------------------------------------
# bridges between the affine and dilation-style relations
# ---------------------------------------------------------------------------

def bridge_check(sigma: WeightFunction, tau: WeightFunction,
                 grid: GridSpec = DEFAULT_GRID):
    """Consistency of the four scalar relations with the doubling conditions.

    When one of the two weights is doubling with slack (om6), the affine
    relation transfers to the dilation form; when one is doubling (om1),
    the reverse transfers hold.  A certified violation of any of these
    one-way streets means a checker bug, reported as BridgeViolation.
    """
    from . import conditions
    from .conditions import ConsistencyReport

    if not (sigma.nondecreasing and tau.nondecreasing):
        raise NotMonotone("bridge_check requires nondecreasing weights")

    om1 = conjunction({
        "sigma": conditions.check_condition(sigma, "om1", grid),
        "tau": conditions.check_condition(tau, "om1", grid),
    })
    # "either sigma or tau" suffices for both hypotheses
    om1_any = _any_holds(conditions.check_condition(sigma, "om1", grid),
                         conditions.check_condition(tau, "om1", grid))
    om6_any = _any_holds(conditions.check_condition(sigma, "om6", grid),
                         conditions.check_condition(tau, "om6", grid))

    rels = {r: compare(sigma, tau, r, grid).verdict
            for r in ("preceq", "preceq_c", "triangle", "triangle_c")}

    links = [("om6", "preceq", "preceq_c"),
             ("om1", "preceq_c", "preceq"),
             ("om1", "triangle", "triangle_c"),
             ("om6", "triangle_c", "triangle")]
    hyp = {"om1": om1_any, "om6": om6_any}
    edges = []
    for h, a, b in links:
        applicable = hyp[h].holds and rels[a].holds
        ok = not (applicable and rels[b].fails)
        edges.append({"hypothesis": h, "from": a, "to": b,
                      "applicable": applicable, "ok": ok})
        if not ok:
            raise BridgeViolation(
                f"{h} holds and {a} holds but {b} fails for this pair")
    items = {**{f"rel_{k}": v for k, v in rels.items()},
             "om1_any": om1_any, "om6_any": om6_any}
    return ConsistencyReport(items=items, edges=edges, consistent=True)


def _any_holds(v1: Verdict, v2: Verdict) -> Verdict:
    if v1.holds or v2.holds:
        which = "first" if v1.holds else "second"
        src = v1 if v1.holds else v2
        return holds({"which": which, "inner": src.certificate})
    if v1.fails and v2.fails:
        return fails({"both": [v1.witness, v2.witness]})
    return inconclusive(notes="neither side certified")


# ---------------------------------------------------------------------------
# matrix-level relations
# ---------------------------------------------------------------------------

def _pair_gap(S, T, ell, n, tg):
    tau = np.asarray(T.weight_at(ell).evaluate(tg))
    sig = np.asarray(S.weight_at(n).evaluate(tg))
    return tau - sig


def _search_beurling(S, T, ell_grid, tg):
    index_map = {}
    for ell in sorted(T.indices(ell_grid)):
        found = None
        for n in sorted(S.indices(ell_grid, extended=True)):
            v = _bounded_gap(tg, _pair_gap(S, T, ell, n, tg))
            if v.holds:
                found = (n, v.certificate["C"])
                break
        if found is None:
            return None, ell
        index_map[ell] = {"n": found[0], "C": found[1]}
    return index_map, None


def _search_roumieu(S, T, ell_grid, tg):
    index_map = {}
    for n in sorted(S.indices(ell_grid)):
        found = None
        for ell in sorted(T.indices(ell_grid, extended=True)):
            v = _bounded_gap(tg, _pair_gap(S, T, ell, n, tg))
            if v.holds:
                found = (ell, v.certificate["C"])
                break
        if found is None:
            return None, n
        index_map[n] = {"ell": found[0], "C": found[1]}
    return index_map, None


def _search_triangle(S, T, ell_grid, tg):
    index_map = {}
    for ell in sorted(T.indices(ell_grid)):
        for n in sorted(S.indices(ell_grid)):
            v = _bounded_gap(tg, _pair_gap(S, T, ell, n, tg))
            if v.fails:
                return v, {"ell": ell, "n": n}
            if not v.holds:
                return inconclusive(
                    notes=f"pair (ell={ell}, n={n}) undecided"), None
            index_map[(ell, n)] = v.certificate["C"]
    return holds({"pairs": len(index_map)}), {str(k): v for k, v in index_map.items()}


def _reduction(S, T, rel, grid):
    if S.kind == "exponential" and T.kind == "exponential":
        base = "preceq" if rel in ("beurling", "roumieu") else "triangle"
        return compare(S.base, T.base, base, grid).verdict, base
    if S.kind == "dilatation" and T.kind == "dilatation":
        base = "preceq_c" if rel in ("beurling", "roumieu") else "triangle_c"
        return compare(S.base, T.base, base, grid).verdict, base
    return None, None


def matrix_relation(S: WeightMatrix, T: WeightMatrix, rel: str,
                    ell_grid=DEFAULT_ELL_GRID,
                    grid: GridSpec = DEFAULT_GRID) -> RelationVerdict:
    if rel not in ("beurling", "roumieu", "triangle"):
        raise ValueError(f"unknown matrix relation {rel!r}")
    S.verify_pointwise_order(ell_grid, grid)
    T.verify_pointwise_order(ell_grid, grid)
    # pair certificates are checked far beyond the reporting grid: a large
    # partner index can push the crossover point out by many decades
    tg = np.geomspace(grid.t_min, grid.t_max * 1e6, 2 * grid.n_points)

    red, red_name = _reduction(S, T, rel, grid)

    if rel == "beurling":
        index_map, binding = _search_beurling(S, T, ell_grid, tg)
    elif rel == "roumieu":
        index_map, binding = _search_roumieu(S, T, ell_grid, tg)
    else:
        v, index_map = _search_triangle(S, T, ell_grid, tg)
        if v.fails or v.inconclusive:
            if red is not None and red.fails and v.fails:
                pass  # agreement
            elif red is not None and red.holds and v.fails:
                raise ValidationFailed(
                    f"direct triangle search fails but the {red_name} "
                    "reduction holds")
            return RelationVerdict(v, rel, index_map if v.fails else None)
        v = _reconcile(v, red, red_name, rel)
        return RelationVerdict(v, rel, index_map if v.holds else None)

    if binding is not None:
        if red is not None and red.fails:
            return RelationVerdict(
                fails({"binding_index": binding,
                       "reduction": red.witness},
                      notes=f"no partner index found; {red_name} reduction fails"),
                rel)
        raise IndexSearchExhausted(binding)

    v = holds({"indices_covered": len(index_map)})
    v = _reconcile(v, red, red_name, rel)
    return RelationVerdict(v, rel, index_map if v.holds else None)


def _reconcile(direct: Verdict, red: Verdict | None, red_name, rel) -> Verdict:
    """Cross-check the quantifier search against the scalar reduction.

    For the exponential and dilatation kinds the reduction is an exact
    equivalence, so when it refutes the relation while the index search
    found partners, the partner certificates are a finite-horizon artifact
    (a very large partner index can push the crossover beyond any fixed
    grid) and the refutation wins.  The opposite disagreement -- the search
    failing to find partners the reduction guarantees to exist -- indicates
    a checker bug and is raised.
    """
    if red is None or red.inconclusive or direct.inconclusive:
        return direct
    if direct.status is red.status:
        return direct
    if direct.holds and red.fails:
        return fails({"reduction": red.witness},
                     notes=f"scalar {red_name} reduction refutes {rel}; "
                           "direct index map discarded as a horizon artifact")
    raise ValidationFailed(
        f"matrix {rel} search disagrees with the scalar {red_name} "
        f"reduction: {direct.status.value} vs {red.status.value}")


# ---------------------------------------------------------------------------
# truncated-parameter ladder
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderReport:
    links: tuple

    def to_dict(self):
        return {"links": [{"name": n, "verdict": v.to_dict()} for n, v in self.links]}


def truncated_matrix_relation(S: WeightMatrix, T: WeightMatrix,
                              Lam: float, LamP: float, rel: str,
                              grid: GridSpec = DEFAULT_GRID):
    """Index-restricted comparison with truncation parameters Lam (for S)
    and LamP (for T), for matrices of the scaling kind w^ell = ell w.

    The ladder: the single affine bound tau <= (Lam/LamP) sigma + C gives
    the restricted for-all-small and for-all-large index relations with
    explicit partner indices n = (Lam/LamP) ell resp. ell = n LamP/Lam,
    and those in turn give tau <= (K/K') sigma + D for every K > Lam,
    K' < LamP — which is exactly the truncated triangle relation.
    """
    if rel not in ("beurling_trunc", "roumieu_trunc", "triangle_trunc"):
        raise ValueError(f"unknown truncated relation {rel!r}")
    if S.kind != "exponential" or T.kind != "exponential":
        raise ValidationFailed("truncation ladder is defined for scaling-type matrices")
    if Lam <= 0 or LamP <= 0:
        raise ValidationFailed("truncation parameters must be positive")

    tg = grid.points()
    sig = np.asarray(S.base.evaluate(tg))
    tau = np.asarray(T.base.evaluate(tg))
    ratio = Lam / LamP

    links = []
    v63 = _bounded_gap(tg, tau - ratio * sig)
    links.append(("affine_bound", v63))
    C63 = v63.certificate["C"] if v63.holds else None

    def _scaled_link(name, ells, ns):
        parts = {}
        for ell, n in zip(ells, ns):
            d = ell * tau - n * sig
            bound = ell * C63 if C63 is not None else None
            v = _bounded_gap(tg, d)
            if v.holds and bound is not None:
                peak = float(np.max(d))
                if peak > bound + 1e-9 * (1 + abs(bound)):
                    raise ValidationFailed(
                        f"ladder constant for {name} exceeded the predicted "
                        f"bound {bound:g}")
            parts[f"ell={ell:g},n={n:g}"] = v
        return conjunction(parts)

    ells_small = [f * LamP for f in (0.25, 0.5, 0.9)]
    v61 = _scaled_link("small_indices", ells_small, [ratio * l for l in ells_small])
    links.append(("small_indices", v61))

    ns_large = [f * Lam for f in (1.1, 2.0, 4.0)]
    v62 = _scaled_link("large_indices", [n * LamP / Lam for n in ns_large], ns_large)
    links.append(("large_indices", v62))

    parts64 = {}
    for K, Kp in ((1.01 * Lam, 0.99 * LamP), (2 * Lam, 0.5 * LamP)):
        parts64[f"K={K:g},K'={Kp:g}"] = _bounded_gap(tg, tau - (K / Kp) * sig)
    v64 = conjunction(parts64)
    links.append(("slack_ratios", v64))

    # the slack-ratio family is the truncated triangle relation in index
    # form; verify the equivalence on sampled index pairs
    parts_tri = {}
    for ell in (0.5 * LamP, 0.9 * LamP):
        for n in (1.1 * Lam, 2 * Lam):
            parts_tri[f"ell={ell:g},n={n:g}"] = _bounded_gap(tg, ell * tau - n * sig)
    v_tri = conjunction(parts_tri)
    links.append(("truncated_triangle", v_tri))
    if not v64.inconclusive and not v_tri.inconclusive \
            and v64.status is not v_tri.status:
        raise ValidationFailed("slack-ratio family disagrees with the "
                               "truncated triangle relation")

    # ladder consistency: the affine bound implies every later link
    if v63.holds:
        for name, v in links[1:]:
            if v.fails:
                raise ValidationFailed(
                    f"affine bound holds but ladder link {name} fails")

    chosen = {"beurling_trunc": v61, "roumieu_trunc": v62,
              "triangle_trunc": v_tri}[rel]
    return RelationVerdict(chosen, rel), LadderReport(tuple(links))


# ---------------------------------------------------------------------------
# matrix-level structural conditions
# ---------------------------------------------------------------------------

MATRIX_CONDITIONS = ("mixed_om1_beur", "mixed_om1_roum", "weakom1", "weakom1var",
                     "strongdifferentgrowth", "weakdifferentgrowth",
                     "bounded_roum", "bounded_beur", "unbounded")


def matrix_condition(W: WeightMatrix, cond: str,
                     ell_grid=DEFAULT_ELL_GRID,
                     grid: GridSpec = DEFAULT_GRID) -> Verdict:
    if cond not in MATRIX_CONDITIONS:
        raise ValueError(f"unknown matrix condition {cond!r}")
    tg = grid.points()

    if cond in ("bounded_roum", "bounded_beur", "unbounded"):
        return _boundedness(W, cond, ell_grid, tg, grid)

    if cond in ("mixed_om1_beur", "mixed_om1_roum"):
        if not W.nondecreasing:
            raise NotMonotone("mixed doubling conditions require a "
                              "nondecreasing matrix")
        return _mixed_om1(W, cond, ell_grid, tg)

    if cond in ("weakom1", "weakom1var"):
        return _weak_om1(W, cond, ell_grid, tg)

    if cond == "strongdifferentgrowth":
        return _strong_different_growth(W, ell_grid, tg, grid)

    if cond == "weakdifferentgrowth":
        return _weak_different_growth(W, ell_grid, tg)

    raise AssertionError(cond)  # pragma: no cover


def _boundedness(W, cond, ell_grid, tg, grid):
    from . import conditions
    sups = {}
    verdicts = {}
    for ell in sorted(W.indices(ell_grid)):
        w = W.weight_at(ell)
        try:
            v = conditions.check_condition(w, "unbounded_limit", grid)
        except HorizonTooSmall:
            v = inconclusive(notes="grid too short for the trend")
        verdicts[ell] = v
        sups[ell] = float(np.max(np.asarray(w.evaluate(tg))))
    if cond == "bounded_roum":
        # exists one bounded row: smallest index is the best candidate
        for ell, v in verdicts.items():
            if v.fails:
                return holds({"ell0": ell, "sup": v.witness.get("sup", sups[ell])})
        if all(v.holds for v in verdicts.values()):
            return fails({"all_rows_unbounded": True,
                          "decade_maxima_example": verdicts[min(verdicts)].certificate})
        return inconclusive(notes="some rows undecided")
    if cond == "bounded_beur":
        if all(v.fails for v in verdicts.values()):
            return holds({"sups": {str(k): sups[k] for k in sups}})
        for ell, v in verdicts.items():
            if v.holds:
                return fails({"ell": ell, "certificate": v.certificate})
        return inconclusive(notes="some rows undecided")
    # unbounded: every row tends to infinity
    if all(v.holds for v in verdicts.values()):
        return holds({"rows": len(verdicts)})
    for ell, v in verdicts.items():
        if v.fails:
            return fails({"ell": ell, "witness": v.witness})
    return inconclusive(notes="some rows undecided")


def _mixed_om1(W, cond, ell_grid, tg):
    """Self-applied radial doubling: partner index with w^ell(2t) <= w^n(t) + L."""
    index_map = {}
    if cond == "mixed_om1_beur":
        outer = sorted(W.indices(ell_grid))
        for ell in outer:
            lhs = np.asarray(W.weight_at(ell).evaluate(2 * tg))
            found = None
            for n in sorted(W.indices(ell_grid, extended=True)):
                v = _bounded_gap(tg, lhs - np.asarray(W.weight_at(n).evaluate(tg)))
                if v.holds:
                    found = (n, v.certificate["C"])
                    break
            if found is None:
                return inconclusive(notes=f"no partner index for ell={ell}")
            index_map[ell] = {"n": found[0], "L": found[1]}
    else:
        for n in sorted(W.indices(ell_grid)):
            rhs = np.asarray(W.weight_at(n).evaluate(tg))
            found = None
            for ell in sorted(W.indices(ell_grid, extended=True)):
                v = _bounded_gap(tg, np.asarray(W.weight_at(ell).evaluate(2 * tg)) - rhs)
                if v.holds:
                    found = (ell, v.certificate["C"])
                    break
            if found is None:
                return inconclusive(notes=f"no partner index for n={n}")
            index_map[n] = {"ell": found[0], "L": found[1]}
    return holds({"index_map": {str(k): v for k, v in index_map.items()}})


def _weak_om1(W, cond, ell_grid, tg):
    """Partner index with w^{ell1}(t+1) <= w^ell(t) + C."""
    # scaling-type systems built on e^t: ell1 = ell/e works with C = e,
    # dilation-type systems: ell1 = ell/2 always works for nondecreasing bases
    special = None
    if W.kind == "dilatation":
        special = ("halve", math.e)
    elif W.kind == "exponential" and isinstance(W.base, Exp):
        special = ("over_e", math.e)

    index_map = {}
    outer = sorted(W.indices(ell_grid))
    for given in outer:
        if cond == "weakom1":
            # given = ell on the right-hand side; search the smaller ell1
            rhs = np.asarray(W.weight_at(given).evaluate(tg))
            cands = [c for c in sorted(W.indices(ell_grid, extended=True)) if c <= given]
            if special is not None:
                cands = [given / 2 if special[0] == "halve" else given / math.e] + cands
            found = None
            for ell1 in cands:
                d = np.asarray(W.weight_at(ell1).evaluate(tg + 1.0)) - rhs
                v = _bounded_gap(tg, d)
                if v.holds:
                    found = (ell1, v.certificate["C"])
                    break
            if found is None:
                return inconclusive(notes=f"no smaller partner for ell={given}")
            index_map[given] = {"ell1": found[0], "C": found[1]}
        else:
            # given = ell1 on the left; search the larger ell
            lhs = np.asarray(W.weight_at(given).evaluate(tg + 1.0))
            cands = [c for c in sorted(W.indices(ell_grid, extended=True)) if c >= given]
            found = None
            for ell in cands:
                d = lhs - np.asarray(W.weight_at(ell).evaluate(tg))
                v = _bounded_gap(tg, d)
                if v.holds:
                    found = (ell, v.certificate["C"])
                    break
            if found is None:
                return inconclusive(notes=f"no larger partner for ell1={given}")
            index_map[given] = {"ell": found[0], "C": found[1]}
    cert = {"index_map": {str(k): v for k, v in index_map.items()}}
    if special is not None and cond == "weakom1":
        cert["closed_form_partner"] = special[0]
    return holds(cert)


def _strong_different_growth(W, ell_grid, tg, grid):
    """exists a > 1: every index ell has a smaller ell' with
    w^ell - w^{ell'} >= a log(1 + t) + b."""
    from . import conditions

    reduction = None
    if W.kind == "exponential":
        # (ell - ell') w >= a log(1+t) + b for some smaller index is exactly
        # log-domination by the base weight
        reduction = conditions.check_condition(W.base, "om3", grid)

    log1t = np.log1p(tg)
    for a in (1.5, 2.0):
        index_map = {}
        good = True
        for ell in sorted(W.indices(ell_grid)):
            lhs = np.asarray(W.weight_at(ell).evaluate(tg))
            found = None
            for ellp in sorted(W.indices(ell_grid, extended=True)):
                if ellp >= ell:
                    break
                d = a * log1t - (lhs - np.asarray(W.weight_at(ellp).evaluate(tg)))
                v = _bounded_gap(tg, d)   # need d bounded above: b = -sup d
                if v.holds:
                    found = (ellp, -v.certificate["C"])
                    break
            if found is None:
                good = False
                break
            index_map[ell] = {"ell_prime": found[0], "b": found[1]}
        if good:
            direct = holds({"a": a,
                            "index_map": {str(k): v for k, v in index_map.items()}})
            if reduction is not None and reduction.fails:
                raise ValidationFailed(
                    "direct growth-separation search succeeded although the "
                    "base weight does not dominate log t")
            return direct
    if reduction is not None and reduction.fails:
        return fails({"base_log_domination": reduction.witness
                      or {"closed_form": True}},
                     notes="scaling rows differ by multiples of the base, "
                           "which does not dominate log t")
    if reduction is not None and reduction.holds:
        raise ValidationFailed(
            "base weight dominates log t but the direct separation search "
            "found no certificate")
    return inconclusive(notes="no separation certificate on the index grid")


def _weak_different_growth(W, ell_grid, tg):
    """Some pair of indices whose rows drift apart without bound."""
    ells = sorted(W.indices(ell_grid))
    lo, hi = ells[0], ells[-1]
    d = np.asarray(W.weight_at(hi).evaluate(tg)) - np.asarray(W.weight_at(lo).evaluate(tg))
    v = _bounded_gap(tg, d, what="row_gap")
    if v.fails:  # diverging gap is exactly what the condition asks for
        return holds({"ell0": lo, "ell0_prime": hi,
                      "witness_gap": v.witness}, notes="gap grows without bound")
    if v.holds:
        ells_all = sorted(W.indices(ell_grid, extended=True))
        lo2, hi2 = ells_all[0], ells_all[-1]
        d2 = (np.asarray(W.weight_at(hi2).evaluate(tg))
              - np.asarray(W.weight_at(lo2).evaluate(tg)))
        v2 = _bounded_gap(tg, d2, what="row_gap")
        if v2.fails:
            return holds({"ell0": lo2, "ell0_prime": hi2,
                          "witness_gap": v2.witness})
        if v2.holds:
            return fails({"widest_pair": [lo2, hi2], "sup_gap": float(np.max(d2))},
                         notes="even the widest index pair stays at bounded distance")
    return inconclusive(notes="row gap trend undecided")
