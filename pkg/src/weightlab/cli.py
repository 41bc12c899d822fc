"""Command-line front end.

Subcommands: analyze, classify, conjugate, matrix, index, kappa, compare,
matrix-compare, lp-experiment, counterexample, report.  Every command
writes a deterministic JSON document (sorted keys, no timestamps) with a
schema_version field; --emit csv additionally writes curve tables.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import conditions, conjugate, core, counterexample, growth, lpspace, relations
from .errors import JHorizonTooSmall, WeightlabError
from .verdict import Verdict

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _clean(obj):
    """Recursively convert report content to plain JSON-safe values."""
    if isinstance(obj, Verdict):
        return _clean(obj.to_dict())
    if hasattr(obj, "to_dict"):
        return _clean(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    return str(obj)


def _statuses(obj, acc):
    if isinstance(obj, dict):
        if "status" in obj and obj.get("status") in ("holds", "fails",
                                                     "inconclusive"):
            acc.append(obj["status"])
        for v in obj.values():
            _statuses(v, acc)
    elif isinstance(obj, list):
        for v in obj:
            _statuses(v, acc)
    return acc


def _write_report(report, args):
    doc = json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)


def emit_plot_data(report, out_dir="."):
    """One CSV per sampled curve in the report; returns written paths."""
    paths = []
    curves = report.get("curves", {})
    for name in sorted(curves):
        curve = curves[name]
        path = os.path.join(out_dir, f"{name}.csv")
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t", "value"])
            for t, v in zip(curve["t"], curve["value"]):
                wr.writerow([repr(float(t)), repr(float(v))])
        paths.append(path)
    return paths


def _load_weight(path):
    with open(path) as fh:
        return core.load_weight(json.load(fh))


def _grid_from(args):
    if getattr(args, "horizon", None):
        return core.GridSpec(1e-2, float(args.horizon), 600)
    return conditions.DEFAULT_GRID


def _matrix_from(kind, w):
    if kind in ("exp", "exponential"):
        return relations.WeightMatrix.exponential(w)
    if kind in ("dil", "dilatation"):
        return relations.WeightMatrix.dilatation(w)
    raise WeightlabError(f"unknown matrix kind {kind!r}")


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_analyze(args):
    w = _load_weight(args.weight)
    grid = _grid_from(args)
    conds = (conditions.CONDITION_IDS if args.conditions in (None, "all")
             else tuple(args.conditions.split(",")))
    return {"conditions": {c: conditions.check_condition(w, c, grid)
                           for c in conds},
            "weight": w.to_json_dict()}


def _cmd_classify(args):
    w = _load_weight(args.weight)
    return {"classification": conditions.classify(w, _grid_from(args)),
            "weight": w.to_json_dict()}


def _cmd_conjugate(args):
    w = _load_weight(args.weight)
    x_max = float(args.xmax)
    prof = conjugate.young_conjugate(w, x_max)
    xs = np.linspace(0.0, min(x_max, prof.slope_cap), 201)
    vals = np.atleast_1d(prof.value(xs))
    report = {"conjugate": prof.to_dict(),
              "curves": {"conjugate": {"t": list(xs), "value": list(vals)}},
              "weight": w.to_json_dict()}
    return report


def _cmd_matrix(args):
    w = _load_weight(args.weight)
    ells = [float(x) for x in args.ell.split(",")]
    table = {}
    for ell in ells:
        logW = conjugate.associated_weight_matrix(w, ell, int(args.jmax))
        table[f"{ell:g}"] = list(np.asarray(logW))
    return {"log_matrix": table, "j_max": int(args.jmax),
            "weight": w.to_json_dict()}


def _cmd_index(args):
    w = _load_weight(args.weight)
    T = float(args.horizon) if args.horizon else 1e8
    gammas = None
    if args.gammas:
        gammas = tuple(float(v) for v in args.gammas.split(","))
    est = growth.growth_index(w, gamma_grid=gammas, T=T)
    return {"growth_index": est, "weight": w.to_json_dict()}


def _cmd_kappa(args):
    w = _load_weight(args.weight)
    T = float(args.horizon) if args.horizon else 1e6
    ys = [float(v) for v in (args.y or "1,4,100").split(",")]
    vals = {f"{y:g}": growth.kappa(w, y, T) for y in ys}
    return {"kappa": vals,
            "equivalence": growth.kappa_equivalence_check(w, T=T),
            "weight": w.to_json_dict()}


def _cmd_compare(args):
    sigma = _load_weight(args.sigma)
    tau = _load_weight(args.tau)
    rels = (args.rel or "preceq").split(",")
    grid = _grid_from(args)
    out = {r: relations.compare(sigma, tau, r, grid) for r in rels}
    return {"compare": out, "sigma": sigma.to_json_dict(),
            "tau": tau.to_json_dict()}


def _cmd_matrix_compare(args):
    S = _matrix_from(args.s_type, _load_weight(args.s_weight))
    T = _matrix_from(args.t_type, _load_weight(args.t_weight))
    rels = (args.rel or "beurling").split(",")
    return {"matrix_compare": {r: relations.matrix_relation(S, T, r)
                               for r in rels}}


def _cmd_lp_experiment(args):
    S = _matrix_from(args.s_type, _load_weight(args.s))
    T = _matrix_from(args.t_type, _load_weight(args.t))
    p = math.inf if args.p in ("inf", "oo") else float(args.p)
    rep = lpspace.inclusion_experiment(S, T, p, kind=args.type)
    return {"lp_experiment": rep}


def _cmd_counterexample(args):
    J = int(args.J)
    t1 = float(args.t1)
    if args.delta == "default":
        delta = counterexample.default_delta(J)
    elif args.delta.startswith("power:"):
        delta = counterexample.power_delta(counterexample.default_delta(J),
                                          float(args.delta.split(":", 1)[1]))
    else:
        raise WeightlabError(f"unknown delta spec {args.delta!r}")
    prof = counterexample.construct(delta, t1, J)

    wanted = (args.certify or "all")
    todo = ("verify", "nonconvexity", "slowvar", "nonequivalence", "om4") \
        if wanted == "all" else tuple(wanted.split(","))
    results = {"parameters": {"J": J, "t1": t1, "delta": args.delta,
                              "A_max": float(args.A_max)}}
    if "verify" in todo:
        bundle = counterexample.verify_profile(prof)
        results["invariants"] = {"all_ok": bundle.all_ok,
                                 "failures": bundle.failures(),
                                 "checked": len(bundle.items)}
    if "nonconvexity" in todo:
        try:
            results["nonconvexity"] = {
                "certified": counterexample.nonconvexity_certificate(
                    prof, float(args.A_max)),
                "complete": True}
        except JHorizonTooSmall as exc:
            results["nonconvexity"] = {
                "certified": exc.certified, "complete": False,
                "first_unreachable_A": exc.A,
                "required_block_estimate": exc.required_j}
    if "slowvar" in todo:
        results["slow_variation"] = counterexample.slow_variation_certificate(
            prof, (0.5, 1.0, 2.0, 5.0))
    if "nonequivalence" in todo:
        results["nonequivalence"] = {
            "vs_sqrt_delta": counterexample.nonequivalence(
                delta, counterexample.power_delta(delta, 0.5), J, t1),
            "vs_itself": counterexample.nonequivalence(delta, delta, J, t1)}
    if "om4" in todo:
        results["om4"] = conditions.check_condition(prof.weight, "om4")
    us = np.asarray(prof.weight.us)
    vs = np.asarray(prof.weight.vs)
    keep = us < 1e6
    results["curves"] = {"profile": {"t": list(us[keep]), "value": list(vs[keep])}}
    return results


def _cmd_report(args):
    w = _load_weight(args.weight)
    grid = _grid_from(args)
    out = {"classification": conditions.classify(w, grid),
           "growth_index": growth.growth_index(w, T=min(grid.t_max, 1e8)),
           "kappa_equivalence": growth.kappa_equivalence_check(w, T=grid.t_max),
           "weight": w.to_json_dict()}
    return out


_COMMANDS = {
    "analyze": _cmd_analyze,
    "classify": _cmd_classify,
    "conjugate": _cmd_conjugate,
    "matrix": _cmd_matrix,
    "index": _cmd_index,
    "kappa": _cmd_kappa,
    "compare": _cmd_compare,
    "matrix-compare": _cmd_matrix_compare,
    "lp-experiment": _cmd_lp_experiment,
    "counterexample": _cmd_counterexample,
    "report": _cmd_report,
}


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(prog="weightlab",
                                 description="weight-function calculus toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--emit", default="json", help="json and/or csv")
        p.add_argument("--config", default=None, help="JSON file with defaults")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--horizon", default=None)
        p.add_argument("--expect", choices=["holds"], default=None)
        p.add_argument("--strict", action="store_true")
        p.add_argument("--plot-dir", default=".")

    p = sub.add_parser("analyze")
    p.add_argument("--weight", required=True)
    p.add_argument("--conditions", default=None,
                   help="comma-separated condition ids (default: all)")
    common(p)

    p = sub.add_parser("classify")
    p.add_argument("--weight", required=True)
    common(p)

    p = sub.add_parser("conjugate")
    p.add_argument("--weight", required=True)
    p.add_argument("--xmax", default="1e4")
    common(p)

    p = sub.add_parser("matrix")
    p.add_argument("--weight", required=True)
    p.add_argument("--ell", default="0.5,1,2")
    p.add_argument("--jmax", default="100")
    common(p)

    p = sub.add_parser("index")
    p.add_argument("--weight", required=True)
    p.add_argument("--gammas", default=None,
                   help="comma-separated gamma grid to test (default: built-in)")
    common(p)

    p = sub.add_parser("kappa")
    p.add_argument("--weight", required=True)
    p.add_argument("--y", default="1,4,100")
    common(p)

    p = sub.add_parser("compare")
    p.add_argument("--sigma", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--rel", default="preceq")
    common(p)

    p = sub.add_parser("matrix-compare")
    p.add_argument("--s-type", default="exp")
    p.add_argument("--s-weight", required=True)
    p.add_argument("--t-type", default="exp")
    p.add_argument("--t-weight", required=True)
    p.add_argument("--rel", default="beurling")
    common(p)

    p = sub.add_parser("lp-experiment")
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--s-type", default="exp")
    p.add_argument("--t-type", default="exp")
    p.add_argument("--p", default="2")
    p.add_argument("--type", default="beurling", choices=["beurling", "roumieu"])
    common(p)

    p = sub.add_parser("counterexample")
    p.add_argument("--J", default="60")
    p.add_argument("--t1", default="0.5")
    p.add_argument("--delta", default="default")
    p.add_argument("--certify", default="all")
    # the largest ladder rung a J=60 profile can witness; larger rungs need
    # proportionally more blocks than doubles can represent
    p.add_argument("--A-max", dest="A_max", default="64")
    common(p)

    p = sub.add_parser("report")
    p.add_argument("--weight", required=True)
    common(p)

    return ap


def _apply_config(args):
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        for key, value in cfg.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and getattr(args, attr) in (None, False):
                setattr(args, attr, value)
    return args


def run(argv=None) -> int:
    ap = _build_parser()
    try:
        args = _apply_config(ap.parse_args(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    threads = os.environ.get("WEIGHTLAB_THREADS")
    try:
        result = _COMMANDS[args.command](args)
    except (WeightlabError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1

    report = {"schema_version": SCHEMA_VERSION,
              "command": args.command,
              "seed": args.seed,
              "threads_cap": int(threads) if threads else None,
              "results": _clean(result)}
    _write_report(report, args)
    if "csv" in (args.emit or "").split(","):
        emit_plot_data(report["results"], args.plot_dir)

    statuses = _statuses(report["results"], [])
    if args.expect == "holds" and "fails" in statuses:
        return 2
    if args.strict and "inconclusive" in statuses:
        return 3
    return 0


def main():  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
