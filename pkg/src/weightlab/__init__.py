"""Numerical calculus for weight functions: growth conditions, Young
conjugates, associated matrices, comparison relations, weighted L^p
experiments, and a plateau-based counterexample generator."""

from . import (conditions, conjugate, counterexample, errors, growth, lpspace,
               relations)
from .core import (Associated, Dilated, Exp, Gevrey, GridSpec, Log, LogPower,
                   Normalized, PiecewiseLogLinear, Power, Scaled,
                   WeightFunction, WeightSequence, dump_weight, load_weight)
from .verdict import Status, Verdict

__version__ = "0.1.0"

__all__ = [
    "conditions", "conjugate", "counterexample", "errors", "growth",
    "lpspace", "relations",
    "Associated", "Dilated", "Exp", "Gevrey", "GridSpec", "Log", "LogPower",
    "Normalized", "PiecewiseLogLinear", "Power", "Scaled", "WeightFunction",
    "WeightSequence", "dump_weight", "load_weight",
    "Status", "Verdict", "__version__",
]
