"""Weight function representations and evaluation.

A weight is a nonnegative function w on [0, inf).  Everything downstream
works either with w(t) directly or with its log-reparametrization
phi(u) = w(e^u).  Piecewise-linear profiles are stored directly in the
u-domain so no exp/log round trip is ever needed for them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import EmptyInput, HorizonTooSmall, NonFinite, NotMonotone, ValidationFailed

__all__ = [
    "GridSpec",
    "WeightFunction",
    "Power",
    "Gevrey",
    "Log",
    "LogPower",
    "Exp",
    "PiecewiseLogLinear",
    "WeightSequence",
    "Associated",
    "Scaled",
    "Dilated",
    "Normalized",
    "evaluate",
    "phi",
    "normalize",
    "associated_weight_function",
    "load_weight",
    "dump_weight",
]


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid on [t_min, t_max]."""

    t_min: float
    t_max: float
    n_points: int = 400
    spacing: str = "logarithmic"

    def __post_init__(self):
        if not (self.t_min < self.t_max):
            raise ValidationFailed("t_min must be < t_max")
        if self.n_points < 2:
            raise ValidationFailed("n_points must be >= 2")
        if self.spacing not in ("linear", "logarithmic"):
            raise ValidationFailed(f"unknown spacing {self.spacing!r}")
        if self.spacing == "logarithmic" and self.t_min <= 0:
            raise ValidationFailed("logarithmic spacing needs t_min > 0")

    def points(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(self.t_min, self.t_max, self.n_points)
        return np.geomspace(self.t_min, self.t_max, self.n_points)

    def decades(self):
        """Split grid points into per-decade chunks (for trend tests)."""
        pts = self.points()
        lo, hi = np.log10(max(self.t_min, 1e-300)), np.log10(self.t_max)
        edges = 10.0 ** np.arange(math.floor(lo), math.ceil(hi) + 1)
        chunks = []
        for a, b in zip(edges[:-1], edges[1:]):
            sel = (pts >= a) & (pts < b * (1 + 1e-12))
            if np.any(sel):
                chunks.append(pts[sel])
        return chunks

    def describe(self):
        return {
            "t_min": self.t_min,
            "t_max": self.t_max,
            "n_points": self.n_points,
            "spacing": self.spacing,
        }


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


class WeightFunction:
    """Base class.  Subclasses implement _eval (t-domain) or _phi (u-domain)."""

    nondecreasing: bool = True
    normalized: bool = False

    # -- evaluation ---------------------------------------------------------
    def _eval(self, t: np.ndarray) -> np.ndarray:
        return self._phi_unchecked(np.log(np.maximum(t, 1e-300)))

    def _phi_unchecked(self, u: np.ndarray) -> np.ndarray:
        """phi values; may contain inf on overflow (callers decide)."""
        with np.errstate(over="ignore"):
            return self._eval(np.exp(np.minimum(u, 709.0)))

    def evaluate(self, t):
        arr, scalar = _as_array(t)
        if np.any(arr < 0):
            raise ValueError("weight argument must be >= 0")
        out = np.asarray(self._eval(arr))
        if not np.all(np.isfinite(out)):
            raise NonFinite("non-finite weight value encountered")
        if np.any(out < 0):
            raise NonFinite("negative weight value; representation invalid")
        return float(out.reshape(-1)[0]) if scalar else out.reshape(arr.shape)

    def phi(self, u):
        arr, scalar = _as_array(u)
        out = np.asarray(self._phi_unchecked(arr))
        if not np.all(np.isfinite(out)):
            raise NonFinite("non-finite phi value encountered")
        return float(out.reshape(-1)[0]) if scalar else out.reshape(arr.shape)

    __call__ = evaluate

    # -- plumbing -----------------------------------------------------------
    def to_json_dict(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_json_dict()})"


@dataclass(frozen=True, repr=False)
class Power(WeightFunction):
    """w(t) = t**alpha."""

    alpha: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValidationFailed("alpha must be > 0")

    def _eval(self, t):
        with np.errstate(over="ignore"):
            return t ** self.alpha

    def _phi_unchecked(self, u):
        with np.errstate(over="ignore"):
            return np.exp(self.alpha * u)

    def to_json_dict(self):
        return {"family": "power", "params": {"alpha": self.alpha}}


class Gevrey(Power):
    """w(t) = t**(1/s); a Power weight indexed the other way around."""

    def __init__(self, s: float):
        if s <= 0:
            raise ValidationFailed("s must be > 0")
        object.__setattr__(self, "s", s)
        super().__init__(alpha=1.0 / s)

    def to_json_dict(self):
        return {"family": "gevrey", "params": {"s": self.s}}


@dataclass(frozen=True, repr=False)
class Log(WeightFunction):
    """w(t) = log(1 + t)."""

    def _eval(self, t):
        return np.log1p(t)

    def _phi_unchecked(self, u):
        # log(1 + e^u) without overflow
        return np.logaddexp(0.0, u)

    def to_json_dict(self):
        return {"family": "log", "params": {}}


@dataclass(frozen=True, repr=False)
class LogPower(WeightFunction):
    """w(t) = log(1 + t)**beta, beta >= 1."""

    beta: float

    def __post_init__(self):
        if self.beta < 1:
            raise ValidationFailed("beta must be >= 1")

    def _eval(self, t):
        return np.log1p(t) ** self.beta

    def _phi_unchecked(self, u):
        return np.logaddexp(0.0, u) ** self.beta

    def to_json_dict(self):
        return {"family": "logpower", "params": {"beta": self.beta}}


@dataclass(frozen=True, repr=False)
class Exp(WeightFunction):
    """w(t) = e^t - 1."""

    def _eval(self, t):
        with np.errstate(over="ignore"):
            return np.expm1(t)

    def to_json_dict(self):
        return {"family": "exp", "params": {}}


class PiecewiseLogLinear(WeightFunction):
    """phi stored as corners (u_k, v_k), affine in between.

    u_0 = 0, v_0 = 0; beyond the last corner phi continues with the final
    segment's slope; for u < 0 (t < 1) the weight is 0, i.e. the profile
    is normalized by construction.
    """

    normalized = True

    def __init__(self, corners):
        pts = np.asarray(corners, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValidationFailed("profile needs >= 2 corners of shape (u, v)")
        us, vs = pts[:, 0].copy(), pts[:, 1].copy()
        if us[0] != 0.0 or vs[0] != 0.0:
            raise ValidationFailed("profile must start at corner (0, 0)")
        if np.any(np.diff(us) <= 0):
            raise ValidationFailed("corner abscissas must be strictly increasing")
        if np.any(vs < 0):
            raise ValidationFailed("corner values must be >= 0")
        self.us = us
        self.vs = vs
        self.slopes = np.diff(vs) / np.diff(us)
        self.final_slope = self.slopes[-1]
        self.nondecreasing = bool(np.all(self.slopes >= 0) and np.all(np.diff(vs) >= -0.0))

    def _phi_unchecked(self, u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return _kernels.pl_eval(u, self.us, self.vs, self.final_slope)

    def _eval(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = self._phi_unchecked(np.log(t[pos]))
        return out

    def to_json_dict(self):
        return {"profile": [[float(u), float(v)] for u, v in zip(self.us, self.vs)]}


@dataclass(frozen=True)
class WeightSequence:
    """Positive sequence M_0..M_P stored as log M_p."""

    logM: tuple

    def __post_init__(self):
        if len(self.logM) < 2:
            raise EmptyInput("sequence needs at least two entries")
        if not all(np.isfinite(self.logM)):
            raise ValidationFailed("sequence entries must be positive and finite")

    @classmethod
    def from_values(cls, M):
        M = np.asarray(M, dtype=float)
        if np.any(M <= 0):
            raise ValidationFailed("sequence entries must be > 0")
        return cls(tuple(np.log(M)))

    @property
    def P(self):
        return len(self.logM) - 1

    def roots(self):
        """(log M_p)/p for p >= 1 — the sequence whose divergence matters."""
        lm = np.asarray(self.logM)
        p = np.arange(1, len(lm))
        return (lm[1:] - lm[0]) / p

    def is_log_convex(self, tol=1e-12):
        lm = np.asarray(self.logM)
        return bool(np.all(np.diff(lm, 2) >= -tol))


def associated_weight_function(M: WeightSequence, t):
    """sup_p log(M_0 t^p / M_p), computed in the log-domain.

    Returns 0 at t = 0 (the p = 0 term, with the 0^0 := 1 convention).
    Raises HorizonTooSmall if the argmax hits the last stored index.
    """
    arr, scalar = _as_array(t)
    if np.any(arr < 0):
        raise ValueError("t must be >= 0")
    lm = np.asarray(M.logM)
    p = np.arange(len(lm))
    out = np.zeros(arr.shape)
    pos = arr > 0
    if np.any(pos):
        logt = np.log(arr[pos])
        terms = p[None, :] * logt[:, None] - (lm[None, :] - lm[0])
        arg = np.argmax(terms, axis=1)
        vals = np.take_along_axis(terms, arg[:, None], axis=1)[:, 0]
        if np.any((arg == M.P) & (vals > 0)):
            bad = arr[pos][(arg == M.P) & (vals > 0)].flat[0]
            raise HorizonTooSmall(f"supremum not attained below index P={M.P} at t={bad}")
        out[pos] = np.maximum(vals, 0.0)
    return float(out) if scalar else out


class Associated(WeightFunction):
    """w = the function associated with a sequence M (always convex in u)."""

    def __init__(self, M: WeightSequence, increase_from: int = 0):
        r = M.roots()
        tail = r[max(increase_from, 1) - 1:]
        if len(tail) >= 2 and not np.all(np.diff(tail) > 0):
            raise ValidationFailed(
                "(M_p)^(1/p) must strictly increase beyond the declared index"
            )
        self.M = M
        self.increase_from = increase_from
        self.normalized = bool(min(r) >= 0)

    def _eval(self, t):
        return associated_weight_function(self.M, t)

    def to_json_dict(self):
        return {"sequence": [float(x) for x in self.M.logM]}


class Scaled(WeightFunction):
    """c * base(t)."""

    def __init__(self, c: float, base: WeightFunction):
        if c <= 0:
            raise ValidationFailed("scale must be > 0")
        self.c = c
        self.base = base
        self.nondecreasing = base.nondecreasing
        self.normalized = base.normalized

    def _eval(self, t):
        return self.c * self.base._eval(t)

    def _phi_unchecked(self, u):
        return self.c * self.base._phi_unchecked(u)

    def to_json_dict(self):
        return {"family": "scaled", "params": {"c": self.c}, "base": self.base.to_json_dict()}


class Dilated(WeightFunction):
    """base(c * t)."""

    def __init__(self, c: float, base: WeightFunction):
        if c <= 0:
            raise ValidationFailed("dilation must be > 0")
        self.c = c
        self.base = base
        self.nondecreasing = base.nondecreasing
        # dilation with c > 1 destroys flatness on [0,1], c <= 1 keeps it
        self.normalized = base.normalized and c <= 1

    def _eval(self, t):
        return self.base._eval(self.c * t)

    def _phi_unchecked(self, u):
        return self.base._phi_unchecked(u + math.log(self.c))

    def to_json_dict(self):
        return {"family": "dilated", "params": {"c": self.c}, "base": self.base.to_json_dict()}


class Normalized(WeightFunction):
    """max(0, base(t) - base(1)) for t > 1, zero on [0, 1]."""

    normalized = True

    def __init__(self, base: WeightFunction):
        if not base.nondecreasing:
            raise NotMonotone("normalize requires a nondecreasing weight")
        self.base = base
        self.shift = float(base.evaluate(1.0))

    def _eval(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.maximum(self.base._eval(t) - self.shift, 0.0)
        out[t <= 1.0] = 0.0
        return out

    def _phi_unchecked(self, u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.maximum(self.base._phi_unchecked(u) - self.shift, 0.0)
        out[u <= 0.0] = 0.0
        return out

    def to_json_dict(self):
        return {"family": "normalized", "params": {}, "base": self.base.to_json_dict()}


# ---------------------------------------------------------------------------
# module-level operation aliases
# ---------------------------------------------------------------------------

def evaluate(w: WeightFunction, t):
    return w.evaluate(t)


def phi(w: WeightFunction, u):
    return w.phi(u)


def normalize(w: WeightFunction) -> WeightFunction:
    if w.normalized and w.evaluate(1.0) == 0.0:
        return w
    return Normalized(w)


# ---------------------------------------------------------------------------
# JSON loading / dumping
# ---------------------------------------------------------------------------

_FAMILIES = {
    "power": lambda p: Power(alpha=p["alpha"]),
    "gevrey": lambda p: Gevrey(s=p["s"]),
    "log": lambda p: Log(),
    "logpower": lambda p: LogPower(beta=p["beta"]),
    "exp": lambda p: Exp(),
}


def load_weight(source) -> WeightFunction:
    """Build a weight from a JSON document (dict, JSON string, or file path)."""
    if isinstance(source, str):
        if source.lstrip().startswith("{"):
            doc = json.loads(source)
        else:
            with open(source) as fh:
                doc = json.load(fh)
    else:
        doc = source
    if "profile" in doc:
        return PiecewiseLogLinear(doc["profile"])
    if "sequence" in doc:
        return Associated(WeightSequence(tuple(float(x) for x in doc["sequence"])),
                          increase_from=int(doc.get("increase_from", 0)))
    family = doc.get("family")
    params = doc.get("params", {})
    if family in _FAMILIES:
        return _FAMILIES[family](params)
    if family == "scaled":
        return Scaled(params["c"], load_weight(doc["base"]))
    if family == "dilated":
        return Dilated(params["c"], load_weight(doc["base"]))
    if family == "normalized":
        return Normalized(load_weight(doc["base"]))
    raise ValidationFailed(f"unknown weight document: {doc!r}")


def dump_weight(w: WeightFunction) -> dict:
    return w.to_json_dict()
