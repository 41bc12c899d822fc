"""Three-valued verdicts for finite-horizon checks of asymptotic conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Optional[dict] = None
    witness: Optional[dict] = None
    margin: Optional[float] = None
    horizon: Optional[dict] = None
    notes: str = ""

    def __post_init__(self):
        if self.status is Status.HOLDS and self.certificate is None:
            raise ValueError("Holds verdict requires a certificate")
        if self.status is Status.FAILS and self.witness is None:
            raise ValueError("Fails verdict requires a witness")

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.status is Status.INCONCLUSIVE

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "certificate": self.certificate,
            "witness": self.witness,
            "margin": self.margin,
            "horizon": self.horizon,
            "notes": self.notes,
        }


def holds(certificate: dict, margin=None, horizon=None, notes="") -> Verdict:
    return Verdict(Status.HOLDS, certificate=certificate, margin=margin,
                   horizon=horizon, notes=notes)


def fails(witness: dict, margin=None, horizon=None, notes="") -> Verdict:
    return Verdict(Status.FAILS, witness=witness, margin=margin,
                   horizon=horizon, notes=notes)


def inconclusive(margin=None, horizon=None, notes="", certificate=None) -> Verdict:
    return Verdict(Status.INCONCLUSIVE, certificate=certificate, margin=margin,
                   horizon=horizon, notes=notes)


def conjunction(parts: dict) -> Verdict:
    """Combine named sub-verdicts: all hold -> Holds, any fails -> Fails."""
    if any(v.fails for v in parts.values()):
        name = next(k for k, v in parts.items() if v.fails)
        return fails({"failing_part": name, "witness": parts[name].witness})
    if all(v.holds for v in parts.values()):
        return holds({k: v.certificate for k, v in parts.items()})
    pending = [k for k, v in parts.items() if v.inconclusive]
    return inconclusive(notes=f"undecided parts: {', '.join(pending)}")
