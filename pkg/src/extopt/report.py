"""Solver result container and the status vocabulary shared across modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
    from .combinatorial import DeltaCertificate
    from .continuous import DuoSolution, TauPair
    from .model import Instance

PROVEN = "PROVEN"
CONJECTURED = "CONJECTURED"
CONFIRMED = "CONFIRMED"
VIOLATED = "VIOLATED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class SolveReport:
    """A solution vector with its exact objective and solver provenance.

    ``status`` is PROVEN when a theorem certifies optimality and CONJECTURED
    when only the general duo construction backs it.  Certificates of the
    widest-gap search and the gap bounds ride along when available.
    """

    instance: "Instance"
    vector: tuple[Fraction, ...]
    objective: Fraction
    status: str
    method: str
    delta_cert: Optional["DeltaCertificate"] = None
    tau_main: Optional["TauPair"] = None
    tau_next: Optional["TauPair"] = None
    duo: Optional["DuoSolution"] = None

    @property
    def delta_star(self) -> int | None:
        if self.delta_cert is not None:
            return self.delta_cert.delta_star
        if self.method == "combinatorial/middle-point":
            return self.instance.n + 1
        return None
