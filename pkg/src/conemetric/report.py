"""Uniform record for inequality verifications."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

CERTIFIED = "CERTIFIED"
ADVISORY = "ADVISORY"
EXPLORATORY = "EXPLORATORY"
NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass
class CheckReport:
    """One verified inequality: lhs <= rhs up to an absolute tolerance.

    ``status`` qualifies the soundness of the comparison: CERTIFIED means
    every ingredient was computed by a closed form or certified solver;
    ADVISORY means a sampled lower bound entered on the large side, so a
    failure is not a disproof; EXPLORATORY marks conjecture probes whose
    outcome is logged, not asserted; NOT_APPLICABLE marks precondition
    failures.
    """

    context: str
    lhs: float
    rhs: float
    abs_tol: float = 1e-9
    status: str = CERTIFIED
    tolerances: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        if math.isinf(self.rhs) and math.isinf(self.lhs):
            return 0.0
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        if self.status == NOT_APPLICABLE:
            return True
        return self.slack >= -self.abs_tol

    @property
    def certified_failure(self) -> bool:
        return self.status == CERTIFIED and not self.passed

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        if self.status == NOT_APPLICABLE:
            mark = "SKIP"
        return (
            f"[{mark}] {self.context}: lhs={self.lhs:.9g} rhs={self.rhs:.9g} "
            f"slack={self.slack:.3g} ({self.status.lower()})"
        )
