"""Result record shared by every test procedure."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

METHODS = ("JEL", "AJEL", "SCR", "SGN", "CM", "MGG")


@dataclass(frozen=True)
class TestOutcome:
    """Statistic, calibration and decision of one test at level ``alpha``.

    Exactly one calibration is filled: ``p_value`` for the chi-square
    calibrated tests, ``critical_lower``/``critical_upper`` for the
    simulated-region tests. ``inconclusive`` marks outcomes where the
    statistic could not be formed (hull violation, degenerate sample);
    ``reject`` is then False and ``detail`` carries the reason.
    """

    __test__ = False  # keep pytest from collecting this as a test class

    method: str
    statistic: float
    alpha: float
    reject: bool
    n: int
    p_value: Optional[float] = None
    critical_lower: Optional[float] = None
    critical_upper: Optional[float] = None
    inconclusive: bool = False
    detail: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")

    @property
    def decision(self) -> str:
        if self.inconclusive:
            return "Inconclusive"
        return "Reject H0" if self.reject else "Accept H0"

    def consistent(self) -> bool:
        """Check ``reject`` against the recorded decision rule."""
        if self.inconclusive:
            return not self.reject
        if self.p_value is not None:
            return self.reject == (self.p_value < self.alpha)
        lo, hi = self.critical_lower, self.critical_upper
        return self.reject == (self.statistic < lo or self.statistic > hi)

    def to_dict(self) -> dict:
        d = asdict(self)
        if isinstance(d["statistic"], float) and not math.isfinite(d["statistic"]):
            d["statistic"] = None
        return d
