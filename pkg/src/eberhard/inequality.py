"""Eberhard J-value, round statistics and singles-deviation checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .counts import RoundData


def eberhard_j(rd: RoundData) -> float:
    """Eberhard value of one round (or of accumulated totals).

    J = [S_A(a1) - C(a1b2)] + [S_B(b1) - C(a2b1)] + C(a2b2) - C(a1b1)

    with Alice's singles taken from the a1b2 block and Bob's from a2b1.
    Local realism requires J >= 0, so a violation shows up as J < 0.
    Integer inputs give an exact integer result.
    """
    b11, b12, b22, b21 = rd.block(1, 1), rd.block(1, 2), rd.block(2, 2), rd.block(2, 1)
    return (b12.s_a - b12.c_oo) + (b21.s_b - b21.c_oo) + b22.c_oo - b11.c_oo


def eberhard_j_sigma(rd: RoundData) -> float:
    """Poisson standard error of J.

    Each bracketed term counts single-sided clicks, which are independent
    of the coincidences, so the variance is the plain sum of the four
    counting terms.
    """
    b11, b12, b22, b21 = rd.block(1, 1), rd.block(1, 2), rd.block(2, 2), rd.block(2, 1)
    var = (b12.s_a - b12.c_oo) + (b21.s_b - b21.c_oo) + b22.c_oo + b11.c_oo
    return math.sqrt(max(var, 0.0))


@dataclass(frozen=True)
class SeriesStats:
    sum: float
    mean: float
    std: float  # sample std (n - 1); nan when n == 1
    n: int

    @property
    def mean_significance(self) -> float:
        """mean / std."""
        return self.mean / self.std if self.std else math.nan

    @property
    def sum_significance(self) -> float:
        """sum / std."""
        return self.sum / self.std if self.std else math.nan


def series_stats(values: Sequence[float]) -> SeriesStats:
    values = list(values)
    n = len(values)
    if n == 0:
        raise ValueError("series_stats needs at least one value")
    total = math.fsum(values)
    mean = total / n
    if n == 1:
        std = math.nan
    else:
        std = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    return SeriesStats(total, mean, std, n)


@dataclass(frozen=True)
class SinglesDeviations:
    """Relative change of each local setting's singles between the two
    blocks that share it, in percent (later block relative to earlier in
    a1b1, a1b2, a2b1, a2b2 order)."""

    a1: float
    a2: float
    b1: float
    b2: float

    def as_dict(self) -> dict[str, float]:
        return {"A(a1)": self.a1, "A(a2)": self.a2, "B(b1)": self.b1, "B(b2)": self.b2}


def _rel_percent(later: float, earlier: float) -> float:
    return 100.0 * (later - earlier) / earlier


def singles_deviations(totals: RoundData) -> SinglesDeviations:
    b11, b12, b21, b22 = (totals.block(*c) for c in ((1, 1), (1, 2), (2, 1), (2, 2)))
    return SinglesDeviations(
        a1=_rel_percent(b12.s_a, b11.s_a),
        a2=_rel_percent(b22.s_a, b21.s_a),
        b1=_rel_percent(b21.s_b, b11.s_b),
        b2=_rel_percent(b22.s_b, b12.s_b),
    )


def poisson_relative_fluctuation(count: float) -> float:
    """Expected relative Poisson fluctuation 1/sqrt(N), as a fraction."""
    if count <= 0:
        raise ValueError("count must be positive")
    return 1.0 / math.sqrt(count)
