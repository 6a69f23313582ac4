"""Production-rate drift normalization within measurement rounds.

A correction factor f per setting combination tracks the average pair
production rate during that block.  Ratios between factors come from
comparing the singles of a local setting shared by two blocks; a chain
of such comparisons (a *path*) fixes all four factors up to a common
scale, which the baseline policy then pins.  Dividing every count by its
block's factor yields the counts expected for a constant production
rate, and J' is the Eberhard value of those counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .counts import SEQUENCE, Combo, CountsBlock, RoundData, accumulate, combo_label, parse_combo
from .inequality import SeriesStats, eberhard_j, series_stats


@dataclass(frozen=True)
class Link:
    """Express f(dst) as a multiple of f(src) via one party's singles."""

    src: Combo
    dst: Combo
    channel: str  # "A" or "B"

    def __post_init__(self):
        if self.channel not in ("A", "B"):
            raise ValueError(f"channel must be 'A' or 'B', got {self.channel!r}")
        k = 0 if self.channel == "A" else 1
        if self.src[k] != self.dst[k]:
            raise ValueError(
                f"link {combo_label(self.src)}->{combo_label(self.dst)} does not share "
                f"a setting on channel {self.channel}"
            )


@dataclass(frozen=True)
class NormalizationPath:
    links: tuple[Link, ...]

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        if len(self.links) != 3:
            raise ValueError("a path needs exactly three links to span four combinations")
        known = {self.links[0].src}
        for ln in self.links:
            if ln.src not in known:
                raise ValueError(f"link source {combo_label(ln.src)} is not yet determined")
            if ln.dst in known:
                raise ValueError(f"combination {combo_label(ln.dst)} reached twice")
            known.add(ln.dst)
        if known != set(SEQUENCE):
            raise ValueError("path does not reach all four combinations")

    @classmethod
    def parse(cls, text: str) -> "NormalizationPath":
        """Parse e.g. ``a1b1>a1b2:A,a1b2>a2b2:B,a2b2>a2b1:A``."""
        if text.strip().lower() == "default":
            return DEFAULT_PATH
        links = []
        for part in text.split(","):
            pair, _, channel = part.partition(":")
            src, _, dst = pair.partition(">")
            links.append(Link(parse_combo(src), parse_combo(dst), channel.strip().upper()))
        return cls(tuple(links))

    def __str__(self) -> str:
        return ",".join(f"{combo_label(l.src)}>{combo_label(l.dst)}:{l.channel}" for l in self.links)


# follows the switching sequence a1b1 -> a1b2 -> a2b2 -> a2b1
DEFAULT_PATH = NormalizationPath(
    (
        Link((1, 1), (1, 2), "A"),
        Link((1, 2), (2, 2), "B"),
        Link((2, 2), (2, 1), "A"),
    )
)


@dataclass(frozen=True)
class BaselinePolicy:
    """Which combination gets f = 1; ``None`` means the smallest factor."""

    combo: Optional[Combo] = None

    def __post_init__(self):
        if self.combo is not None and tuple(self.combo) not in SEQUENCE:
            raise ValueError(f"invalid baseline combination {self.combo}")

    @classmethod
    def smallest(cls) -> "BaselinePolicy":
        return cls(None)

    @classmethod
    def fixed(cls, combo: Combo) -> "BaselinePolicy":
        return cls(tuple(combo))

    @classmethod
    def parse(cls, text: str) -> "BaselinePolicy":
        if text.strip().lower() in ("smallest", "min", "smallest-f"):
            return cls.smallest()
        return cls.fixed(parse_combo(text))

    def __str__(self) -> str:
        return "smallest" if self.combo is None else combo_label(self.combo)


SMALLEST = BaselinePolicy.smallest()


@dataclass(frozen=True)
class CorrectionFactors:
    f11: float
    f12: float
    f22: float
    f21: float

    def __getitem__(self, combo: Combo) -> float:
        return getattr(self, f"f{combo[0]}{combo[1]}")

    def percent(self) -> dict[Combo, float]:
        return {c: 100.0 * self[c] for c in SEQUENCE}


def _singles(rd: RoundData, combo: Combo, channel: str) -> float:
    b = rd.block(*combo)
    return b.s_a if channel == "A" else b.s_b


def compute_factors(
    rd: RoundData,
    path: NormalizationPath = DEFAULT_PATH,
    policy: BaselinePolicy = SMALLEST,
) -> CorrectionFactors:
    rel = {path.links[0].src: 1.0}
    for ln in path.links:
        s_src, s_dst = _singles(rd, ln.src, ln.channel), _singles(rd, ln.dst, ln.channel)
        if s_src <= 0 or s_dst <= 0:
            raise ValueError(
                f"zero singles on link {combo_label(ln.src)}->{combo_label(ln.dst)} "
                f"({ln.channel}); cannot form a ratio"
            )
        rel[ln.dst] = rel[ln.src] * s_dst / s_src
    if policy.combo is None:
        # argmin picks the earliest combination in sequence order on ties
        base = SEQUENCE[int(np.argmin([rel[c] for c in SEQUENCE]))]
    else:
        base = policy.combo
    scale = rel[base]
    return CorrectionFactors(*(rel[c] / scale for c in SEQUENCE))


def normalize_round(rd: RoundData, f: CorrectionFactors) -> RoundData:
    return RoundData(tuple(b.scaled(1.0 / f[b.combo]) for b in rd.blocks))


def j_prime(
    rd: RoundData,
    path: NormalizationPath = DEFAULT_PATH,
    policy: BaselinePolicy = SMALLEST,
) -> float:
    return eberhard_j(normalize_round(rd, compute_factors(rd, path, policy)))


def j_prime_sigma(
    rd: RoundData,
    path: NormalizationPath = DEFAULT_PATH,
    policy: BaselinePolicy = SMALLEST,
) -> float:
    """Poisson standard error of J', including the uncertainty of f.

    Each block splits into three independent Poisson categories
    (coincidences, A-only clicks, B-only clicks).  J' is propagated to
    first order through all twelve of them by central differences.
    """
    cats = []
    for b in rd.blocks:
        cats.append([b.c_oo, b.s_a - b.c_oo, b.s_b - b.c_oo])
    cats = np.asarray(cats, dtype=float)

    def jp(x: np.ndarray) -> float:
        blocks = [
            CountsBlock(b.alpha, b.beta, x[k, 0] + x[k, 1], x[k, 0] + x[k, 2], x[k, 0])
            for k, b in enumerate(rd.blocks)
        ]
        return j_prime(RoundData(tuple(blocks)), path, policy)

    var = 0.0
    for idx in np.ndindex(cats.shape):
        n = cats[idx]
        if n <= 0:
            continue
        h = min(0.5, n / 2)
        up, dn = cats.copy(), cats.copy()
        up[idx] += h
        dn[idx] -= h
        grad = (jp(up) - jp(dn)) / (2 * h)
        var += grad * grad * n
    return float(np.sqrt(var))


def j_prime_series(
    rounds: Sequence[RoundData],
    path: NormalizationPath = DEFAULT_PATH,
    policy: BaselinePolicy = SMALLEST,
) -> list[float]:
    return [j_prime(r, path, policy) for r in rounds]


def adversarial_series(
    rounds: Sequence[RoundData],
    path: NormalizationPath = DEFAULT_PATH,
    policy: BaselinePolicy = SMALLEST,
) -> SeriesStats:
    """Statistics of max(J, J') per round.

    Models an analyst who skips the normalization in any round where it
    would strengthen the violation.
    """
    return series_stats([max(eberhard_j(r), j_prime(r, path, policy)) for r in rounds])


def normalize_total(
    rounds: Iterable[RoundData],
    path: NormalizationPath = DEFAULT_PATH,
    policy: BaselinePolicy = SMALLEST,
) -> float:
    """J' of the accumulated counts."""
    return j_prime(accumulate(rounds), path, policy)
