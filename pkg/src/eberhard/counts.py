"""Count containers shared by the model, the analysis and the simulator."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Tuple

Combo = Tuple[int, int]

# Experimental switching order; each step changes exactly one setting.
SEQUENCE: tuple[Combo, ...] = ((1, 1), (1, 2), (2, 2), (2, 1))


class StructureError(ValueError):
    """Counts do not have the required shape (missing or repeated settings)."""


def combo_label(combo: Combo) -> str:
    return f"a{combo[0]}b{combo[1]}"


def parse_combo(text: str) -> Combo:
    """Parse ``a1b2``, ``12`` or ``1,2`` into a combination tuple."""
    s = text.strip().lower().replace("a", "").replace("b", "").replace(",", "")
    if len(s) != 2 or s[0] not in "12" or s[1] not in "12":
        raise ValueError(f"not a setting combination: {text!r}")
    return int(s[0]), int(s[1])


@dataclass(frozen=True)
class CountsBlock:
    """Singles and ordinary-ordinary coincidences for one setting combination."""

    alpha: int
    beta: int
    s_a: float
    s_b: float
    c_oo: float

    def __post_init__(self):
        if self.alpha not in (1, 2) or self.beta not in (1, 2):
            raise StructureError(f"setting indices must be 1 or 2, got {self.combo}")
        if min(self.s_a, self.s_b, self.c_oo) < 0:
            raise ValueError(f"negative count in block {combo_label(self.combo)}")

    @property
    def combo(self) -> Combo:
        return (self.alpha, self.beta)

    def scaled(self, factor: float) -> "CountsBlock":
        return replace(
            self, s_a=self.s_a * factor, s_b=self.s_b * factor, c_oo=self.c_oo * factor
        )


@dataclass(frozen=True)
class RoundData:
    """Four blocks, one per setting combination, kept in recorded order."""

    blocks: tuple[CountsBlock, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        combos = [b.combo for b in self.blocks]
        if sorted(combos) != sorted(SEQUENCE):
            raise StructureError(
                f"a round needs each of {[combo_label(c) for c in SEQUENCE]} exactly once, "
                f"got {[combo_label(c) for c in combos]}"
            )

    def block(self, alpha: int, beta: int) -> CountsBlock:
        for b in self.blocks:
            if b.alpha == alpha and b.beta == beta:
                return b
        raise StructureError(f"missing block {combo_label((alpha, beta))}")

    def in_sequence(self) -> tuple[CountsBlock, ...]:
        return tuple(self.block(*c) for c in SEQUENCE)

    def scaled(self, factor: float) -> "RoundData":
        return RoundData(tuple(b.scaled(factor) for b in self.blocks))


def make_round(rows: Sequence[Sequence[float]], order: Sequence[Combo] = SEQUENCE) -> RoundData:
    """Build a round from ``(sA, sB, cOO)`` rows listed in ``order``."""
    return RoundData(tuple(CountsBlock(c[0], c[1], *row) for c, row in zip(order, rows, strict=True)))


def accumulate(rounds: Iterable[RoundData]) -> RoundData:
    """Element-wise sum of rounds, in the first round's block order."""
    rounds = list(rounds)
    if not rounds:
        raise ValueError("cannot accumulate an empty list of rounds")
    blocks = []
    for b in rounds[0].blocks:
        parts = [r.block(*b.combo) for r in rounds]
        blocks.append(
            CountsBlock(
                b.alpha,
                b.beta,
                sum(p.s_a for p in parts),
                sum(p.s_b for p in parts),
                sum(p.c_oo for p in parts),
            )
        )
    return RoundData(tuple(blocks))
