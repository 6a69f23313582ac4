"""Monte Carlo detection-event streams and coincidence counting.

Two sources are simulated block by block:

* a quantum source following the count model (pairs emitted as a Poisson
  process, joint polarizer outcomes drawn from the density matrix,
  independent detection and dark clicks), and
* a local-hidden-variable source whose pairs carry predetermined
  pass/fail tables and whose production rate may depend on the setting
  combination, i.e. the production-rate conspiracy.

Every block draws from its own PCG64 substream, derived from
``SeedSequence(seed, spawn_key=(round_index, combo_index))``, so results
do not depend on the order in which blocks are run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

import numba
import numpy as np

from .counts import SEQUENCE, Combo, CountsBlock, RoundData, combo_label, parse_combo
from .data_io import Dataset, EventStreams, config_to_json
from .model import ExperimentConfig, ParameterError, build_state, polarizer_projector

RNG_ALGORITHM = "numpy PCG64 via SeedSequence(seed, spawn_key=(round_index, combo_index))"
NS = 1_000_000_000

SeedLike = Union[int, np.random.Generator]


def block_rng(seed: int, round_index: int, combo: Combo) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(round_index, SEQUENCE.index(tuple(combo))))
    return np.random.Generator(np.random.PCG64(ss))


def _as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def block_id(round_index: int, combo: Combo) -> str:
    return f"r{round_index + 1}-{combo_label(combo)}"


@dataclass(frozen=True)
class IntensityProfile:
    """Production-rate multipliers.

    ``g`` holds one multiplier per setting combination (missing ones are
    1).  ``drift`` optionally maps experiment time in seconds to a further
    positive multiplier bounded by ``drift_max``; it is applied by
    thinning.
    """

    g: Mapping[Combo, float] = field(default_factory=dict)
    drift: Optional[Callable[[np.ndarray], np.ndarray]] = None
    drift_max: float = 1.0

    def __post_init__(self):
        g = {tuple(k): float(v) for k, v in dict(self.g).items()}
        for k, v in g.items():
            if k not in SEQUENCE:
                raise ParameterError(f"unknown combination {k} in profile")
            if not v > 0:
                raise ParameterError(f"profile multiplier for {combo_label(k)} must be > 0")
        object.__setattr__(self, "g", {c: g.get(c, 1.0) for c in SEQUENCE})
        if self.drift is not None and not self.drift_max > 0:
            raise ParameterError("drift_max must be > 0")

    def multiplier(self, combo: Combo) -> float:
        return self.g[tuple(combo)]

    @classmethod
    def parse(cls, text: str) -> "IntensityProfile":
        """Parse ``g22=0.9,g11=1.02`` (``flat`` or empty for none)."""
        text = text.strip()
        if text in ("", "flat"):
            return cls()
        g = {}
        for part in text.split(","):
            key, _, val = part.partition("=")
            key = key.strip().lower()
            if key.startswith("g"):
                key = key[1:]
            g[parse_combo(key)] = float(val)
        return cls(g)

    def to_json(self) -> dict:
        return {
            "g": {combo_label(c): self.multiplier(c) for c in SEQUENCE},
            "drift": self.drift is not None,
        }


FLAT = IntensityProfile()


@dataclass(frozen=True)
class Schedule:
    rounds: int
    seconds_per_block: float
    sequence: tuple[Combo, ...] = SEQUENCE

    def __post_init__(self):
        if self.rounds < 0 or self.seconds_per_block < 0:
            raise ParameterError("schedule needs rounds >= 0 and seconds_per_block >= 0")
        if sorted(self.sequence) != sorted(SEQUENCE):
            raise ParameterError("schedule sequence must list each combination once")

    @property
    def is_empty(self) -> bool:
        return self.rounds == 0 or self.seconds_per_block == 0


@dataclass
class BlockStreams:
    stream_a: np.ndarray
    stream_b: np.ndarray
    true_coincidences: int  # pairs with both photons detected


def _emission_times(
    rng: np.random.Generator,
    rate: float,
    duration: float,
    drift=None,
    drift_max: float = 1.0,
    t_offset: float = 0.0,
) -> np.ndarray:
    """Sorted integer-ns times of a (possibly inhomogeneous) Poisson process."""
    peak = rate * (drift_max if drift is not None else 1.0)
    n = rng.poisson(peak * duration)
    dur_ns = int(round(duration * NS))
    t = np.sort(rng.integers(0, dur_ns, size=n, dtype=np.int64))
    if drift is not None and n:
        accept = rng.random(n) * drift_max < drift(t_offset + t / NS)
        t = t[accept]
    return t


def _merge(*streams: np.ndarray) -> np.ndarray:
    return np.sort(np.concatenate(streams), kind="stable")


def outcome_probabilities(cfg: ExperimentConfig, combo: Combo) -> np.ndarray:
    """Per-pair click probabilities (both, A only, B only, neither)."""
    a, b = cfg.angles(combo)
    rho = build_state(cfg.state)
    pa, pb, eye = polarizer_projector(a), polarizer_projector(b), np.eye(2)
    p_oo = float(np.real(np.trace(rho @ np.kron(pa, pb))))
    p_a = float(np.real(np.trace(rho @ np.kron(pa, eye))))
    p_b = float(np.real(np.trace(rho @ np.kron(eye, pb))))
    ea, eb = cfg.eta_a, cfg.eta_b
    both = p_oo * ea * eb
    a_only = p_a * ea - both
    b_only = p_b * eb - both
    p = np.clip(np.array([both, a_only, b_only, 0.0]), 0.0, 1.0)
    p[3] = max(0.0, 1.0 - p[:3].sum())
    return p / p.sum()


def simulate_quantum_block(
    cfg: ExperimentConfig,
    combo: Combo,
    duration: float,
    g: float = 1.0,
    seed: SeedLike = 0,
    *,
    drift=None,
    drift_max: float = 1.0,
    t_offset: float = 0.0,
) -> BlockStreams:
    """Click streams of both parties for one block of ``duration`` seconds.

    Both photons of a pair share the emission timestamp.
    """
    if not duration > 0:
        raise ParameterError("duration must be > 0")
    if not g > 0:
        raise ParameterError("g must be > 0")
    rng = _as_rng(seed)
    t = _emission_times(rng, g * cfg.r0, duration, drift, drift_max, t_offset)
    cum = np.cumsum(outcome_probabilities(cfg, combo))
    cat = np.searchsorted(cum, rng.random(t.size) * cum[-1], side="right")
    a_true = t[(cat == 0) | (cat == 1)]
    b_true = t[(cat == 0) | (cat == 2)]
    dur_ns = int(round(duration * NS))
    dark_a = rng.integers(0, dur_ns, size=rng.poisson(cfg.zeta * duration), dtype=np.int64)
    dark_b = rng.integers(0, dur_ns, size=rng.poisson(cfg.zeta * duration), dtype=np.int64)
    return BlockStreams(_merge(a_true, dark_a), _merge(b_true, dark_b), int(np.count_nonzero(cat == 0)))


@numba.njit(cache=False)
def _greedy_match(a, b, half):
    j = 0
    nb = b.shape[0]
    count = 0
    for i in range(a.shape[0]):
        ta = a[i]
        # B clicks before the window can never match a later A click
        while j < nb and b[j] < ta - half:
            j += 1
        if j < nb and b[j] <= ta + half:
            count += 1
            j += 1
    return count


def _check_sorted(x: np.ndarray, name: str) -> None:
    if x.size > 1 and np.any(np.diff(x) < 0):
        raise ValueError(f"{name} is not sorted by time")


def count_coincidences(stream_a: np.ndarray, stream_b: np.ndarray, tau_c: float) -> int:
    """Number of A/B click pairs within a window of total width ``tau_c`` seconds.

    Each A click, in time order, takes the earliest still-unmatched B
    click with |tA - tB| <= tau_c / 2; every click is used at most once.
    """
    a = np.asarray(stream_a, dtype=np.int64)
    b = np.asarray(stream_b, dtype=np.int64)
    _check_sorted(a, "stream A")
    _check_sorted(b, "stream B")
    if tau_c < 0:
        raise ParameterError("tau_c must be >= 0")
    return int(_greedy_match(a, b, tau_c * NS / 2.0))


def _tally(combo: Combo, streams: BlockStreams, tau_c: float) -> CountsBlock:
    return CountsBlock(
        combo[0],
        combo[1],
        int(streams.stream_a.size),
        int(streams.stream_b.size),
        count_coincidences(streams.stream_a, streams.stream_b, tau_c),
    )


def _run_schedule(schedule: Schedule, run_block, tau_c: float, return_events: bool):
    rounds, events = [], EventStreams()
    if not schedule.is_empty:
        dur = schedule.seconds_per_block
        for r in range(schedule.rounds):
            blocks = []
            for k, combo in enumerate(schedule.sequence):
                offset = (r * len(schedule.sequence) + k) * dur
                st = run_block(r, combo, dur, offset)
                blocks.append(_tally(combo, st, tau_c))
                if return_events:
                    events.blocks[block_id(r, combo)] = (st.stream_a, st.stream_b)
            rounds.append(RoundData(tuple(blocks)))
    return rounds, events


def simulate_experiment(
    cfg: ExperimentConfig,
    schedule: Schedule,
    profile: IntensityProfile = FLAT,
    seed: int = 0,
    *,
    return_events: bool = False,
):
    """Simulate every scheduled block of the quantum source and tally counts."""

    def run(r, combo, dur, offset):
        return simulate_quantum_block(
            cfg,
            combo,
            dur,
            profile.multiplier(combo),
            block_rng(seed, r, combo),
            drift=profile.drift,
            drift_max=profile.drift_max,
            t_offset=offset,
        )

    rounds, events = _run_schedule(schedule, run, cfg.tau_c, return_events)
    ds = Dataset(
        rounds=tuple(rounds),
        source="simulated quantum source",
        block_seconds=schedule.seconds_per_block,
        sequence=schedule.sequence,
        angles={k: getattr(cfg, k) for k in ("alpha1", "alpha2", "beta1", "beta2")},
        sim={
            "kind": "quantum",
            "seed": int(seed),
            "rng": RNG_ALGORITHM,
            "config": config_to_json(cfg),
            "profile": profile.to_json(),
        },
    )
    return (ds, events) if return_events else ds


# ------------------------------------------------------------------ LHV

# column order of an outcome table: Alice at a1, a2; Bob at b1, b2
TABLE_KEYS = ("a1", "a2", "b1", "b2")


@dataclass(frozen=True)
class LhvStrategy:
    """Mixture of deterministic pass/fail tables plus a rate profile."""

    tables: tuple[tuple[bool, bool, bool, bool], ...]
    probs: tuple[float, ...]
    profile: IntensityProfile = FLAT

    def __post_init__(self):
        tables = tuple(tuple(bool(x) for x in t) for t in self.tables)
        probs = tuple(float(p) for p in self.probs)
        if not tables or len(tables) != len(probs) or any(len(t) != 4 for t in tables):
            raise ParameterError("need one probability per 4-entry outcome table")
        if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
            raise ParameterError("table probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def always_pass(cls, profile: IntensityProfile = FLAT) -> "LhvStrategy":
        return cls(((True, True, True, True),), (1.0,), profile)

    @classmethod
    def from_json(cls, obj: Mapping) -> "LhvStrategy":
        tables, probs = [], []
        for t in obj["tables"]:
            tables.append(tuple(bool(t[k]) for k in TABLE_KEYS))
            probs.append(float(t["p"]))
        g = {parse_combo(k): v for k, v in obj.get("profile", {}).get("g", {}).items()}
        return cls(tuple(tables), tuple(probs), IntensityProfile(g))

    def to_json(self) -> dict:
        return {
            "tables": [dict(zip(TABLE_KEYS, t), p=p) for t, p in zip(self.tables, self.probs)],
            "profile": {"g": self.profile.to_json()["g"]},
        }


def simulate_lhv_block(
    strategy: LhvStrategy,
    base_rate: float,
    combo: Combo,
    duration: float,
    seed: SeedLike = 0,
    *,
    t_offset: float = 0.0,
) -> BlockStreams:
    rng = _as_rng(seed)
    prof = strategy.profile
    rate = base_rate * prof.multiplier(combo)
    t = _emission_times(rng, rate, duration, prof.drift, prof.drift_max, t_offset)
    tables = np.asarray(strategy.tables, dtype=bool)
    idx = rng.choice(len(strategy.probs), size=t.size, p=np.asarray(strategy.probs))
    pass_a = tables[idx, combo[0] - 1]
    pass_b = tables[idx, 2 + combo[1] - 1]
    return BlockStreams(t[pass_a], t[pass_b], int(np.count_nonzero(pass_a & pass_b)))


def simulate_lhv_experiment(
    strategy: LhvStrategy,
    base_rate: float,
    schedule: Schedule,
    seed: int = 0,
    *,
    tau_c: float = 0.0,
    return_events: bool = False,
):
    """Simulate a local-hidden-variable source with perfect detection.

    Detector inefficiency, if wanted, belongs in the strategy's tables.
    """
    if not base_rate >= 0:
        raise ParameterError("base_rate must be >= 0")

    def run(r, combo, dur, offset):
        return simulate_lhv_block(strategy, base_rate, combo, dur, block_rng(seed, r, combo), t_offset=offset)

    rounds, events = _run_schedule(schedule, run, tau_c, return_events)
    ds = Dataset(
        rounds=tuple(rounds),
        source="simulated local hidden variable source",
        block_seconds=schedule.seconds_per_block,
        sequence=schedule.sequence,
        sim={
            "kind": "lhv",
            "seed": int(seed),
            "rng": RNG_ALGORITHM,
            "baseRate": base_rate,
            "tauC": tau_c,
            "strategy": strategy.to_json(),
        },
    )
    return (ds, events) if return_events else ds


def accidental_excess(
    cfg: ExperimentConfig, combo: Combo, duration: float, seed: SeedLike
) -> tuple[int, int]:
    """Simulated (coincidences, true pairs) for one block.

    Their difference is the empirical accidental count of that block.
    """
    st = simulate_quantum_block(cfg, combo, duration, 1.0, seed)
    return count_coincidences(st.stream_a, st.stream_b, cfg.tau_c), st.true_coincidences
