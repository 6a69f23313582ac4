"""Quantum-mechanical count model for an Eberhard-type Bell test.

The source emits the non-maximally entangled state |HV> + r|VH> with its
coherence damped by a real visibility factor.  Expected singles and
coincidence counts follow from projecting that state onto linear
polarizer settings, then adding detector dark counts and the accidental
coincidences that a finite coincidence window lets through.

All counts are carried as floats; rounding is a presentation concern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .counts import SEQUENCE, Combo, CountsBlock, RoundData, combo_label
from .inequality import eberhard_j

BASIS = ("HH", "HV", "VH", "VV")
_I2 = np.eye(2)


class ParameterError(ValueError):
    """A physical parameter lies outside its allowed domain."""


@dataclass(frozen=True)
class StateParams:
    r: float
    V: float

    def __post_init__(self):
        if not (0.0 < self.r <= 1.0):
            raise ParameterError(f"r must satisfy 0 < r <= 1, got {self.r}")
        if not (0.0 <= self.V <= 1.0):
            raise ParameterError(f"V must satisfy 0 <= V <= 1, got {self.V}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Physical parameters of one experiment.

    Angles are polarizer orientations in degrees measured from H.
    ``zeta`` is the dark-count rate of each party's detector (1/s) and
    ``tau_c`` the full coincidence window width (s).
    """

    state: StateParams
    eta_a: float
    eta_b: float
    r0: float
    t: float
    zeta: float
    tau_c: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("eta_a", "eta_b"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ParameterError(f"{name} must lie in [0, 1], got {v}")
        # r0 = 0 is allowed so pure-background configurations can be simulated.
        if not self.r0 >= 0.0:
            raise ParameterError(f"r0 must be >= 0, got {self.r0}")
        if not self.t > 0.0:
            raise ParameterError(f"t must be > 0, got {self.t}")
        if not self.zeta >= 0.0:
            raise ParameterError(f"zeta must be >= 0, got {self.zeta}")
        if not self.tau_c >= 0.0:
            raise ParameterError(f"tau_c must be >= 0, got {self.tau_c}")
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")

    @property
    def n_pairs(self) -> float:
        """Expected number of produced pairs, R0 * T."""
        return self.r0 * self.t

    def alpha(self, i: int) -> float:
        return (self.alpha1, self.alpha2)[i - 1]

    def beta(self, j: int) -> float:
        return (self.beta1, self.beta2)[j - 1]

    def angles(self, combo: Combo) -> tuple[float, float]:
        return self.alpha(combo[0]), self.beta(combo[1])


PUBLISHED_CONFIG = ExperimentConfig(
    state=StateParams(r=0.297, V=0.965),
    eta_a=0.7377,
    eta_b=0.7859,
    r0=80_700.0,
    t=300.0,
    zeta=10.0,
    tau_c=180e-9,
    alpha1=85.6,
    alpha2=118.0,
    beta1=-5.4,
    beta2=25.9,
)


def build_state(p: StateParams) -> np.ndarray:
    """Density matrix in the |HH>, |HV>, |VH>, |VV> basis."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = 1.0
    rho[1, 2] = rho[2, 1] = p.V * p.r
    rho[2, 2] = p.r**2
    return rho / (1.0 + p.r**2)


def polarizer_projector(degrees: float) -> np.ndarray:
    a = math.radians(degrees)
    v = np.array([math.cos(a), math.sin(a)])
    return np.outer(v, v)


def _expectation(rho: np.ndarray, op: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ op)))


def predict_raw_singles(cfg: ExperimentConfig, party: str, angle: float) -> float:
    rho = build_state(cfg.state)
    proj = polarizer_projector(angle)
    if party == "A":
        return cfg.eta_a * cfg.n_pairs * _expectation(rho, np.kron(proj, _I2))
    if party == "B":
        return cfg.eta_b * cfg.n_pairs * _expectation(rho, np.kron(_I2, proj))
    raise ValueError(f"party must be 'A' or 'B', got {party!r}")


def predict_raw_coincidence(cfg: ExperimentConfig, a: float, b: float) -> float:
    rho = build_state(cfg.state)
    op = np.kron(polarizer_projector(a), polarizer_projector(b))
    return cfg.eta_a * cfg.eta_b * cfg.n_pairs * _expectation(rho, op)


def correct_singles(raw: float, cfg: ExperimentConfig) -> float:
    """Add the dark counts accumulated over the measurement time."""
    return raw + cfg.zeta * cfg.t


def accidentals(s_a: float, s_b: float, c_raw: float, cfg: ExperimentConfig) -> float:
    """Expected accidental coincidences over the measurement time.

    The usual S_A*S_B*tau/T estimate is restricted to the clicks whose
    partner photon was lost, hence the two ``1 - c/S`` factors.
    """
    if s_a <= 0 or s_b <= 0:
        raise ParameterError("singles counts must be positive")
    # relative slack absorbs rounding when c_raw comes from the same model
    slack = 1e-12 * max(s_a, s_b)
    if c_raw < 0 or c_raw > min(s_a, s_b) + slack:
        raise ParameterError(
            f"raw coincidences {c_raw} must lie in [0, min(sA, sB)] = [0, {min(s_a, s_b)}]"
        )
    return max(
        0.0,
        s_a * s_b * (cfg.tau_c / cfg.t) * (1.0 - c_raw / s_a) * (1.0 - c_raw / s_b),
    )


def observed_coincidence(c_raw: float, acc: float) -> float:
    return c_raw + acc


@dataclass(frozen=True)
class Prediction:
    """Model output for all four setting combinations."""

    observed: RoundData
    raw: RoundData
    accidentals: Mapping[Combo, float]
    j: float

    def accidental_fraction(self, combo: Combo) -> float:
        c = self.observed.block(*combo).c_oo
        # accidentals never exceed the observed coincidences, so c == 0 means none
        return self.accidentals[combo] / c if c > 0 else 0.0


def predict_counts(cfg: ExperimentConfig) -> Prediction:
    raw_blocks, obs_blocks, acc = [], [], {}
    for i, j in SEQUENCE:
        a, b = cfg.alpha(i), cfg.beta(j)
        sa_raw = predict_raw_singles(cfg, "A", a)
        sb_raw = predict_raw_singles(cfg, "B", b)
        c_raw = predict_raw_coincidence(cfg, a, b)
        sa, sb = correct_singles(sa_raw, cfg), correct_singles(sb_raw, cfg)
        if sa > 0 and sb > 0:
            acc[(i, j)] = accidentals(sa, sb, c_raw, cfg)
        else:
            acc[(i, j)] = 0.0
        raw_blocks.append(CountsBlock(i, j, sa_raw, sb_raw, c_raw))
        obs_blocks.append(CountsBlock(i, j, sa, sb, observed_coincidence(c_raw, acc[(i, j)])))
    observed = RoundData(tuple(obs_blocks))
    return Prediction(observed, RoundData(tuple(raw_blocks)), acc, eberhard_j(observed))


ROW_LABELS = (
    "C(a1b1)",
    "C(a1b2)",
    "C(a2b1)",
    "C(a2b2)",
    "S_A(a1)",
    "S_B(b1)",
    "J",
)


def row_quantities(rd: RoundData) -> dict[str, float]:
    """The seven Table-1 style quantities of a round.

    The singles are taken from the same blocks that enter J: Alice's a1
    singles from a1b2 and Bob's b1 singles from a2b1.
    """
    out = {f"C({combo_label(c)})": rd.block(*c).c_oo for c in ((1, 1), (1, 2), (2, 1), (2, 2))}
    out["S_A(a1)"] = rd.block(1, 2).s_a
    out["S_B(b1)"] = rd.block(2, 1).s_b
    out["J"] = eberhard_j(rd)
    return out


@dataclass(frozen=True)
class ComparisonEntry:
    label: str
    data: float
    model: float

    @property
    def deviation(self) -> float:
        """Relative difference of model from data, in percent."""
        if self.data == 0:
            return 0.0 if self.model == 0 else math.copysign(math.inf, self.model)
        return 100.0 * (self.model - self.data) / abs(self.data)


@dataclass(frozen=True)
class ModelComparison:
    entries: tuple[ComparisonEntry, ...] = field(default_factory=tuple)

    def __getitem__(self, label: str) -> ComparisonEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def deviations(self) -> dict[str, float]:
        return {e.label: e.deviation for e in self.entries}


def compare_model(
    data: RoundData | Mapping[str, float], model: RoundData | Mapping[str, float]
) -> ModelComparison:
    """Compare data and model on the seven Table-1 quantities.

    Either side may be a full round or a mapping keyed by ``ROW_LABELS``.
    """
    d = row_quantities(data) if isinstance(data, RoundData) else dict(data)
    m = row_quantities(model) if isinstance(model, RoundData) else dict(model)
    return ModelComparison(tuple(ComparisonEntry(k, d[k], m[k]) for k in ROW_LABELS))
