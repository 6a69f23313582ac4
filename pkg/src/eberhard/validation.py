"""Checks of every published number against the pipelines.

Used by ``eberhard validate-paper``.  Each check carries its own
tolerance; a check passes when ``lo <= value <= hi``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import fixtures as fx
from .counts import SEQUENCE, RoundData, accumulate, combo_label
from .drift import (
    BaselinePolicy,
    adversarial_series,
    compute_factors,
    j_prime_series,
    j_prime_sigma,
    normalize_total,
)
from .inequality import (
    eberhard_j,
    eberhard_j_sigma,
    poisson_relative_fluctuation,
    series_stats,
    singles_deviations,
)
from .model import PUBLISHED_CONFIG, ExperimentConfig, compare_model, predict_counts


@dataclass(frozen=True)
class Check:
    criterion: int
    label: str
    value: float
    expected: float
    lo: float
    hi: float

    @property
    def passed(self) -> bool:
        return self.lo <= self.value <= self.hi

    def to_json(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Check":
        return cls(**{k: d[k] for k in ("criterion", "label", "value", "expected", "lo", "hi")})


def _abs(criterion, label, value, expected, tol) -> Check:
    return Check(criterion, label, float(value), float(expected), expected - tol, expected + tol)


def _rel(criterion, label, value, expected, rel) -> Check:
    span = abs(expected) * rel
    return Check(criterion, label, float(value), float(expected), expected - span, expected + span)


def model_checks(cfg: ExperimentConfig = PUBLISHED_CONFIG) -> list[Check]:
    q = compare_model(fx.MODEL_ROW, predict_counts(cfg).observed)
    out = []
    for e in q.entries:
        # model column here is the prediction, data column the published model row
        rel = 0.02 if e.label == "J" else 0.002
        out.append(_rel(1, f"model {e.label}", e.model, e.data, rel))
    return out


def experimental_j_checks(rounds: list[RoundData]) -> list[Check]:
    js = [eberhard_j(r) for r in rounds]
    out = [_abs(2, f"J round {k + 1}", j, want, 0) for k, (j, want) in enumerate(zip(js, fx.J_ROUNDS))]
    out.append(_abs(2, "J accumulated totals", eberhard_j(accumulate(rounds)), fx.J_STATS["sum"], 0))
    st = series_stats(js)
    out.append(_abs(2, "J sum", st.sum, fx.J_STATS["sum"], 0))
    out.append(_abs(2, "J mean", round(st.mean), fx.J_STATS["mean"], 1))
    out.append(_abs(2, "J std", round(st.std), fx.J_STATS["std"], 1))
    return out


def deviation_checks() -> list[Check]:
    q = compare_model(fx.MEASURED_ROW, fx.MODEL_ROW)
    return [
        _abs(3, f"deviation {e.label} [%]", e.deviation, fx.DEVIATION_ROW_PERCENT[e.label], 0.01)
        for e in q.entries
    ]


def singles_checks(totals: RoundData) -> list[Check]:
    d = singles_deviations(totals).as_dict()
    out = [_abs(4, f"Delta {k} [%]", v, fx.SINGLES_DELTA_PERCENT[k], 0.01) for k, v in d.items()]
    counts = {
        ("S_A(a1)", "small"): totals.block(1, 2).s_a,
        ("S_B(b1)", "small"): totals.block(2, 1).s_b,
        ("S_A(a2)", "large"): totals.block(2, 2).s_a,
        ("S_B(b2)", "large"): totals.block(2, 2).s_b,
    }
    for (label, size), n in counts.items():
        pct = 100 * poisson_relative_fluctuation(n)
        out.append(_abs(4, f"Poisson 1/sqrt {label} [%]", pct, fx.POISSON_PERCENT[size], 0.01))
    return out


def normalization_checks(rounds: list[RoundData]) -> list[Check]:
    out = []
    for k, (r, fs) in enumerate(zip(rounds, fx.F_ROUNDS_PERCENT)):
        pct = compute_factors(r).percent()
        for c, want in zip(SEQUENCE, fs):
            out.append(_abs(5, f"f round {k + 1} {combo_label(c)} [%]", pct[c], want, 0.01))
    jp = j_prime_series(rounds)
    for k, (v, want) in enumerate(zip(jp, fx.J_PRIME_ROUNDS)):
        out.append(_abs(5, f"J' round {k + 1}", v, want, 1))
    st = series_stats(jp)
    out.append(_abs(5, "J' sum", st.sum, fx.J_PRIME_STATS["sum"], 3))
    out.append(_abs(5, "J' mean", st.mean, fx.J_PRIME_STATS["mean"], 1))
    out.append(_abs(5, "J' std", st.std, fx.J_PRIME_STATS["std"], 1))
    return out


def variant_checks(rounds: list[RoundData]) -> list[Check]:
    out = []
    adv = adversarial_series(rounds)
    for key in ("sum", "mean", "std"):
        out.append(_abs(6, f"adversarial {key}", getattr(adv, key), fx.ADVERSARIAL_STATS[key], 1))
    fixed = BaselinePolicy.fixed((1, 1))
    st = series_stats(j_prime_series(rounds, policy=fixed))
    for key in ("sum", "mean", "std"):
        out.append(_abs(6, f"fixed-a1b1 {key}", getattr(st, key), fx.FIXED_A1B1_STATS[key], 1))
    out.append(_abs(6, "fixed-a1b1 total J'", normalize_total(rounds, policy=fixed), fx.FIXED_A1B1_TOTAL, 2))
    out.append(_abs(6, "total J'", normalize_total(rounds), fx.J_PRIME_TOTAL, 2))
    pct = compute_factors(accumulate(rounds)).percent()
    for c, want in zip(SEQUENCE, fx.F_TOTAL_PERCENT):
        out.append(_abs(6, f"f total {combo_label(c)} [%]", pct[c], want, 0.01))
    return out


def accidental_checks(cfg: ExperimentConfig = PUBLISHED_CONFIG) -> list[Check]:
    p = predict_counts(cfg)
    out = [Check(7, "accidentals a2b2 [%]", 100 * p.accidental_fraction((2, 2)), 18.0, 17.0, 19.0)]
    for c in ((1, 1), (1, 2), (2, 1)):
        want = fx.ACCIDENTAL_FRACTION_PERCENT[c]
        out.append(Check(7, f"accidentals {combo_label(c)} [%]", 100 * p.accidental_fraction(c), want, want / 2, want * 2))
    return out


def simulated_accidental_checks(
    cfg: ExperimentConfig = PUBLISHED_CONFIG, seconds: float = 30.0, seeds: int = 10
) -> list[Check]:
    """Empirical accidentals (simulated coincidences minus true pairs) vs the analytic estimate."""
    from dataclasses import replace

    from .sim import block_rng, simulate_quantum_block, count_coincidences

    scaled = replace(cfg, t=seconds)
    pred = predict_counts(scaled)
    out = []
    for k, c in enumerate(SEQUENCE):
        excess, frac = [], []
        for s in range(seeds):
            st = simulate_quantum_block(scaled, c, seconds, 1.0, block_rng(s, 0, c))
            n = count_coincidences(st.stream_a, st.stream_b, scaled.tau_c)
            excess.append(n - st.true_coincidences)
            frac.append((n - st.true_coincidences) / n)
        mean = float(np.mean(excess))
        sem = max(float(np.std(excess, ddof=1)) / math.sqrt(seeds), math.sqrt(max(mean, 1.0) / seeds))
        want = pred.accidentals[c]
        out.append(Check(7, f"simulated accidentals {combo_label(c)}", mean, want, want - 3 * sem, want + 3 * sem))
        pf = 100 * float(np.mean(frac))
        if c == (2, 2):
            out.append(Check(7, f"simulated accidentals {combo_label(c)} [%]", pf, 18.0, 17.0, 19.0))
        else:
            w = fx.ACCIDENTAL_FRACTION_PERCENT[c]
            out.append(Check(7, f"simulated accidentals {combo_label(c)} [%]", pf, w, w / 2, w * 2))
    return out


def loophole_checks(
    base_rate: float = PUBLISHED_CONFIG.r0, seconds: float = 60.0, rounds: int = 5, seed: int = 1, g22: float = 0.9
) -> list[Check]:
    """Always-pass LHV source with a reduced a2b2 production rate."""
    from .sim import IntensityProfile, LhvStrategy, Schedule, simulate_lhv_experiment

    strategy = LhvStrategy.always_pass(IntensityProfile({(2, 2): g22}))
    ds = simulate_lhv_experiment(strategy, base_rate, Schedule(rounds, seconds), seed)
    total = accumulate(ds.rounds)
    j, sj = eberhard_j(total), eberhard_j_sigma(total)
    jps = j_prime_series(ds.rounds)
    jp = sum(jps)
    sjp = math.sqrt(sum(j_prime_sigma(r) ** 2 for r in ds.rounds))
    return [
        Check(8, "LHV raw J / sigma", j / sj, -5.0, -math.inf, -5.0),
        Check(8, "LHV normalized J' / sigma", jp / max(sjp, 1.0), 0.0, -3.0, 3.0),
    ]


def run_all(rounds: Optional[list[RoundData]] = None, *, simulate: bool = False) -> list[Check]:
    rounds = fx.published_rounds() if rounds is None else rounds
    totals = accumulate(rounds)
    checks = (
        model_checks()
        + experimental_j_checks(rounds)
        + deviation_checks()
        + singles_checks(totals)
        + normalization_checks(rounds)
        + variant_checks(rounds)
        + accidental_checks()
    )
    if simulate:
        checks += simulated_accidental_checks() + loophole_checks()
    return checks
