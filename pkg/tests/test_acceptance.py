"""Acceptance suite: one verdict line per numbered criterion.

Each test records ``[PASS]``/``[FAIL]`` plus its worst check into
``VERDICTS``; ``conftest.py`` prints them in the terminal summary so
they appear in a plain ``pytest -v`` log.  Tolerances live in
``eberhard.validation`` and match the published rounding.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from eberhard import validation as V
from eberhard.counts import SEQUENCE, make_round
from eberhard.data_io import (
    builtin_published_dataset,
    config_from_json,
    config_to_json,
    dataset_from_json,
    dumps_dataset,
)
from eberhard.drift import SMALLEST, BaselinePolicy, j_prime
from eberhard.fixtures import published_rounds, published_totals
from eberhard.inequality import eberhard_j
from eberhard.model import (
    PUBLISHED_CONFIG,
    StateParams,
    build_state,
    predict_raw_coincidence,
    predict_raw_singles,
)
from eberhard.sim import Schedule, simulate_experiment

VERDICTS: dict[int, str] = {}


def record(criterion, checks, extra=""):
    failed = [c for c in checks if not c.passed]
    worst = failed[0] if failed else max(checks, key=lambda c: _margin(c))
    status = "PASS" if not failed else "FAIL"
    line = (
        f"[{status}] criterion {criterion}: {len(checks) - len(failed)}/{len(checks)} checks; "
        f"{'first failure' if failed else 'tightest'}: {worst.label} = {worst.value:.6g} "
        f"(expected {worst.expected:.6g}, allowed [{worst.lo:.6g}, {worst.hi:.6g}]){extra}"
    )
    VERDICTS[criterion] = line
    print(line)
    assert not failed, line


def _margin(c):
    # fraction of the tolerance band used; 1.0 means on the edge
    if not (math.isfinite(c.lo) and math.isfinite(c.hi)):
        return 0.0  # one-sided bound, nothing to compare against
    half = (c.hi - c.lo) / 2
    if half == 0:
        return 0.0 if c.value == c.expected else 1.0
    return abs(c.value - c.expected) / half


def test_criterion_1_model_reproduction():
    t0 = time.perf_counter()
    checks = V.model_checks()
    ms = 1000 * (time.perf_counter() - t0)
    record(1, checks, f"; {ms:.1f} ms")


def test_criterion_2_experimental_j():
    record(2, V.experimental_j_checks(published_rounds()))


def test_criterion_3_deviation_row():
    record(3, V.deviation_checks())


def test_criterion_4_singles_deviations():
    record(4, V.singles_checks(published_totals()))


def test_criterion_5_drift_normalization():
    record(5, V.normalization_checks(published_rounds()))


def test_criterion_6_variants():
    record(6, V.variant_checks(published_rounds()))


@pytest.mark.slow
def test_criterion_7_accidentals():
    t0 = time.perf_counter()
    checks = V.accidental_checks() + V.simulated_accidental_checks(seconds=30.0, seeds=10)
    record(7, checks, f"; {time.perf_counter() - t0:.1f} s")


@pytest.mark.slow
def test_criterion_8_loophole_demonstration():
    t0 = time.perf_counter()
    checks = V.loophole_checks(seconds=60.0, rounds=5, g22=0.9)
    secs = time.perf_counter() - t0
    checks.append(V.Check(8, "runtime [s]", secs, 0.0, 0.0, 60.0))
    record(8, checks, f"; {secs:.1f} s")


def _structural_checks():
    out = []

    # density-matrix validity over a parameter grid
    worst_eig, worst_herm, worst_tr = 0.0, 0.0, 0.0
    for r, v in itertools.product(np.linspace(0.01, 1.0, 12), np.linspace(0.0, 1.0, 11)):
        rho = build_state(StateParams(float(r), float(v)))
        worst_herm = max(worst_herm, float(np.abs(rho - rho.conj().T).max()))
        worst_tr = max(worst_tr, abs(float(np.trace(rho).real) - 1.0))
        worst_eig = min(worst_eig, float(np.linalg.eigvalsh(rho).min()))
    out.append(V.Check(9, "density matrix min eigenvalue", worst_eig, 0.0, -1e-12, math.inf))
    out.append(V.Check(9, "density matrix hermiticity", worst_herm, 0.0, 0.0, 1e-15))
    out.append(V.Check(9, "density matrix trace error", worst_tr, 0.0, 0.0, 1e-12))

    # completeness: both transmitted-B outcomes add up to A's singles, times B's efficiency
    worst = 0.0
    for a, b in itertools.product(np.linspace(-90, 180, 10), np.linspace(-90, 180, 10)):
        lhs = predict_raw_coincidence(PUBLISHED_CONFIG, a, b) + predict_raw_coincidence(PUBLISHED_CONFIG, a, b + 90)
        rhs = PUBLISHED_CONFIG.eta_b * predict_raw_singles(PUBLISHED_CONFIG, "A", a)
        worst = max(worst, abs(lhs - rhs) / rhs)
    out.append(V.Check(9, "projector sum rule rel error", worst, 0.0, 0.0, 1e-9))

    # J is linear in counts, exactly
    rounds = published_rounds()
    lin = max(abs(eberhard_j(r.scaled(k)) - k * eberhard_j(r)) for r in rounds for k in (2, 3, 17))
    out.append(V.Check(9, "J linearity abs error", lin, 0.0, 0.0, 0.0))

    # J' only rescales with the baseline; its sign never flips
    flips = 0
    rng = np.random.default_rng(0)
    samples = list(rounds)
    for _ in range(200):
        rows = []
        for _ in range(4):
            sa, sb = rng.integers(1_000, 2_000_000, size=2)
            rows.append((int(sa), int(sb), int(rng.integers(0, min(sa, sb) + 1))))
        samples.append(make_round(rows))
    for rd in samples:
        ref = j_prime(rd, policy=SMALLEST)
        for c in SEQUENCE:
            jp = j_prime(rd, policy=BaselinePolicy.fixed(c))
            if abs(ref) > 1e-6 and (jp > 0) != (ref > 0):
                flips += 1
    out.append(V.Check(9, "baseline sign flips", flips, 0, 0, 0))

    # serialization round trips
    ds = builtin_published_dataset()
    bad = int(dataset_from_json(json.loads(dumps_dataset(ds))) != ds)
    bad += int(config_from_json(config_to_json(PUBLISHED_CONFIG)) != PUBLISHED_CONFIG)
    out.append(V.Check(9, "round-trip mismatches", bad, 0, 0, 0))

    # simulator determinism per seed
    cfg = PUBLISHED_CONFIG
    a = simulate_experiment(cfg, Schedule(2, 0.1), seed=123)
    b = simulate_experiment(cfg, Schedule(2, 0.1), seed=123)
    c = simulate_experiment(cfg, Schedule(2, 0.1), seed=124)
    out.append(V.Check(9, "same-seed mismatches", int(dumps_dataset(a) != dumps_dataset(b)), 0, 0, 0))
    out.append(V.Check(9, "different seeds identical", int(a.rounds == c.rounds), 0, 0, 0))
    return out


def test_criterion_9_structural_suite():
    record(9, _structural_checks())
