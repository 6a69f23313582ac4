import statistics

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import physical_rounds
from eberhard.counts import CountsBlock, RoundData, StructureError, accumulate, make_round
from eberhard.fixtures import J_ROUNDS, TOTALS_RAW
from eberhard.inequality import (
    eberhard_j,
    eberhard_j_sigma,
    poisson_relative_fluctuation,
    series_stats,
    singles_deviations,
)


def test_j_round_one(rounds):
    assert eberhard_j(rounds[0]) == -27_985


def test_j_every_round_exact(rounds):
    js = [eberhard_j(r) for r in rounds]
    assert js == list(J_ROUNDS)
    assert all(isinstance(j, int) for j in js)


def test_j_totals(totals):
    assert eberhard_j(totals) == -126_715


def test_j_zero_counts():
    assert eberhard_j(make_round([(0, 0, 0)] * 4)) == 0


def test_j_by_hand():
    # sA(a1b2) - C(a1b2) + sB(a2b1) - C(a2b1) + C(a2b2) - C(a1b1)
    r = make_round([(10, 20, 5), (30, 40, 7), (50, 60, 11), (70, 80, 13)])
    assert eberhard_j(r) == (30 - 7) + (80 - 13) + 11 - 5


def test_missing_block_is_structural_error():
    b = CountsBlock(1, 1, 1, 1, 1)
    with pytest.raises(StructureError):
        RoundData((b, b, CountsBlock(2, 2, 1, 1, 1), CountsBlock(2, 1, 1, 1, 1)))
    with pytest.raises(StructureError):
        RoundData((b,))


@given(physical_rounds(), st.integers(1, 50))
def test_j_linear_in_counts(rd, k):
    assert eberhard_j(rd.scaled(k)) == k * eberhard_j(rd)


@given(st.lists(physical_rounds(), min_size=1, max_size=6))
def test_j_of_sum_is_sum_of_j(rds):
    assert eberhard_j(accumulate(rds)) == sum(eberhard_j(r) for r in rds)


def test_sigma_is_sqrt_of_counting_terms():
    r = make_round([(10, 20, 5), (30, 40, 7), (50, 60, 11), (70, 80, 13)])
    assert eberhard_j_sigma(r) == pytest.approx(((30 - 7) + (80 - 13) + 11 + 5) ** 0.5)


def test_series_stats_published_j():
    s = series_stats(J_ROUNDS)
    assert s.sum == -126_715
    assert round(s.mean) == -25_343
    assert round(s.std) == 1_503
    assert s.n == 5
    assert s.std == pytest.approx(statistics.stdev(J_ROUNDS), rel=1e-12)


def test_series_stats_published_j_prime():
    s = series_stats([-24_193, -25_727, -24_717, -22_750, -25_745])
    assert round(s.mean) == -24_626
    assert round(s.std) == 1_243


def test_series_stats_constant_and_edge_cases():
    s = series_stats([7.5] * 4)
    assert s.mean == 7.5 and s.std == 0
    one = series_stats([3.0])
    assert one.mean == 3.0 and one.std != one.std  # nan
    with pytest.raises(ValueError):
        series_stats([])


@given(
    st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=20),
    st.floats(-1e6, 1e6),
)
def test_series_stats_translation_covariant(xs, c):
    a, b = series_stats(xs), series_stats([x + c for x in xs])
    assert b.mean == pytest.approx(a.mean + c, rel=1e-9, abs=1e-6)
    assert b.std == pytest.approx(a.std, rel=1e-9, abs=1e-6)


def test_significance_ratios():
    s = series_stats(J_ROUNDS)
    assert s.mean_significance == pytest.approx(s.mean / s.std)
    assert s.sum_significance == pytest.approx(s.sum / s.std)


def test_singles_deviations_table2(totals):
    d = singles_deviations(totals)
    assert round(d.a1, 2) == -0.25
    assert round(d.a2, 2) == -0.12
    assert round(d.b1, 2) == -0.36
    assert round(d.b2, 2) == -0.18


def test_singles_deviations_direct_ratio():
    r = make_round([(1_000_000, 5, 1), (999_000, 5, 1), (7, 5, 1), (7, 5, 1)])
    assert singles_deviations(r).a1 == pytest.approx(-0.10)


@given(physical_rounds())
def test_singles_deviations_zero_for_consistent_blocks(rd):
    b11 = rd.block(1, 1)
    b22 = rd.block(2, 2)
    same = make_round(
        [
            (b11.s_a, b11.s_b, 0),
            (b11.s_a, b22.s_b, 0),
            (b22.s_a, b22.s_b, 0),
            (b22.s_a, b11.s_b, 0),
        ]
    )
    assert all(v == 0 for v in singles_deviations(same).as_dict().values())


def test_poisson_fluctuation():
    assert 100 * poisson_relative_fluctuation(1_522_865) == pytest.approx(0.081, abs=5e-4)
    assert 100 * poisson_relative_fluctuation(4_729_369) == pytest.approx(0.046, abs=5e-4)
    assert 100 * poisson_relative_fluctuation(10_000) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        poisson_relative_fluctuation(0)


def test_table2_totals_from_rounds(rounds):
    assert accumulate(rounds) == make_round(TOTALS_RAW)
