from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shootout.analysis import (
    COMPARED,
    Comparison,
    alpha_threshold,
    empirical_bars,
    fairness_bias,
    q_grid,
    region_boundary,
    region_curve,
    sweep_q,
    table3,
    tie_bars,
    tie_probability,
)
from shootout.engine import sudden_death_win_prob
from shootout.errors import DomainError
from shootout.mechanisms import ADJUSTED_CATCH_UP, ALTERNATING, CATCH_UP, STANDARD
from shootout.model import PRESETS, ScoringModel
from shootout.reference import EMPIRICAL_BARS, SWEEP_CURVES, TABLE3, TIE_BARS

BRAMS = PRESETS["brams"]
EMPIRICAL = PRESETS["apesteguia2010"]


def test_fairness_bias_examples():
    r = fairness_bias(ADJUSTED_CATCH_UP, 4, BRAMS)
    assert round(float(r.win_prob_a), 3) == 0.501
    assert r.bias == r.win_prob_a - Fraction(1, 2)
    assert round(float(fairness_bias(ALTERNATING, 1, BRAMS).win_prob_a), 3) == 0.526
    assert abs(r.bias) <= Fraction(1, 2)
    assert fairness_bias(CATCH_UP, 3, ScoringModel.uniform("0.6", "0.6")).bias == 0


def test_table3_rows():
    grid = table3(BRAMS)
    assert len(grid) == 24
    by_row = {}
    for r in grid:
        by_row.setdefault(r.rounds, []).append(round(float(r.win_prob_a), 3))
    assert by_row[2] == [0.516, 0.495, 0.511]
    assert by_row[8] == [0.511, 0.504, 0.506]
    assert set(by_row) == set(TABLE3)


def test_table3_equal_rates_is_flat():
    model = ScoringModel.uniform("2/3", "2/3")
    assert all(r.win_prob_a == Fraction(1, 2) for r in table3(model, range(1, 5)))


def test_adjusted_is_fairest_from_two_rounds():
    grid = table3(BRAMS)
    for n in range(2, 9):
        row = {r.mechanism: r.distance for r in grid if r.rounds == n}
        others = [row[CATCH_UP], row[ALTERNATING]]
        assert row[ADJUSTED_CATCH_UP] < min(others)


def test_alternating_odd_rounds_are_less_fair():
    dist = {r.rounds: r.distance for r in table3(BRAMS, mechanisms=[ALTERNATING])}
    for odd in (3, 5, 7):
        assert dist[odd] > dist[odd - 1] and dist[odd] > dist[odd + 1]


def test_q_grid():
    g = q_grid("0.55")
    assert g == [Fraction(50, 100) + Fraction(k, 100) for k in range(6)]
    assert q_grid("0.49") == []
    with pytest.raises(DomainError):
        q_grid("0.6", step="0")


@pytest.mark.parametrize(
    "mech,p,q,expected",
    [(CATCH_UP, 0.75, 0.5, 0.5440673828125), (ALTERNATING, 0.8, 0.65, 0.527839379396)],
)
def test_sweep_points(mech, p, q, expected):
    [(_, v)] = sweep_q(mech, 5, p, [q])
    assert v == pytest.approx(expected, abs=1e-9)


def test_sweep_matches_every_plotted_point():
    name = {str(m): m for m in COMPARED}
    for p, curves in SWEEP_CURVES.items():
        for key, points in curves.items():
            got = sweep_q(name[key], 5, float(p), [q for q, _ in points])
            for (q, v), (q2, want) in zip(got, points):
                assert q == q2
                assert v == pytest.approx(want, abs=1e-9)


def test_sweep_endpoint_and_guards():
    [(_, v)] = sweep_q(ADJUSTED_CATCH_UP, 5, "0.7", ["0.7"], exact=True)
    assert v == Fraction(1, 2)
    with pytest.raises(DomainError):
        sweep_q(CATCH_UP, 5, 0.7, [0.8])
    with pytest.raises(DomainError):
        sweep_q(CATCH_UP, 5, 0.7, [0.6, 0.5])
    with pytest.raises(DomainError):
        sweep_q(CATCH_UP, 5, 0.7, [0.6], sd_follows=False)
    fixed = sweep_q(CATCH_UP, 5, 0.7, [0.6], sd_follows=False, sudden_death=(0.75, 0.5))
    follow = sweep_q(CATCH_UP, 5, 0.7, [0.6])
    assert fixed[0][1] != follow[0][1]


def test_empirical_bars():
    pairs = list(EMPIRICAL_BARS)
    bars = empirical_bars(pairs)
    assert len(bars) == 9
    for sd, mech, v in bars:
        assert float(v) == pytest.approx(EMPIRICAL_BARS[sd][str(mech)], abs=1e-9)


def test_tie_probability_examples():
    assert float(tie_probability(CATCH_UP, 5, BRAMS)) == pytest.approx(0.283733603395, abs=1e-9)
    assert float(tie_probability(ALTERNATING, 5, EMPIRICAL)) == pytest.approx(
        0.2831516870768, abs=1e-9
    )
    assert tie_probability(STANDARD, 1, ScoringModel.uniform(1, 1)) == 1


def test_catch_up_variants_share_tie_probability():
    cases = [(m, n) for m in (BRAMS, ScoringModel.uniform("0.9", "0.2")) for n in (1, 3, 5)]
    for model, n in cases + [(EMPIRICAL, 5)]:
        assert tie_probability(CATCH_UP, n, model) == tie_probability(ADJUSTED_CATCH_UP, n, model)


def test_tie_bars():
    configs = [(k, ScoringModel.uniform(*k)) for k in TIE_BARS if k != "empirical"]
    configs.append(("empirical", EMPIRICAL))
    for label, mech, v in tie_bars(configs):
        assert float(v) == pytest.approx(TIE_BARS[label][str(mech)], abs=1e-9)


def test_alpha_threshold_vs_catch_up():
    res = alpha_threshold(Comparison.VS_CATCH_UP)
    assert res.found
    assert res.alpha_star == pytest.approx(0.6569, abs=5e-4)
    exact = alpha_threshold("catchup", exact=True)
    assert isinstance(exact.alpha_star, Fraction)
    assert res.alpha_star == pytest.approx(float(exact.alpha_star), abs=1e-11)


def test_alpha_threshold_is_where_the_gaps_cross():
    # independent check: evaluate the fairness gaps at sudden-death pairs whose
    # first-mover win probability sits just either side of the threshold
    res = alpha_threshold("abba", exact=True)
    alpha = res.alpha_star
    p_sd = Fraction(3, 4)

    def q_for(a):
        return region_boundary(p_sd, a)

    for a, adjusted_fairer in ((alpha - Fraction(1, 1000), True), (alpha + Fraction(1, 1000), False)):
        model = EMPIRICAL.with_sudden_death(p_sd, q_for(a))
        assert sudden_death_win_prob(p_sd, q_for(a)) == a
        adj = fairness_bias(ADJUSTED_CATCH_UP, 5, model).distance
        rival = fairness_bias(ALTERNATING, 5, model).distance
        assert (adj <= rival) is adjusted_fairer


def test_alpha_threshold_without_ties_has_no_crossing():
    # first kickers always score and second kickers always miss, so no
    # shootout reaches sudden death and alpha cannot matter
    model = ScoringModel.uniform(1, 0, (Fraction(3, 4), Fraction(2, 3)))
    assert tie_probability(CATCH_UP, 5, model) == 0
    res = alpha_threshold("catchup", model)
    assert not res.found and res.adjusted_fairer


def test_region_boundary():
    assert region_boundary(0.75, 0.6569) == pytest.approx(0.309276, abs=1e-3)
    assert region_boundary(0.75, 0.6252) == pytest.approx(0.388473, abs=1e-3)
    for alpha in (0.4, 1.0):
        with pytest.raises(DomainError):
            region_boundary(0.75, alpha)


@given(
    st.fractions(min_value=Fraction(1, 2), max_value=1),
    st.fractions(min_value=Fraction(1, 2), max_value=Fraction(99, 100)),
)
def test_region_boundary_round_trip(p, alpha):
    q = region_boundary(p, alpha)
    if p + q - 2 * p * q != 0:
        assert sudden_death_win_prob(p, q) == alpha


def test_region_curve():
    curve = region_curve(0.6569, [0.5, 0.75, 1.0])
    assert [p for p, _ in curve] == [0.5, 0.75, 1.0]
    assert curve[1][1] == pytest.approx(0.309276, abs=1e-3)
