import json
import math

import pytest
from hypothesis import given, strategies as st

from twoit.exceptions import ValidationError
from twoit.hypotheses import (
    DecisionRule,
    HypothesisPair,
    IntervalHypothesis,
    Label,
    Scale,
    band_pair,
    make_pair,
    ratio_pair_from_target,
    symmetric_pair,
)


def test_adjacent_pair_is_disjoint():
    pair = make_pair((0.5, 1.5), (-0.5, 0.5), pi=0.95)
    assert pair.disjoint
    assert pair.h_p.length == pytest.approx(1.0)


def test_overlapping_pair_is_flagged():
    pair = make_pair((0.3, 1.0), (0.0, 0.5))
    assert not pair.disjoint


def test_pi_must_exceed_half():
    with pytest.raises(ValidationError, match="pi must exceed 0.5"):
        make_pair((0.5, 1.5), (-0.5, 0.5), pi=0.5)


def test_pi_below_one():
    with pytest.raises(ValidationError):
        make_pair((0.5, 1.5), (-0.5, 0.5), pi=1.0)


def test_log_scale_pair():
    pair = make_pair((1.1, 2.95), (0.9, 1.1), scale=Scale.LOG)
    assert pair.scale is Scale.LOG
    assert pair.disjoint
    assert pair.h_p.length == pytest.approx(math.log(2.95 / 1.1))


@pytest.mark.parametrize("lower,upper", [(1.0, 1.0), (2.0, 1.0), (0.0, math.inf), (math.nan, 1.0)])
def test_malformed_interval(lower, upper):
    with pytest.raises(ValidationError):
        IntervalHypothesis(Label.PRESENT, lower, upper)


def test_log_scale_needs_positive_lower():
    with pytest.raises(ValidationError):
        IntervalHypothesis(Label.ABSENT, 0.0, 1.0, scale=Scale.LOG)


def test_mixed_scales_rejected():
    h_p = IntervalHypothesis(Label.PRESENT, 1.1, 2.0, scale=Scale.LOG)
    h_a = IntervalHypothesis(Label.ABSENT, -0.1, 0.1)
    with pytest.raises(ValidationError):
        HypothesisPair(h_p, h_a)


def test_labels_checked():
    h = IntervalHypothesis(Label.ABSENT, 0.0, 1.0)
    with pytest.raises(ValidationError):
        HypothesisPair(h, h)


def test_unknown_rule():
    with pytest.raises(ValidationError):
        make_pair((0.5, 1.5), (-0.5, 0.5), rule="majority")


def test_target_17_bounds():
    pair = ratio_pair_from_target(1.7)
    assert pair.h_p.lower == pytest.approx(1.304, abs=5e-4)
    assert pair.h_p.upper == pytest.approx(2.216, abs=1e-3)
    assert pair.h_a.lower == pytest.approx(0.767, abs=5e-4)
    assert pair.h_a.upper == pytest.approx(1.304, abs=5e-4)
    # rounded to two decimals as usually reported
    assert (round(pair.h_p.lower, 2), round(pair.h_p.upper, 2), round(pair.h_a.lower, 2)) == (1.30, 2.22, 0.77)


def test_target_two_closed_form():
    pair = ratio_pair_from_target(2.0)
    assert pair.h_p.lower == pytest.approx(math.sqrt(2))
    assert pair.h_p.upper == pytest.approx(2 * math.sqrt(2))
    assert pair.h_a.lower == pytest.approx(1 / math.sqrt(2))
    assert pair.h_a.upper == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("t", [1.0, 0.0, -2.0])
def test_degenerate_target(t):
    with pytest.raises(ValidationError):
        ratio_pair_from_target(t)


@given(st.floats(min_value=0.05, max_value=20.0).filter(lambda t: abs(math.log(t)) > 1e-3))
def test_target_log_symmetry(t):
    pair = ratio_pair_from_target(t)
    assert math.log(pair.h_p.lower) + math.log(pair.h_p.upper) == pytest.approx(2 * math.log(t), abs=1e-12)
    assert math.log(pair.h_a.lower) + math.log(pair.h_a.upper) == pytest.approx(0.0, abs=1e-12)
    assert pair.disjoint


def test_symmetric_pair_mean_layout():
    pair = symmetric_pair(0, 1, 1, pi=0.95)
    assert (pair.h_a.lower, pair.h_a.upper) == (-0.5, 0.5)
    assert (pair.h_p.lower, pair.h_p.upper) == (0.5, 1.5)


def test_symmetric_pair_proportion_layout():
    pair = symmetric_pair(0.5, 0.7, 0.2, pi=0.95)
    assert (pair.h_a.lower, pair.h_a.upper) == pytest.approx((0.4, 0.6))
    assert (pair.h_p.lower, pair.h_p.upper) == pytest.approx((0.6, 0.8))


def test_symmetric_pair_equal_centers_not_disjoint():
    pair = symmetric_pair(0.5, 0.5, 0.2)
    assert not pair.disjoint


def test_symmetric_pair_width_validated():
    with pytest.raises(ValidationError):
        symmetric_pair(0, 1, 0)


@given(st.floats(-100, 100), st.floats(-100, 100), st.floats(0.01, 50))
def test_symmetric_pair_lengths_equal_width(a, p, w):
    pair = symmetric_pair(a, p, w)
    assert pair.h_p.upper - pair.h_p.lower == pytest.approx(w, rel=1e-12, abs=1e-12)
    assert pair.h_a.upper - pair.h_a.lower == pytest.approx(w, rel=1e-12, abs=1e-12)


def test_band_pair_equivalence_layout():
    pair = band_pair(5, 50)
    assert pair.h_p.bands() == [(-5.0, 5.0)]
    assert pair.h_a.bands() == [(-50.0, -5.0), (5.0, 50.0)]
    assert pair.disjoint
    assert pair.h_a.contains(7.0) and not pair.h_a.contains(0.0)
    assert pair.h_a.length == pytest.approx(90.0)


def test_band_pair_absent_inside():
    pair = band_pair(0.1, 1.0, inside="absent")
    assert pair.h_a.bands() == [(-0.1, 0.1)]
    assert len(pair.h_p.bands()) == 2


def test_interval_in_gap_is_not_contained():
    h = IntervalHypothesis(Label.ABSENT, -1, 1, gap=(-0.2, 0.2))
    assert not h.contains_interval(-0.3, 0.3)
    assert h.contains_interval(0.3, 0.9)


def test_gap_must_be_inside():
    with pytest.raises(ValidationError):
        IntervalHypothesis(Label.ABSENT, -1, 1, gap=(-2, 0.2))


pairs = st.one_of(
    st.builds(lambda t, pi: ratio_pair_from_target(t, pi=pi), st.floats(1.05, 10.0), st.floats(0.51, 0.99)),
    st.builds(
        lambda a, p, w, rule: symmetric_pair(a, p, w, rule=rule),
        st.floats(-5, 5),
        st.floats(-5, 5),
        st.floats(0.1, 3),
        st.sampled_from(list(DecisionRule)),
    ),
    st.builds(lambda m, o: band_pair(m, m + o), st.floats(0.1, 5), st.floats(0.5, 10)),
)


@given(pairs)
def test_serialization_round_trip(pair):
    text = json.dumps(pair.to_dict())
    assert HypothesisPair.from_dict(json.loads(text)) == pair
