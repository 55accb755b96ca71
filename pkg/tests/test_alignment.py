import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from reqcontract.alignment import (
    VALUE_INCREASING,
    AlignmentError,
    Delta,
    EconProfile,
    Expectation,
    InterestLabel,
    Situation,
    budget_check,
    conflict_scan,
    expected_value,
    interest_case,
    marginal_situation,
    to_rational,
    viability,
)
from reqcontract.roles import Role

Q, M, V = Role.REQUESTER, Role.MAKER, Role.EVALUATOR


def profile(q=(20, 10), m=(5, 2), v=(3, 1)):
    return EconProfile({Q: Expectation(*q), M: Expectation(*m), V: Expectation(*v)})


GRID = range(-3, 4)


def octant_by_angle(db, dc):
    """Clockwise angle from the +benefit axis, in 45 degree slices."""
    theta = math.degrees(math.atan2(dc, db)) % 360
    return "ABCDEFGH"[int(theta // 45)]


def on_boundary(db, dc):
    return db == 0 or dc == 0 or abs(db) == abs(dc)


class TestRationals:
    @pytest.mark.parametrize(
        "text,value", [("3/2", F(3, 2)), ("-1/3", F(-1, 3)), ("7", F(7)), (" 4 / 6 ", F(2, 3)), (5, F(5))]
    )
    def test_accepted(self, text, value):
        assert to_rational(text) == value

    @pytest.mark.parametrize("bad", [1.5, "1.5", "abc", True, None, "1/0", "1e3"])
    def test_rejected(self, bad):
        with pytest.raises(AlignmentError):
            to_rational(bad)


class TestExpectedValue:
    def test_difference(self):
        assert expected_value(profile(q=(10, 4)), Q) == 6

    def test_break_even(self):
        assert expected_value(profile(m=(7, 7)), M) == 0

    def test_exact_fraction(self):
        assert expected_value(profile(v=("3/2", "1/3")), V) == F(7, 6)

    def test_missing_role(self):
        with pytest.raises(AlignmentError, match="evaluator"):
            EconProfile({Q: Expectation(1, 0), M: Expectation(1, 0)})

    def test_negative_cost(self):
        with pytest.raises(AlignmentError):
            Expectation(1, -1)


class TestViability:
    def test_viable(self):
        assert viability(profile(q=(10, 4))).per_role[Q] is True

    def test_break_even_not_viable(self):
        assert viability(profile(q=(4, 4))).per_role[Q] is False

    def test_all_viable_feasible(self):
        v = viability(profile())
        assert v.feasible and all(v.per_role.values())

    def test_one_short_infeasible(self):
        assert not viability(profile(m=(2, 5))).feasible


class TestBudget:
    def test_pass_with_slack(self):
        b = budget_check(profile(q=(20, 10), m=(5, 1), v=(3, 1)))
        assert b.passed and b.slack == 2

    def test_fail(self):
        b = budget_check(profile(q=(20, 10), m=(5, 1), v=(6, 1)))
        assert not b.passed and b.slack == -1

    def test_equality_passes(self):
        b = budget_check(profile(q=(20, 8), m=(5, 1), v=(3, 1)))
        assert b.passed and b.slack == 0

    def test_tiny_overrun_detected(self):
        b = budget_check(profile(q=(20, "1/3"), m=("1/6", 0), v=("1/6", 0)))
        assert b.passed and b.slack == 0
        b = budget_check(profile(q=(20, "1/3"), m=("1/6", 0), v=("1000000001/6000000000", 0)))
        assert not b.passed and b.slack == F(-1, 6000000000)


class TestMarginal:
    def test_gain(self):
        assert marginal_situation(Delta(3, 2)).situation is Situation.GAIN_DOMINANT

    def test_cost(self):
        m = marginal_situation(Delta(1, 2))
        assert m.situation is Situation.COST_DOMINANT and m.ratio == F(1, 2)

    def test_negative(self):
        m = marginal_situation(Delta(-1, 2))
        assert m.situation is Situation.NEGATIVE_RATIO
        assert "benefit falls" in m.note

    def test_balanced(self):
        assert marginal_situation(Delta(2, 2)).situation is Situation.BALANCED

    def test_zero_benefit(self):
        m = marginal_situation(Delta(0, 5))
        assert m.situation is Situation.COST_DOMINANT and "zero" in m.note

    def test_zero_cost_change(self):
        with pytest.raises(AlignmentError):
            marginal_situation(Delta(1, 0))


class TestInterestCase:
    def test_case_a(self):
        c = interest_case(Delta(3, 2))
        assert c.label is InterestLabel.A and c.dv == 1

    def test_case_f(self):
        c = interest_case(Delta(-1, -2))
        assert c.label is InterestLabel.F and c.dv == 1

    def test_stationary(self):
        c = interest_case(Delta(0, 0))
        assert c.label is InterestLabel.STATIONARY and c.dv == 0

    @pytest.mark.parametrize("db,dc", [(0, 2), (2, 0), (1, 1), (-1, 1), (-2, -2), (3, -3)])
    def test_boundaries(self, db, dc):
        assert interest_case(Delta(db, dc)).label is InterestLabel.ON_AXIS_OR_DIAGONAL

    @pytest.mark.parametrize("db", GRID)
    @pytest.mark.parametrize("dc", GRID)
    def test_grid_against_angle_oracle(self, db, dc):
        c = interest_case(Delta(db, dc))
        assert c.dv == db - dc
        if on_boundary(db, dc):
            assert c.label not in VALUE_INCREASING and c.label.value not in "ABCDEFGH"
        else:
            assert c.label.value == octant_by_angle(db, dc)
            assert (c.label in VALUE_INCREASING) == (db - dc > 0)

    def test_every_case_reached_on_grid(self):
        seen = {interest_case(Delta(db, dc)).label for db in GRID for dc in GRID}
        assert seen == set(InterestLabel)


rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x) < 10**6)


@given(rationals, rationals)
def test_value_sign_theorem(db, dc):
    c = interest_case(Delta(db, dc))
    if c.label in VALUE_INCREASING:
        assert db - dc > 0
    elif c.label.value in "BCDE":
        assert db - dc < 0
    else:
        assert on_boundary(db, dc)


@given(rationals, rationals)
def test_one_label_each(db, dc):
    labels = [lab for lab in InterestLabel if interest_case(Delta(db, dc)).label is lab]
    assert len(labels) == 1


class TestConflict:
    def conflict_deltas(self):
        return {Q: Delta("3/2", 3), M: Delta(2, 1), V: Delta(1, "2/3")}

    def test_ratio_triple_flagged(self):
        rep = conflict_scan({Q: Delta(1, 2), M: Delta(2, 1), V: Delta(3, 2)})
        assert rep.conflict
        assert rep.ratios == {Q: F(1, 2), M: F(2), V: F(3, 2)}
        assert rep.coupled_requester_ratio is None

    def test_all_above_one(self):
        rep = conflict_scan({Q: Delta(3, 2), M: Delta(2, 1), V: Delta(3, 2)})
        assert not rep.conflict

    def test_coupled(self):
        rep = conflict_scan(self.conflict_deltas(), coupled=True)
        # 1.5 / (2 + 1)
        assert rep.coupled_requester_ratio == F(1, 2)
        assert rep.ratios[Q] == F(1, 2)
        assert rep.conflict

    def test_coupled_can_differ_from_raw(self):
        deltas = {Q: Delta(1, "1/2"), M: Delta(2, 1), V: Delta(2, 1)}
        assert not conflict_scan(deltas).conflict
        assert conflict_scan(deltas, coupled=True).conflict

    def test_zero_denominators(self):
        with pytest.raises(AlignmentError):
            conflict_scan({Q: Delta(1, 0), M: Delta(2, 1), V: Delta(3, 2)})
        with pytest.raises(AlignmentError, match="cancel"):
            conflict_scan({Q: Delta(1, 1), M: Delta(2, 1), V: Delta(-2, 1)}, coupled=True)


cost = st.fractions(min_value=0, max_value=1000, max_denominator=1000)
money = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)


@given(money, cost, money, cost, money, cost)
def test_budget_viability_consistency(qb, qc, mb, mc, vb, vc):
    p = profile(q=(qb, qc), m=(mb, mc), v=(vb, vc))
    # EB_P + EB_V <= EC_R < EB_R whenever the budget holds and the Requester is viable
    if budget_check(p).passed and viability(p).per_role[Q]:
        assert qb > mb + vb
    if qb <= mb + vb and viability(p).per_role[Q]:
        assert not budget_check(p).passed


def test_budget_failure_does_not_bound_requester_benefit():
    # budget fails and everyone is viable, yet EB_R < EB_P + EB_V
    p = profile(q=(1, 0), m=(1, 0), v=(1, 0))
    assert not budget_check(p).passed and viability(p).feasible
