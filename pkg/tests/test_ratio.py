from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lpcycle.model import LpInstance, pivot, to_tableau
from lpcycle.numeric import Backend
from lpcycle.pricing import dantzig_select
from lpcycle.ratio import (
    ExpandState,
    InfeasibleStateError,
    StepKind,
    apply_step,
    expand_ratio_test,
    expand_reset,
    standard_ratio_test,
)


def test_standard_ratio_problem1(p1):
    t1 = to_tableau(p1)
    step = standard_ratio_test(t1, 0)
    assert (step.row, step.alpha, step.kind) == (0, 0, StepKind.ZERO)
    # both ratios are zero in T(2): the larger pivot 2.5 wins
    step = standard_ratio_test(pivot(t1, 0, 0), 1)
    assert (step.row, step.alpha) == (1, 0)


def test_standard_ratio_positive_step():
    t = to_tableau(LpInstance([F(1)], [[F(2)], [F(1)]], [F(6), F(4)]))
    step = standard_ratio_test(t, 0)
    assert (step.row, step.alpha, step.kind) == (0, 3, StepKind.FULL)
    t = to_tableau(LpInstance([F(1)], [[F(2)], [F(1)]], [F(6), F(2)]))
    assert standard_ratio_test(t, 0).row == 1


def test_standard_ratio_tie_lowest_row():
    t = to_tableau(LpInstance([F(1)], [[F(1)], [F(1)]], [F(1), F(1)]))
    assert standard_ratio_test(t, 0).row == 0


def test_unbounded_column():
    t = to_tableau(LpInstance([F(1)], [[F(-1)], [F(0)]], [F(0), F(0)]))
    assert standard_ratio_test(t, 0).unbounded
    step, state = expand_ratio_test(t, 0, ExpandState(F(1), F(1)))
    assert step.unbounded and state.n == 1


def test_expand_first_steps_problem1(p1):
    t = to_tableau(p1)
    state = ExpandState(F(1), F(1))
    step, state = expand_ratio_test(t, 0, state)
    assert (step.row, step.alpha, step.kind) == (0, F(5, 2), StepKind.MIN)
    assert state.n == 1 and state.delta == 2
    values = apply_step(t, 0, step)
    # the minimum step pushes the leaving slack to -tau
    assert values[0] == F(5, 2) and values[4] == -1 and values[5] == F(39, 2)
    t = pivot(t.copy(values=values), 0, 0)
    step, state = expand_ratio_test(t, 1, state)
    assert (step.row, step.alpha, step.kind) == (1, F(39, 5), StepKind.FULL)


def test_expand_state_defaults():
    s = ExpandState.default()
    assert s.tau == 5e-11 and s.u0 == 1e4 and s.reset_period == 10000
    assert s.delta_initial == pytest.approx(5e-7)
    assert ExpandState.default(Backend.EXACT).tau == F(5, 10**11)
    with pytest.raises(ValueError):
        ExpandState(F(0), F(1))
    with pytest.raises(ValueError):
        ExpandState(F(1), F(-1))


def test_precondition_violation():
    t = to_tableau(LpInstance([F(1)], [[F(1)]], [F(1)]))
    t = t.copy(values=[F(0), F(-2)])
    with pytest.raises(InfeasibleStateError, match="x2"):
        expand_ratio_test(t, 0, ExpandState(F(1), F(1)))
    # exactly on the current bound -tau*u0: accepted
    expand_ratio_test(t.copy(values=[F(0), F(-1)]), 0, ExpandState(F(1), F(1)))


def test_reset_snaps_nonbasics(p1):
    t = to_tableau(p1)
    state = ExpandState(F(1), F(1), reset_period=2)
    for _ in range(2):
        col = dantzig_select(t)
        step, state = expand_ratio_test(t, col, state)
        t = pivot(t.copy(values=apply_step(t, col, step)), step.row, col)
    assert state.due_for_reset
    assert any(t.values[j] != 0 for j in t.nonbasic())
    t2, state2 = expand_reset(t, state)
    assert state2.n == 0 and not state2.due_for_reset
    assert all(t2.values[j] == 0 for j in t2.nonbasic())
    assert [t2.values[b] for b in t2.basis] == t2.rhs
    assert not ExpandState(F(1), F(1)).due_for_reset


coeff = st.fractions(min_value=-4, max_value=4, max_denominator=4)
rhs = st.fractions(min_value=0, max_value=3, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(coeff, min_size=3, max_size=3),
    st.lists(st.lists(coeff, min_size=3, max_size=3), min_size=3, max_size=3),
    st.lists(rhs, min_size=3, max_size=3),
    st.sampled_from([F(1, 100), F(1), F(2)]),
)
def test_expand_invariants(obj, matrix, b, tau):
    t = to_tableau(LpInstance(obj, matrix, b))
    state = ExpandState(tau, F(1))
    for _ in range(12):
        col = dantzig_select(t)
        if col is None:
            break
        before = t.objective_value()
        step, state = expand_ratio_test(t, col, state)
        if step.unbounded:
            break
        assert step.alpha > 0
        # largest acceptable pivot, found again by brute force
        vals = [t.values[bv] for bv in t.basis]
        ps = [row[col] for row in t.body]
        a_max = min((vals[i] + state.delta) / ps[i] for i in range(len(ps)) if ps[i] > 0)
        acceptable = [i for i in range(len(ps)) if ps[i] > 0 and vals[i] / ps[i] <= a_max]
        assert ps[step.row] == max(ps[i] for i in acceptable)
        assert step.row == min(i for i in acceptable if ps[i] == ps[step.row])
        t = pivot(t.copy(values=apply_step(t, col, step)), step.row, col)
        assert all(x >= -state.delta for x in t.values)
        assert t.objective_value() >= before
