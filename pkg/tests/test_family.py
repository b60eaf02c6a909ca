from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from lpcycle.family import (
    FamilyError,
    FamilyParams,
    a_cubed,
    augment_extra_row,
    augment_instance,
    build_instance,
    build_m1,
    closed_form_state,
    column_choice_bounds,
    cycling_predicate_dantzig,
    cycling_predicate_expand,
    expected_m2,
    first_negative_g,
    geometric_sums,
    mu_bounds,
    mu_interval_nonempty,
    region_curve,
    series,
)
from lpcycle.model import cyclic_shift_equal, pivot
from lpcycle.numeric import Backend, MixedBackendError


def P(a11, a12, mu, scale="1", backend=Backend.EXACT):
    return FamilyParams.parse(a11, a12, mu, scale, backend=backend)


def test_m1_problem1(p1):
    assert p1.objective == [F(23, 10), F(43, 20), F(-271, 20), F(-2, 5)]
    assert p1.matrix == [
        [F(2, 5), F(1, 5), F(-7, 5), F(-1, 5)],
        [F(-39, 5), F(-7, 5), F(39, 5), F(2, 5)],
    ]
    assert p1.rhs == [0, 0]


def test_block_structure():
    p = P("0.4", "0.2", "-0.9")
    assert p.a21 == F(-39, 5) and p.a22 == F(-7, 5)
    assert p.block_b() == [[F(-7, 5), F(-1, 5)], [F(39, 5), F(2, 5)]]
    assert p.cost_a() == [-1, F(-9, 10)]
    assert a_cubed(p) == [[1, 0], [0, 1]]
    t = build_m1(p)
    assert t.objective_row[:4] == [-1, F(-9, 10), F(281, 50), F(4, 25)]


def test_param_errors():
    with pytest.raises(FamilyError, match="a12"):
        P("0.4", "0", "-0.9")
    with pytest.raises(FamilyError):
        P("0.4", "0.2", "-0.9", scale="0")
    with pytest.raises(MixedBackendError):
        FamilyParams(F(2, 5), 0.2, F(-1))


def test_float_params():
    p = P("0.4", "0.2", "-0.9", backend=Backend.FLOAT)
    assert p.backend is Backend.FLOAT and p.a21 == pytest.approx(-7.8)
    assert p.as_backend(Backend.EXACT).a11 == F(2, 5)


def test_augment_row(se_instance):
    assert se_instance.matrix[2] == [0, -20, 156, 8]
    assert se_instance.rhs == [0, 0, 1]
    t = augment_extra_row(build_m1(P("0.4", "0.2", "-1.75")), [F(0), F(-20)], F(1))
    assert t.body[2][:4] == [0, -20, 156, 8] and t.basis == [4, 5, 6]
    with pytest.raises(FamilyError):
        augment_extra_row(pivot(build_m1(P("0.4", "0.2", "-1.75")), 0, 0), [F(0), F(1)], F(1))


def test_mu_bounds():
    assert mu_bounds(F(2, 5), F(1, 5)) == (-1, F(-6, 7))
    assert not mu_interval_nonempty(F(2, 5), F(2, 5))
    assert mu_interval_nonempty(F(2, 5), F(1, 5))
    assert region_curve(F(2, 5)) == F(7, 30)
    # the interval closes exactly on the curve
    assert mu_bounds(F(2, 5), F(7, 30))[1] == -1


@pytest.mark.parametrize(
    "params, dantzig, expand",
    [
        (("0.4", "0.2", "-2.15/2.3"), True, True),
        (("0.4", "0.2", "-1.75"), False, False),
        (("0.4", "0.4", "-0.95"), False, False),
        (("0.6", "0.2", "-0.8"), True, False),
        (("0.5", "0.2", "-0.9"), True, True),
        (("0.4", "0.2", "-1"), False, False),
        (("-0.4", "0.2", "-0.9"), False, False),
        (("2", "1.2", "-0.9"), False, False),
        (("2", "0.9", "-1.1"), False, False),
    ],
)
def test_predicates(params, dantzig, expand):
    p = P(*params)
    assert cycling_predicate_dantzig(p) is dantzig
    assert cycling_predicate_expand(p) is expand


def test_geometric_sums():
    a = F(2, 5)
    assert [geometric_sums(a, k)[0] for k in range(3)] == [1, F(7, 5), F(39, 25)]
    assert [geometric_sums(a, k)[1] for k in range(3)] == [1, F(12, 5), F(99, 25)]
    assert geometric_sums(a, -1) == (0, 0)
    assert geometric_sums(F(1), 3) == (4, 10)
    s = series(P("0.4", "0.2", "-0.9"), F(1), 20)
    for k in range(20):
        assert (s.s[k], s.S[k]) == geometric_sums(a, k)


def _g_brute(a11, a12, u0, k):
    # direct sums, independent of the recurrences in the library
    a21 = -(1 + a11 + a11 * a11) / a12
    s_k = sum(a11**i for i in range(k + 1))
    S_km2 = sum((k - 1 - i) * a11**i for i in range(k - 1))
    return a12 * a21 / a11 * s_k + 1 / a11 - S_km2 + u0 + 2 * k + 2


def _first_negative_brute(a11, a12, u0, cap):
    return next((k for k in range(cap + 1) if _g_brute(a11, a12, u0, k) < 0), None)


@pytest.mark.parametrize(
    "a11, a12, u0, expected",
    [
        ("0.6", "0.2", 1, 6),
        ("0.6", "0.2", 10, 24),
        ("0.6", "0.2", 100, 204),
        ("43/80", "0.2", 1, 14),
        ("21/40", "0.2", 1, 21),
    ],
)
def test_first_negative_g_examples(a11, a12, u0, expected):
    p = P(a11, a12, "-0.8")
    assert first_negative_g(p, F(u0), 10**4) == expected
    assert _first_negative_brute(p.a11, p.a12, F(u0), expected + 2) == expected


def test_first_negative_g_never_for_small_a11():
    p = P("0.4", "0.2", "-0.9")
    assert first_negative_g(p, F(1), 10**6) is None
    pf = p.as_backend(Backend.FLOAT)
    assert first_negative_g(pf, 1.0, 10**6) is None
    assert _first_negative_brute(0.4, 0.2, 1.0, 3000) is None


def test_first_negative_g_grows_linearly_in_u0():
    p = P("0.6", "0.2", "-0.8", backend=Backend.FLOAT)
    ks = [first_negative_g(p, float(u0), 10**6) for u0 in (10, 100, 1000, 10000)]
    assert ks == [24, 204, 2004, 20004]


def test_closed_form_first_states():
    p = P("0.4", "0.2", "-2.15/2.3")
    assert closed_form_state(p, F(1), 1) == [0] * 6
    assert closed_form_state(p, F(1), 2) == [F(5, 2), 0, 0, 0, -1, F(39, 2)]
    with pytest.raises(ValueError):
        closed_form_state(p, F(1), 0)


def test_closed_form_scales_with_tau():
    p = P("0.4", "0.2", "-0.9")
    for n in range(1, 15):
        assert closed_form_state(p, F(3), n) == [3 * v for v in closed_form_state(p, F(1), n)]


nonzero = st.fractions(min_value=F(1, 20), max_value=3, max_denominator=40)
signed = st.builds(lambda x, neg: -x if neg else x, nonzero, st.booleans())


@settings(max_examples=80, deadline=None)
@given(signed, signed, st.fractions(min_value=-3, max_value=3, max_denominator=40))
def test_two_pivots_shift_the_tableau_by_two(a11, a12, mu):
    assume(a11 != -1 and 1 + a11 + a11 * a11 != 0)
    p = FamilyParams(a11, a12, mu)
    t1 = build_m1(p)
    t2 = pivot(t1, 0, 0)
    assume(t2.body[1][1] != 0)
    t3 = pivot(t2, 1, 1)
    assert cyclic_shift_equal(t1, t3, 2, 6)
    rows, obj = expected_m2(p)
    assert t2.body == rows
    assert t2.objective_row == obj


@settings(max_examples=80, deadline=None)
@given(signed, signed, st.fractions(min_value=-3, max_value=3, max_denominator=40))
def test_a_cubed_identity(a11, a12, mu):
    p = FamilyParams(a11, a12, mu)
    assert a_cubed(p) == [[1, 0], [0, 1]]


@settings(max_examples=100, deadline=None)
@given(nonzero, st.fractions(min_value=F(1, 50), max_value=F(49, 50), max_denominator=50), st.floats(0.01, 0.99))
def test_only_one_column_bound_binds(a11, a12, frac):
    lo, hi = mu_bounds(a11, a12)
    assume(lo < hi)
    mu = lo + (hi - lo) * F(frac)
    bounds = column_choice_bounds(a11, a12)
    assert bounds["m2_col2_vs_col4"] == hi
    assert all(mu < b for b in bounds.values())


@settings(max_examples=60, deadline=None)
@given(nonzero, nonzero, st.integers(0, 30))
def test_g_increment_identity(a11, a12, u0):
    p = FamilyParams(a11, a12, F(-1, 2))
    s = series(p, F(u0), 25)
    for k in range(25):
        assert s.g[k + 1] - s.g[k] == 2 - s.s[k + 2]
        assert s.g[k] == _g_brute(a11, a12, F(u0), k)


def test_build_instance_name_and_scale():
    inst = build_instance(P("0.4", "0.2", "-0.9", "2"), name="x")
    assert inst.name == "x" and inst.objective[:2] == [2, F(9, 5)]
    assert augment_instance(inst, [F(1), F(0)], F(2)).matrix[2][:2] == [1, 0]
