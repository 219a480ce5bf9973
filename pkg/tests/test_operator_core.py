from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import Rational

from stein_algebra.src.exceptions import DegenerateOperator, InvalidParameter, NotAssumptionOne
from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm, detect_assumption1, \
    split_assumption1
from stein_algebra.src.operator_core.euler import EulerPoly, TFactor, euler_to_expanded, \
    expanded_group_to_euler, render_euler
from stein_algebra.src.operator_core.expanded import ExpandedOp, commute_d_past_m, compose, compose_all, \
    d_power, is_scalar_multiple, m_power, normalize_word, ring_ops, t_operator
from stein_algebra.src.operator_core.scalars import to_scalar
from tests.strategies import PROPERTY_SETTINGS, euler_polys, expanded_ops, rationals, words


def test_dm_commutation():
    expected = ExpandedOp.from_mapping({(1, 1): 1, (0, 0): 1})
    assert compose(d_power(1), m_power(1)) == expected
    assert normalize_word("DM") == expected


def test_commute_d_past_m_closed_form():
    assert dict(commute_d_past_m(2, 2)) == {(2, 2): 1, (1, 1): 4, (0, 0): 2}


def test_theta_squared_expansion():
    theta_squared = EulerPoly.from_coefficients((0, 0, 1))
    assert euler_to_expanded(theta_squared) == ExpandedOp.from_mapping({(2, 2): 1, (1, 1): 1})


def test_t_factor_matches_t_operator():
    assert TFactor.finite("3/2").as_expanded() == t_operator(Rational(3, 2))
    assert TFactor.identity().as_expanded() == ExpandedOp.identity()
    assert TFactor.identity().shifted(5).is_identity


def test_ring_ops_dispatch():
    a, b = t_operator(1), m_power(2)
    assert ring_ops(a, b, "add") == a + b
    assert ring_ops(a, op="scale", factor=3) == a * 3
    assert ring_ops(a, b, "compose") == compose(a, b)
    with pytest.raises(ValueError):
        ring_ops(a, b, "divide")


def test_normalize_word_rejects_other_letters():
    with pytest.raises(ValueError):
        normalize_word("MDX")


def test_render_expanded_orders_by_d_then_m():
    operator = m_power(2) * -1 + t_operator(1)
    assert operator.render() == "MD - M^2 + I"
    assert ExpandedOp.zero().render() == "0"


def test_render_euler_groups_t_factors():
    assert render_euler(EulerPoly.from_t_factors([1, 1], leading=2)) == "2T_1^2"
    assert render_euler(EulerPoly.from_t_factors(["1/2", 3])) == "T_{1/2}T_3"


def test_factored_splits_t_factors_and_blocks():
    factored = EulerPoly.from_coefficients((0, 2, 2)).factored()
    assert factored.leading == 2
    assert factored.factors == (TFactor.finite(0), TFactor.finite(1))
    assert factored.is_complete

    irreducible = EulerPoly.from_coefficients((1, 0, 1)).factored()
    assert not irreducible.is_complete
    assert irreducible.blocks == (EulerPoly.from_coefficients((1, 0, 1)),)


def test_assumption_one_keeps_k_monic():
    form = AssumptionOneForm(EulerPoly.from_t_factors([1]), 1, 1, EulerPoly.from_t_factors([3], leading=2))
    assert form.b == 2
    assert form.K == EulerPoly.from_t_factors([3])


def test_assumption_one_rejects_degenerate_parts():
    with pytest.raises(DegenerateOperator):
        AssumptionOneForm(EulerPoly.from_t_factors([1]), 0, 1, EulerPoly.constant(1))
    with pytest.raises(DegenerateOperator):
        AssumptionOneForm(EulerPoly.from_t_factors([1]), 1, 0, EulerPoly.constant(1))


def test_detect_standard_normal():
    form = detect_assumption1(t_operator(1) - m_power(2))
    assert form == AssumptionOneForm(EulerPoly.from_t_factors([1]), 1, 2, EulerPoly.constant(1))
    assert form.render() == "T_1 - M^2"


def test_split_reports_the_m_power_divided_out():
    # D - M becomes T_1 - M^2 after composing with M on the right
    form, shift = split_assumption1(d_power(1) - m_power(1))
    assert form == AssumptionOneForm(EulerPoly.from_t_factors([1]), 1, 2, EulerPoly.constant(1))
    assert shift == -1


def test_split_rejects_other_shapes():
    with pytest.raises(NotAssumptionOne):
        split_assumption1(m_power(1) + d_power(1) + ExpandedOp.identity())
    with pytest.raises(DegenerateOperator):
        split_assumption1(t_operator(2))
    with pytest.raises(DegenerateOperator):
        split_assumption1(ExpandedOp.zero())


@pytest.mark.parametrize("value, expected", [
    ("3/2", Rational(3, 2)),
    (-4, Rational(-4)),
    (Fraction(5, 10), Rational(1, 2)),
    (Rational(7, 3), Rational(7, 3)),
])
def test_to_scalar_accepts_exact_values(value, expected):
    assert to_scalar(value) == expected


@pytest.mark.parametrize("value", [0.5, "1.5", "1e3", True, "pi", "sqrt(2)"])
def test_to_scalar_rejects_inexact_values(value):
    with pytest.raises(InvalidParameter):
        to_scalar(value)


@PROPERTY_SETTINGS
@given(words)
def test_normal_form_is_confluent(word):
    letters = [m_power(1) if letter == "M" else d_power(1) for letter in word]
    assert normalize_word(word) == compose_all(letters)


@PROPERTY_SETTINGS
@given(expanded_ops, expanded_ops, expanded_ops)
def test_compose_is_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@PROPERTY_SETTINGS
@given(rationals, rationals)
def test_t_operators_commute(r, s):
    assert compose(t_operator(r), t_operator(s)) == compose(t_operator(s), t_operator(r))


@PROPERTY_SETTINGS
@given(euler_polys, st.integers(0, 4))
def test_theta_polynomials_shift_past_m(p, n):
    # P(θ)M^n = M^n P(θ + n)
    assert compose(euler_to_expanded(p), m_power(n)) == compose(m_power(n), euler_to_expanded(p.shift(n)))


@PROPERTY_SETTINGS
@given(euler_polys)
def test_euler_diagonal_round_trip(p):
    assert expanded_group_to_euler(euler_to_expanded(p)) == p


@PROPERTY_SETTINGS
@given(euler_polys, euler_polys)
def test_euler_products_expand_to_compositions(p, r):
    assert euler_to_expanded(p * r) == compose(euler_to_expanded(p), euler_to_expanded(r))


@PROPERTY_SETTINGS
@given(expanded_ops, rationals.filter(lambda r: r != 0))
def test_scalar_multiples_share_a_monic_representative(a, c):
    assert is_scalar_multiple(a * c, a)
