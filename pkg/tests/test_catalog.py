import mpmath
import numpy as np
import pytest
from sympy import Rational

from stein_algebra.src.catalog.atoms import atom, iid_sum, is_positive, is_symmetric, power, product, \
    render_expression, scale, shift
from stein_algebra.src.catalog.mellin import mellin
from stein_algebra.src.catalog.moments import MomentValue, absolute_moment, moment_sequence, moments
from stein_algebra.src.catalog.operators import pearson_operator, prop314_shape, scale_operator, \
    score_assumption_one, score_operator, stein_operator
from stein_algebra.src.cli.expression_parser import parse_expression
from stein_algebra.src.duality_mellin.gamma_product import GammaProductExpr
from stein_algebra.src.exceptions import InvalidParameter, UnsupportedExpression
from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm, detect_assumption1
from stein_algebra.src.operator_core.euler import EulerPoly, TFactor
from stein_algebra.src.operator_core.expanded import compose, d_power, is_scalar_multiple, m_power, t_operator


@pytest.mark.parametrize("expression, k, expected", [
    ("Gamma(2,1)", 3, 24),
    ("Beta(2,3)", 1, Rational(2, 5)),
    ("StudentT(5)", 4, 25),
    ("StudentT(5)", 3, 0),
    ("Normal(1,1)", 4, 10),
    ("InverseGamma(3,2)", 1, 1),
    ("FDist(4,9)", 1, Rational(9, 7)),
    ("VG(2,1,1)", 1, 2),
    ("VG(2,1,1)", 2, 10),
    ("PRR(3/2)", 2, 1),
    ("sum(Gamma(2,1),3)", 2, 42),
    ("shift(Gamma(2,1),1)", 1, 3),
    ("2*Beta(1,1)", 2, Rational(4, 3)),
    ("Normal(1,1)*Normal(2,1)", 3, 56),
    ("Gamma(3,1)^-1", 1, Rational(1, 2)),
])
def test_exact_moments(expression, k, expected):
    value = moments(parse_expression(expression), k)
    assert value.is_exact
    assert value.exact == expected


@pytest.mark.parametrize("expression, k", [
    ("StudentT(5)", 5),
    ("InverseGamma(3,2)", 3),
    ("Normal(0,1)^-1", 1),
    ("Gamma(2,1)^-1", 2),
])
def test_moments_that_do_not_exist(expression, k):
    value = moments(parse_expression(expression), k)
    assert not value.exists
    assert value.to_json()["kind"] == "DoesNotExist"


def test_half_power_of_chi_square_is_approximate():
    value = moments(parse_expression("ChiSq(3)^(1/2)"), 1)
    assert value.exists and not value.is_exact
    assert mpmath.almosteq(value.approx, 2 * mpmath.sqrt(2) / mpmath.sqrt(mpmath.pi), rel_eps=1e-12)


def test_absolute_moment_of_a_symmetric_law():
    # E|Z| = sqrt(2/π)
    value = absolute_moment(atom("Normal", 0, 1), 1)
    assert mpmath.almosteq(value.approx, mpmath.sqrt(2 / mpmath.pi), rel_eps=1e-12)


def test_non_integer_moments_need_positive_expressions():
    with pytest.raises(UnsupportedExpression):
        moments(atom("Normal", 0, 1), "1/2")


def test_moment_sequence_starts_with_one():
    sequence = moment_sequence(atom("Exponential", 2), 3)
    assert [value.exact for value in sequence] == [1, Rational(1, 2), Rational(1, 2), Rational(3, 4)]


def test_moment_value_arithmetic():
    missing = MomentValue.does_not_exist("diverges")
    assert (MomentValue.of(2) * 3).exact == 6
    assert not (missing * MomentValue.of(2)).exists
    assert (MomentValue.of(1) + MomentValue.of(Rational(1, 2))).render() == "3/2"


def test_variance_gamma_mean_by_simulation():
    r, theta, sigma = 2, 1, 1
    rng = np.random.default_rng(7)
    v = rng.gamma(shape=r / 2, scale=2, size=400_000)
    z = theta * v + sigma * np.sqrt(v) * rng.standard_normal(v.size)

    assert z.mean() == pytest.approx(float(moments(atom("VG", r, theta, sigma), 1).exact), rel=0.02)
    assert (z ** 2).mean() == pytest.approx(float(moments(atom("VG", r, theta, sigma), 2).exact), rel=0.03)


def test_mellin_of_exponential_is_gamma():
    assert mellin(atom("Exponential", 1)) == GammaProductExpr.gamma(1, 0)


def test_mellin_of_product_is_product_of_mellins():
    x, y = atom("Gamma", 2, 3), atom("Beta", Rational(1, 2), 2)
    assert mellin(product(x, y)) == mellin(x) * mellin(y)


def test_mellin_of_power_substitutes_the_argument():
    # E X^(2(s-1)) for X ~ Exp(1) is Γ(2s - 1)
    assert mellin(power(atom("Exponential", 1), 2)) == GammaProductExpr.gamma(2, -1)


def test_mellin_rejects_shifts():
    with pytest.raises(UnsupportedExpression):
        mellin(shift(atom("Gamma", 2, 1), 1))


def test_catalog_operators():
    assert stein_operator(atom("Normal", 0, 1)) == AssumptionOneForm(EulerPoly.from_t_factors([1]), 1, 2,
                                                                     EulerPoly.constant(1))
    assert stein_operator(atom("Gamma", 3, 2)).render() == "T_3 - 2M"
    assert stein_operator(atom("Beta", 2, 3)).render() == "T_2 - MT_5"
    assert stein_operator(atom("Exponential", 1)) == stein_operator(atom("Gamma", 1, 1))
    assert stein_operator(atom("ChiSq", 4)) == stein_operator(atom("Gamma", 2, Rational(1, 2)))
    assert stein_operator(atom("VG", 2, 0, 1)) == stein_operator(atom("VGSym", 2, 1))


def test_noncentered_normal_operator():
    operator = stein_operator(atom("Normal", 1, 2))
    assert operator.render() == "2MD - M^2 + M + 2"


def test_scaling_an_operator():
    assert scale_operator(stein_operator(atom("Gamma", 2, 1)), 2) == stein_operator(atom("Gamma", 2, "1/2"))
    scaled = scale_operator(stein_operator(atom("Normal", 1, 1)), 2)
    assert is_scalar_multiple(scaled, stein_operator(atom("Normal", 2, 4)))
    with pytest.raises(InvalidParameter):
        scale_operator(stein_operator(atom("Gamma", 2, 1)), 0)


def test_score_operators():
    assert score_operator((0, -1), (1,)) == d_power(1) - m_power(1)
    assert score_assumption_one((0, -1), (1,)) == stein_operator(atom("Normal", 0, 1))
    assert score_assumption_one((1, 0, -1), (1,)) is None


def test_beta_score_operator():
    # Beta(2, 3): score (1 - 3x)/(x - x²)
    assert score_operator((1, -3), (0, 1, -1)) == t_operator(2) - compose(m_power(1), t_operator(5))
    assert score_assumption_one((1, -3), (0, 1, -1)) == stein_operator(atom("Beta", 2, 3))


def test_pearson_operators():
    assert detect_assumption1(pearson_operator(1, 0, 1, 0, 0)) == stein_operator(atom("Normal", 0, 1))
    # Gamma(r, λ): score -(λx - (r - 1))/x
    assert detect_assumption1(pearson_operator(2, 2, 0, 1, 0)) == stein_operator(atom("Gamma", 3, 2))
    # Beta(a, b): score -((a + b - 2)x - (a - 1))/(x - x²)
    assert detect_assumption1(pearson_operator(3, 1, 0, 1, -1)) == stein_operator(atom("Beta", 2, 3))
    # StudentT(ν): score -(ν + 1)x/(ν + x²)
    student = pearson_operator(6, 0, 5, 0, 1)
    assert detect_assumption1(student) == stein_operator(atom("StudentT", 5))
    assert detect_assumption1(student).render() == "5T_1 + M^2T_{-3}"
    normalized = pearson_operator(1, 0, Rational(5, 6), 0, Rational(1, 6))
    assert is_scalar_multiple(normalized, student)
    assert normalized != student
    with pytest.raises(InvalidParameter):
        pearson_operator(1, 0, 0, 0, 0)


def test_first_order_shapes():
    normal = prop314_shape(atom("Normal", 1, 2))
    assert (normal.alpha, normal.beta, normal.a.is_identity, normal.b.is_identity) == (1, 2, True, True)

    shifted = prop314_shape(shift(atom("Gamma", 2, 1), 1))
    assert (shifted.alpha, shifted.beta, shifted.a, shifted.b) == (1, -1, TFactor.finite(3), TFactor.identity())

    vg = prop314_shape(atom("VG", 4, 1, 2))
    assert (vg.alpha, vg.beta, vg.a, vg.b) == (2, 4, TFactor.finite(2), TFactor.finite(4))

    assert prop314_shape(atom("Beta", 1, 1)) is None


def test_atoms_validate_their_parameters():
    with pytest.raises(InvalidParameter):
        atom("Gamma", 0, 1)
    with pytest.raises(InvalidParameter):
        atom("PRR", "1/2")
    with pytest.raises(InvalidParameter):
        atom("Normal", 0)
    with pytest.raises(InvalidParameter):
        atom("Weibull", 1, 1)
    assert atom("Normal", -3, 1).param("mu") == -3


def test_expression_normal_forms():
    g, b = atom("Gamma", 2, 1), atom("Beta", 1, 1)
    assert product(scale(g, 2), scale(b, 3)) == scale(product(g, b), 6)
    assert power(power(g, 2), 3) == power(g, 6)
    assert shift(shift(g, 1), -1) == g
    assert iid_sum(g, 1) == g
    with pytest.raises(InvalidParameter):
        power(atom("Normal", 0, 1), "1/2")


def test_support_classification():
    assert is_positive(product(atom("Gamma", 2, 1), atom("Beta", 1, 1)))
    assert is_positive(power(atom("Normal", 0, 1), 2))
    assert is_symmetric(product(atom("StudentT", 3), atom("Gamma", 2, 1)))
    assert not is_symmetric(atom("Normal", 1, 1))
    assert not is_positive(scale(atom("Gamma", 2, 1), -1))


def test_rendering_expressions():
    e = scale(product(atom("Gamma", "1/2", 1), power(atom("Beta", 1, 3), -1)), "-2/3")
    assert render_expression(e) == "(-2/3)*Gamma(1/2,1)*Beta(1,3)^-1"
