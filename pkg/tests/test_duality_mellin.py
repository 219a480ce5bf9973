import logging

import pytest
from sympy import Rational

from stein_algebra.src.catalog.atoms import atom, product
from stein_algebra.src.catalog.mellin import mellin
from stein_algebra.src.catalog.operators import stein_operator
from stein_algebra.src.config import load_settings
from stein_algebra.src.constructors.builder import build_operator
from stein_algebra.src.duality_mellin.duality import DensityODE, dual_ode
from stein_algebra.src.duality_mellin.gamma_product import ComparisonResult, GammaProductExpr, gamma_expr_equal
from stein_algebra.src.duality_mellin.meijer import GParams, density_mellin, g_identities, g_mellin, \
    gparams_from_ode, meijer_ode, mellin_validity, normalization_constant
from stein_algebra.src.exceptions import RefusedTransform, ShapeError
from stein_algebra.src.operator_core.euler import EulerPoly


def _candidate(e, support):
    operator, _ = build_operator(e)
    return gparams_from_ode(dual_ode(operator), support)


def test_student_density_ode():
    ode = dual_ode(stein_operator(atom("StudentT", 5)))
    assert ode == DensityODE(L=EulerPoly.from_t_factors([0], leading=5), b=-1, q=2,
                             K=EulerPoly.from_t_factors([6]), sign=1)
    assert ode.coefficient == -1
    assert ode.render() == "5T_0 + x^2T_6 applied to p = 0"


def test_variance_gamma_density_ode():
    ode = dual_ode(stein_operator(atom("VGSym", 2, 1)))
    assert ode.L == EulerPoly.from_t_factors([0, -1])
    assert ode.K == EulerPoly.constant(1)
    assert ode.coefficient == 1


def test_gamma_density_ode_flips_the_sign():
    ode = dual_ode(stein_operator(atom("Gamma", 3, 2)))
    assert ode.L == EulerPoly.from_t_factors([-2])
    assert (ode.sign, ode.coefficient) == (-1, -2)


def test_density_duality_is_an_involution():
    form = stein_operator(atom("Beta", 2, 3))
    assert dual_ode(dual_ode(form).as_form()).as_form() == form


def test_student_candidate():
    g = _candidate(atom("StudentT", 5), "symmetric")
    assert (g.m, g.n, g.p, g.q) == (1, 1, 1, 1)
    assert g.upper == (-2,)
    assert g.lower == (0,)
    assert (g.prefactor, g.power) == (Rational(1, 5), 2)
    assert g.alternatives == ((0, 0), (1, 1))


def test_positive_support_falls_back_to_a_positive_prefactor(caplog):
    with caplog.at_level(logging.WARNING):
        g = _candidate(atom("StudentT", 5), "positive")
    assert (g.m, g.n) == (1, 1)
    assert "negative prefactor" in caplog.text


@pytest.mark.parametrize("n", [1, 2, 3])
def test_variance_gamma_product_candidates(n):
    rs = [Rational(2), Rational(3), Rational(5, 2)][:n]
    sigmas = [Rational(1), Rational(2), Rational(1, 2)][:n]
    e = product(*[atom("VGSym", r, sigma) for r, sigma in zip(rs, sigmas)])
    g = _candidate(e, "symmetric")

    sigma_squared = 1
    for sigma in sigmas:
        sigma_squared *= sigma ** 2
    assert (g.m, g.n, g.p, g.q) == (2 * n, 0, 0, 2 * n)
    assert g.prefactor == 1 / (4 ** n * sigma_squared)
    assert g.lower == tuple(sorted([(r - 1) / 2 for r in rs] + [0] * n))
    assert gamma_expr_equal(density_mellin(g, "symmetric"), mellin(e)) == ComparisonResult.STRUCTURALLY_EQUAL


def test_student_product_candidate():
    e = product(atom("StudentT", 3), atom("StudentT", 5))
    g = _candidate(e, "symmetric")
    assert (g.m, g.n, g.p, g.q) == (2, 2, 2, 2)
    assert g.prefactor == Rational(1, 15)
    assert g.upper == (-2, -1)
    assert g.lower == (0, 0)
    assert gamma_expr_equal(density_mellin(g, "symmetric"), mellin(e)) == ComparisonResult.STRUCTURALLY_EQUAL


def test_student_product_candidate_in_inverted_form():
    e = product(atom("StudentT", 3), atom("StudentT", 5))
    g = _candidate(e, "symmetric")
    inverted = g_identities(g_identities(g, "shift", Rational(1, 2)), "invert")
    # G^{2,2}_{2,2}(ν₁ν₂/x² | 1/2, 1/2; ν₁/2, ν₂/2), x^(1/2) outside
    assert (inverted.m, inverted.n, inverted.p, inverted.q) == (2, 2, 2, 2)
    assert inverted.upper == (Rational(1, 2), Rational(1, 2))
    assert inverted.lower == (Rational(3, 2), Rational(5, 2))
    assert (inverted.prefactor, inverted.power, inverted.outer_exponent) == (15, -2, Rational(1, 2))
    assert meijer_ode(inverted) == meijer_ode(g)
    assert gamma_expr_equal(density_mellin(inverted, "symmetric"), mellin(e)) == \
        ComparisonResult.STRUCTURALLY_EQUAL


@pytest.mark.parametrize("e, support", [
    (atom("StudentT", 5), "symmetric"),
    (atom("StudentT", Rational(7, 2)), "symmetric"),
    (atom("Gamma", 3, 2), "positive"),
    (atom("Gamma", Rational(1, 2), Rational(3, 4)), "positive"),
    (atom("Beta", 2, 3), "positive"),
    (atom("Exponential", 4), "positive"),
])
def test_candidate_mellin_matches_the_catalog(e, support):
    g = _candidate(e, support)
    assert mellin_validity(g).valid
    assert gamma_expr_equal(density_mellin(g, support), mellin(e)) == ComparisonResult.STRUCTURALLY_EQUAL


def test_gamma_and_beta_candidates():
    gamma = _candidate(atom("Gamma", 3, 2), "positive")
    assert (gamma.m, gamma.n, gamma.p, gamma.q, gamma.lower, gamma.prefactor) == (1, 0, 0, 1, (2,), 2)

    beta = _candidate(atom("Beta", 2, 3), "positive")
    assert (beta.m, beta.n, beta.p, beta.q) == (1, 0, 1, 1)
    assert (beta.upper, beta.lower, beta.prefactor) == ((4,), (1,), 1)
    assert "compact_support" in mellin_validity(beta).conditions


def test_student_normalization():
    g = _candidate(atom("StudentT", 5), "symmetric")
    # π^(-1/2) ν^(-1/2) / Γ(ν/2)
    expected = GammaProductExpr.pi_power(Rational(-1, 2)) * GammaProductExpr.power(5, 0, Rational(-1, 2)) \
        * GammaProductExpr.gamma(0, Rational(5, 2), -1)
    assert normalization_constant(g, "symmetric") == expected


def test_student_candidate_in_inverted_form():
    g = _candidate(atom("StudentT", 5), "symmetric")
    inverted = g_identities(g_identities(g, "shift", Rational(1, 2)), "invert")
    assert inverted.upper == (Rational(1, 2),)
    assert inverted.lower == (Rational(5, 2),)
    assert (inverted.prefactor, inverted.power, inverted.outer_exponent) == (5, -2, Rational(1, 2))
    assert meijer_ode(inverted) == meijer_ode(g)
    assert density_mellin(inverted, "symmetric") == density_mellin(g, "symmetric")


def test_reduce_cancels_the_beta_gamma_pair():
    g = _candidate(product(atom("Gamma", 5, 1), atom("Beta", 2, 3)), "positive")
    assert (g.m, g.n, g.p, g.q) == (2, 0, 1, 2)
    reduced = g_identities(g, "reduce")
    assert (reduced.m, reduced.n, reduced.p, reduced.q) == (1, 0, 0, 1)
    assert reduced.lower == (1,)
    assert reduced.upper == ()


def test_reduce_without_a_pair_warns(caplog):
    g = _candidate(atom("Gamma", 3, 2), "positive")
    with caplog.at_level(logging.WARNING):
        assert g_identities(g, "reduce") == g
    assert "left it unchanged" in caplog.text


def test_unknown_identity_is_rejected():
    g = _candidate(atom("Gamma", 3, 2), "positive")
    with pytest.raises(ValueError):
        g_identities(g, "transpose")
    with pytest.raises(ValueError):
        g_identities(g, "shift")


def test_trivial_g_function_transforms_to_gamma():
    g = GParams(m=1, n=0, p=0, q=1, upper=(), lower=(0,), prefactor=1, power=1)
    assert g_mellin(g) == GammaProductExpr.gamma(1, 0)
    assert mellin_validity(g).strip == (0, None)


def test_refused_transforms():
    negative = GParams(m=1, n=0, p=0, q=1, upper=(), lower=(0,), prefactor=-1, power=1)
    with pytest.raises(RefusedTransform):
        g_mellin(negative)

    # no numerator gamma factors: none of the convergence conditions hold
    divergent = GParams(m=0, n=0, p=0, q=1, upper=(), lower=(0,), prefactor=1, power=1)
    with pytest.raises(RefusedTransform):
        g_mellin(divergent)
    assert g_mellin(divergent, override=True) == GammaProductExpr.gamma(-1, 1, -1)


def test_non_integrable_candidate_has_no_normalization():
    # Γ(s - 2) only converges for s > 2
    g = GParams(m=1, n=0, p=0, q=1, upper=(), lower=(-2,), prefactor=1, power=1)
    with pytest.raises(RefusedTransform):
        normalization_constant(g)


def test_gparams_validate_their_shape():
    with pytest.raises(ShapeError):
        GParams(m=1, n=0, p=0, q=1, upper=(), lower=(0, 1), prefactor=1, power=1)
    with pytest.raises(ShapeError):
        GParams(m=2, n=0, p=0, q=1, upper=(), lower=(0,), prefactor=1, power=1)
    with pytest.raises(ShapeError):
        GParams(m=1, n=0, p=0, q=1, upper=(), lower=(0,), prefactor=1, power=0)


def test_duplication_formula_is_numerically_equal():
    gamma_2s = GammaProductExpr.gamma(2, 0)
    duplicated = GammaProductExpr.power(2, 2, -1) * GammaProductExpr.pi_power(Rational(-1, 2)) \
        * GammaProductExpr.gamma(1, 0) * GammaProductExpr.gamma(1, Rational(1, 2))
    assert gamma_expr_equal(gamma_2s, duplicated) == ComparisonResult.NUMERICALLY_EQUAL


def test_probes_outside_the_domain_are_skipped(caplog):
    # Γ(2s - 2) = 2^(2s-3) π^(-1/2) Γ(s - 1) Γ(s - 1/2), undefined at s = 1/2 and s = 1
    x = GammaProductExpr.gamma(2, -2)
    y = GammaProductExpr.power(2, 2, -3) * GammaProductExpr.pi_power(Rational(-1, 2)) \
        * GammaProductExpr.gamma(1, -1) * GammaProductExpr.gamma(1, Rational(-1, 2))
    with caplog.at_level(logging.WARNING):
        assert gamma_expr_equal(x, y) == ComparisonResult.NUMERICALLY_EQUAL
    assert "skipping Mellin probe" in caplog.text


def test_custom_probe_points_are_used():
    settings = load_settings(probe_points="3,5")
    assert gamma_expr_equal(GammaProductExpr.gamma(1, 0), GammaProductExpr.gamma(1, 1), settings) == \
        ComparisonResult.DIFFERENT


def test_different_gamma_products():
    assert gamma_expr_equal(GammaProductExpr.gamma(1, 0), GammaProductExpr.gamma(1, 1)) == ComparisonResult.DIFFERENT
    assert gamma_expr_equal(GammaProductExpr.constant(-1), GammaProductExpr.one()) == ComparisonResult.DIFFERENT


def test_constant_gamma_values_are_canonical():
    assert GammaProductExpr.gamma(0, Rational(5, 2)) == \
        GammaProductExpr.constant(Rational(3, 4)) * GammaProductExpr.pi_power(Rational(1, 2))
    assert GammaProductExpr.gamma(0, 4) == GammaProductExpr.constant(6)
    assert GammaProductExpr.gamma(0, Rational(1, 3)) * GammaProductExpr.gamma(0, Rational(1, 3), -1) == \
        GammaProductExpr.one()
    with pytest.raises(ShapeError):
        GammaProductExpr.gamma(0, -1)


def test_gamma_products_evaluate():
    value = (GammaProductExpr.gamma(1, 0) * GammaProductExpr.power(3, 1, 0)).evaluate(4)
    assert abs(value - 6 * 81) < 1e-20
    assert GammaProductExpr.gamma(1, -1).evaluate(1) is None
    assert GammaProductExpr.gamma(1, 0).substitute(2, 1) == GammaProductExpr.gamma(2, 1)
