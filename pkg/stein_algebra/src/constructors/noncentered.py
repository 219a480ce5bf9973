"""
Operators for products of two independent copies whose own operator is first order but not of Assumption-1
shape (normal laws with nonzero mean, shifted gamma laws, variance-gamma laws with skew).
"""
from sympy import Rational

from stein_algebra.src.operator_core.euler import TFactor
from stein_algebra.src.operator_core.expanded import ExpandedOp, compose, d_power, m_power
from stein_algebra.src.operator_core.scalars import to_scalar


def _t(factor: TFactor, shift: int = 0) -> ExpandedOp:
    return factor.shifted(shift).as_expanded()


def prop314_operator(alpha, beta, a: TFactor, b: TFactor) -> ExpandedOp:
    """
    For iid X, Y with Stein operator M - α·T_a - β·T_b·D, an operator for Z = XY:
        (M - α²T_a² - β²T_b²T_1D)(T_{a-1} - βT_bT_{a+1}D) - 2α²βT_a²T_bT_{a+1}D
    An identity factor stands for an infinite parameter, so that T_a, T_{a-1} and T_{a+1} all become I.

    :param alpha: α
    :param beta: β
    :param a: T_a (TFactor.identity() for a = ∞)
    :param b: T_b (TFactor.identity() for b = ∞)
    :return: the operator for Z
    """

    alpha, beta = to_scalar(alpha, "alpha"), to_scalar(beta, "beta")
    t_a, t_b, t_1, d = _t(a), _t(b), TFactor.finite(1).as_expanded(), d_power(1)
    t_a2, t_b2 = compose(t_a, t_a), compose(t_b, t_b)

    left = m_power(1) - t_a2 * alpha ** 2 - compose(compose(t_b2, t_1), d) * beta ** 2
    right = _t(a, -1) - compose(compose(t_b, _t(a, 1)), d) * beta
    correction = compose(compose(compose(t_a2, t_b), _t(a, 1)), d) * (2 * alpha ** 2 * beta)
    return compose(left, right) - correction


def noncentered_normal_product(mu_x, mu_y) -> ExpandedOp:
    """
    Operator for the product of independent N(μ_X, 1) and N(μ_Y, 1):
        MD⁴ + D³ - (2M + μ_Xμ_Y)D² - (1 + μ_X² + μ_Y²)D + M - μ_Xμ_Y
    """

    mu_x, mu_y = to_scalar(mu_x, "mu_x"), to_scalar(mu_y, "mu_y")
    return ExpandedOp.from_mapping({
        (4, 1): 1,
        (3, 0): 1,
        (2, 1): -2,
        (2, 0): -mu_x * mu_y,
        (1, 0): -(1 + mu_x ** 2 + mu_y ** 2),
        (0, 1): 1,
        (0, 0): -mu_x * mu_y,
    })


def shifted_gamma_operator(r, mu, lam=1) -> ExpandedOp:
    """
    Stein operator T_{r+λμ} - μD - λM of X + μ for X ~ Gamma(r, λ).
    """

    r, mu, lam = to_scalar(r, "r"), to_scalar(mu, "mu"), to_scalar(lam, "lambda")
    return TFactor.finite(r + lam * mu).as_expanded() - d_power(1) * mu - m_power(1) * lam


def vg_product_factorization(r, sigma):
    """
    For two iid symmetric variance-gamma laws, P = M - σ⁴T_r²T_1D, S = T_{r/2-1} - σ²T_rT_{r/2+1}D give
    prop314_operator(0, σ², r/2, r) = P∘S and σ⁴T_1²T_r² - M² = -P∘M.

    :return: the pair (P, S)
    """

    r, sigma = to_scalar(r, "r"), to_scalar(sigma, "sigma")
    beta = sigma ** 2
    t_r = TFactor.finite(r)
    p = m_power(1) - compose(compose(compose(_t(t_r), _t(t_r)), TFactor.finite(1).as_expanded()), d_power(1)) \
        * beta ** 2
    half = TFactor.finite(r / Rational(2))
    s = _t(half, -1) - compose(compose(_t(t_r), _t(half, 1)), d_power(1)) * beta
    return p, s
