from stein_algebra.src.exceptions import RefusedTransform
from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm
from stein_algebra.src.operator_core.scalars import to_scalar


def power_operator(a: AssumptionOneForm, gamma) -> AssumptionOneForm:
    """
    Stein operator of X^γ. Since θ acting on f(x^γ) is γ times θ acting on f at x^γ, L and K are rescaled in
    their argument and M^q becomes M^(q/γ). Constants are not cancelled.

    :param a: the form of X
    :param gamma: positive rational exponent with q/γ a positive integer; X must be positive unless γ is an integer
    :return: the form of X^γ
    """

    gamma = to_scalar(gamma, "exponent")
    if gamma <= 0:
        raise RefusedTransform(f"power_operator needs a positive exponent, got {gamma}; invert first")
    new_q = a.q / gamma
    if not new_q.is_Integer:
        raise RefusedTransform(f"the M-power {a.q} is not a multiple of the exponent {gamma}")
    if gamma == 1:
        return a
    return AssumptionOneForm(a.L.compose_affine(gamma, 0), a.b, int(new_q), a.K.compose_affine(gamma, 0))


def inverse_operator(a: AssumptionOneForm) -> AssumptionOneForm:
    """
    Stein operator of 1/X for an a.s. nonzero X: b·K(-θ-q) - M^q·L(-θ-q).
    """
    return AssumptionOneForm(a.K.reflect(-a.q) * a.b, 1, a.q, a.L.reflect(-a.q))
