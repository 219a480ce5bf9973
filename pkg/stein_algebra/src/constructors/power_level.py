import logging
from math import lcm

from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm
from stein_algebra.src.operator_core.euler import EulerPoly
from stein_algebra.src.operator_core.scalars import to_positive_integer

logger = logging.getLogger(__name__)


def _shifted_product(p: EulerPoly, step: int, k: int) -> EulerPoly:
    # Π_{j<k} P(θ + j·step)
    result = EulerPoly.constant(1)
    for j in range(k):
        result = result * p.shift(j * step)
    return result


def raise_power_level(a: AssumptionOneForm, k) -> AssumptionOneForm:
    """
    Rewrites L - b·M^q·K as an operator of M-power k·q: Π_{j<k} L(θ + jq) - b^k·M^(kq)·Π_{j<k} K(θ + jq).
    It follows by composing the operator with itself through P(θ)·M^q = M^q·P(θ + q).

    :param a: the form
    :param k: positive integer level multiplier
    :return: the raised form
    """

    k = to_positive_integer(k, "level multiplier")
    if k == 1:
        return a
    return AssumptionOneForm(_shifted_product(a.L, a.q, k), a.b ** k, a.q * k, _shifted_product(a.K, a.q, k))


def product_operator(x: AssumptionOneForm, y: AssumptionOneForm) -> AssumptionOneForm:
    """
    Stein operator of X·Y for independent X and Y: both forms are raised to the common M-power lcm(q_X, q_Y),
    then L_X·L_Y - b_X·b_Y·M^m·K_X·K_Y.
    """

    m = lcm(x.q, y.q)
    x, y = raise_power_level(x, m // x.q), raise_power_level(y, m // y.q)
    logger.debug("product at M-power %d: (%s) x (%s)", m, x, y)
    return AssumptionOneForm(x.L * y.L, x.b * y.b, m, x.K * y.K)
