import logging
from typing import Tuple

from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm
from stein_algebra.src.operator_core.euler import EulerPoly

logger = logging.getLogger(__name__)


def reduce_shared_factors(a: AssumptionOneForm) -> Tuple[AssumptionOneForm, EulerPoly]:
    """
    Cancels the common factor G = gcd(L, K): L - b·M^q·K = (L/G - b·M^q·K/G)∘G(θ), so the reduced form is a
    Stein operator on the test functions G(θ)f. Shared T-factors are exactly the linear factors of G.

    :param a: the form
    :return: the reduced form and the monic polynomial G that was cancelled (1 when nothing is shared)
    """

    shared = a.L.gcd(a.K).monic()
    if shared.degree <= 0:
        return a, EulerPoly.constant(1)
    logger.debug("cancelling the shared factor %s", shared)
    return AssumptionOneForm(a.L.exquo(shared), a.b, a.q, a.K.exquo(shared)), shared
