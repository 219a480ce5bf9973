from typing import Union

from stein_algebra.src.exceptions import ShapeError
from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm
from stein_algebra.src.operator_core.expanded import ExpandedOp
from stein_algebra.src.operator_core.scalars import to_positive_integer


def sum_iid_operator(a: Union[ExpandedOp, AssumptionOneForm], n) -> ExpandedOp:
    """
    Stein operator of X_1 + ... + X_n for iid X_i with operator Σ_k (a_k·M + b_k)·D^k: Σ_k (a_k·M + n·b_k)·D^k.

    :param a: operator of one summand; every coefficient must be affine in x
    :param n: number of summands
    :return: the operator of the sum
    """

    if isinstance(a, AssumptionOneForm):
        a = a.expand()
    n = to_positive_integer(n, "number of summands")
    if a.degree > 1:
        raise ShapeError(f"the coefficients of {a} are not affine in x (M-degree {a.degree})")
    return ExpandedOp.from_mapping({(i, j): c * n if j == 0 else c for (i, j), c in a.terms})
