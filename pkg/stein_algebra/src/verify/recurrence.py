"""
The linear moment recurrence of a polynomial Stein operator. Applying Σ c_ij M^j D^i to f(x) = x^k and taking
expectations gives
    Σ c_ij (k)_i E X^(k+j-i) = 0,
with (k)_i the falling factorial, which vanishes when i > k.
"""
import logging
from typing import List, Sequence

from sympy import Rational, ff

from stein_algebra.src.exceptions import InvalidParameter, RecurrenceBreakdown
from stein_algebra.src.operator_core.expanded import ExpandedOp
from stein_algebra.src.operator_core.scalars import to_scalar

logger = logging.getLogger(__name__)


def recurrence_row(a: ExpandedOp, k: int):
    """
    The recurrence at order k as a list of (moment index, coefficient) pairs, merged by index.
    """

    row = {}
    for (i, j), c in a.terms:
        if i > k:
            continue
        index = k + j - i
        row[index] = row.get(index, 0) + c * ff(k, i)
    return sorted((index, Rational(c)) for index, c in row.items() if c != 0)


def derive_moments(a: ExpandedOp, seeds: Sequence, upto: int) -> List[Rational]:
    """
    Derives moments from a Stein operator by forward substitution in its moment recurrence.

    :param a: a nonzero ExpandedOp
    :param seeds: the first moments μ_0, μ_1, ... (exact)
    :param upto: the highest moment index to derive
    :return: the derived moments μ_len(seeds), ..., μ_upto
    """

    if a.is_zero:
        raise InvalidParameter("the zero operator has no moment recurrence")
    moments = [to_scalar(seed, "seed moment") for seed in seeds]
    if not moments:
        raise InvalidParameter("at least the seed μ_0 is required")

    levels = a.level_set()
    top, bottom = max(levels), min(levels)
    needed = top - bottom
    if len(moments) < needed:
        logger.info("%d seed(s) given, the operator's recurrence span suggests %d", len(moments), needed)

    start = len(moments) - top
    if start < 0:
        raise InvalidParameter(f"the recurrence reaches μ_{top} at k = 0: give at least {top} seed(s)")

    for k in range(start):
        residual = sum((c * moments[index] for index, c in recurrence_row(a, k) if index < len(moments)),
                       Rational(0))
        if all(index < len(moments) for index, _ in recurrence_row(a, k)) and residual != 0:
            logger.warning("seed moments violate the recurrence at k = %d (residual %s)", k, residual)

    k = start
    while k + top <= upto:
        row = dict(recurrence_row(a, k))
        leading = row.pop(k + top, Rational(0))
        if leading == 0:
            raise RecurrenceBreakdown(k)
        moments.append(-sum((c * moments[index] for index, c in row.items()), Rational(0)) / leading)
        k += 1

    return moments[len(seeds):]
