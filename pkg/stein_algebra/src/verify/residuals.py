import logging
from dataclasses import dataclass
from typing import List, Optional

import mpmath
from sympy import ff
from tqdm import tqdm

from stein_algebra.src.catalog.atoms import DistExpr
from stein_algebra.src.catalog.moments import MomentValue, moments
from stein_algebra.src.config import EngineSettings, DEFAULT_SETTINGS
from stein_algebra.src.exceptions import MomentUnavailable, UnsupportedExpression
from stein_algebra.src.operator_core.expanded import ExpandedOp

logger = logging.getLogger(__name__)

ZERO = "zero"
WITHIN_TOLERANCE = "within_tolerance"
NONZERO = "nonzero"
UNAVAILABLE = "unavailable"


def moment_residual_terms(a: ExpandedOp, oracle: DistExpr, k: int,
                          settings: EngineSettings = DEFAULT_SETTINGS) -> List[MomentValue]:
    """
    The terms c_ij·(k)_i·μ_(k+j-i) of the moment residual at order k.
    """

    terms = []
    for (i, j), c in a.terms:
        if i > k:
            continue
        index = k + j - i
        moment = moments(oracle, index, settings)
        if not moment.exists:
            raise MomentUnavailable(index, moment.reason)
        terms.append(moment * (c * ff(k, i)))
    return terms


def moment_residual(a: ExpandedOp, oracle: DistExpr, k: int,
                    settings: EngineSettings = DEFAULT_SETTINGS) -> MomentValue:
    """
    E[(a x^k)(X)] = Σ c_ij (k)_i μ_(k+j-i) for X distributed as the oracle; exactly 0 for Stein operators of X
    whenever the moments involved are rational.

    :param a: the operator
    :param oracle: the distribution expression supplying the moments
    :param k: the order of the test monomial x^k
    :param settings: working precision of approximate moments
    :return: the residual
    """

    total = MomentValue.of(0)
    for term in moment_residual_terms(a, oracle, k, settings):
        total = total + term
    return total


@dataclass(frozen=True)
class ResidualRow:
    k: int
    value: Optional[MomentValue]
    status: str
    note: str = ""

    def to_json(self) -> dict:
        return {"k": self.k, "status": self.status,
                "value": self.value.to_json() if self.value is not None else None, "note": self.note}


def residual_table(a: ExpandedOp, oracle: DistExpr, kmax: int,
                   settings: EngineSettings = DEFAULT_SETTINGS) -> List[ResidualRow]:
    """
    Moment residuals for k = 0..kmax. Exact residuals must vanish; approximate ones are accepted when they are
    below the relative tolerance of the largest term. Orders whose moments do not exist are reported and skipped.
    """

    rows = []
    for k in tqdm(range(kmax + 1), desc="moment residuals", disable=not settings.show_progress):
        try:
            terms = moment_residual_terms(a, oracle, k, settings)
        except (MomentUnavailable, UnsupportedExpression) as e:
            logger.info("residual at k = %d skipped: %s", k, e)
            rows.append(ResidualRow(k, None, UNAVAILABLE, str(e)))
            continue

        total = MomentValue.of(0)
        for term in terms:
            total = total + term
        if total.is_exact:
            rows.append(ResidualRow(k, total, ZERO if total.exact == 0 else NONZERO))
            continue

        with mpmath.workdps(settings.precision_digits):
            magnitude = max([abs(term.as_mpf()) for term in terms] + [mpmath.mpf(1)])
            within = abs(total.as_mpf()) <= settings.relative_tolerance * magnitude
        rows.append(ResidualRow(k, total, WITHIN_TOLERANCE if within else NONZERO))
    return rows


def residuals_pass(rows: List[ResidualRow]) -> bool:
    return all(row.status != NONZERO for row in rows)
