import logging
from dataclasses import dataclass
from typing import Tuple

from sympy import Rational

from stein_algebra.src.exceptions import NotAssumptionOne, DegenerateOperator
from stein_algebra.src.operator_core.euler import EulerPoly, FactoredEuler, euler_to_expanded, \
    expanded_group_to_euler, render_euler
from stein_algebra.src.operator_core.expanded import ExpandedOp, compose, m_power, render_coefficient
from stein_algebra.src.operator_core.scalars import to_scalar, scalar_to_str

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssumptionOneForm:
    """
    The operator L(θ) - b·M^q·K(θ) with L, K polynomials in θ = MD.

    K is kept monic: any leading constant of K is moved into b when the form is created.
    """

    L: EulerPoly
    b: Rational
    q: int
    K: EulerPoly

    def __post_init__(self):
        b = to_scalar(self.b, "b")
        if self.L.is_zero or self.K.is_zero or b == 0:
            raise DegenerateOperator("L, K and b must all be nonzero")
        if int(self.q) < 1:
            raise DegenerateOperator(f"the power of M must be at least 1, got q = {self.q}")
        lead = self.K.leading_coefficient
        if lead != 1:
            b = b * lead
            object.__setattr__(self, "K", self.K.monic())
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "q", int(self.q))

    def expand(self) -> ExpandedOp:
        return euler_to_expanded(self.L) - compose(m_power(self.q), euler_to_expanded(self.K)) * self.b

    def factored_L(self) -> FactoredEuler:
        return self.L.factored()

    def factored_K(self) -> FactoredEuler:
        return self.K.factored()

    @property
    def is_factored(self) -> bool:
        """
        True when both sides split into T-factors over Q.
        """
        return self.factored_L().is_complete and self.factored_K().is_complete

    def render(self) -> str:
        return render_form(self.L, self.b, self.q, self.K)

    def to_json(self) -> dict:
        return {"L": self.L.to_json(), "b": scalar_to_str(self.b), "q": self.q, "K": self.K.to_json(),
                "rendered": self.render()}

    def __str__(self) -> str:
        return self.render()


def render_form(L: EulerPoly, b: Rational, q: int, K: EulerPoly) -> str:
    """
    Renders L(θ) - b·M^q·K(θ) with T-factors where possible, e.g. "T_r - 2M" or "5T_1 + M^2T_{-3}".
    """

    m_text = "M" if q == 1 else f"M^{q}"
    k_text = render_euler(K, unit="")
    return render_euler(L) + render_coefficient(-b, m_text + k_text, False)


def split_assumption1(a: ExpandedOp) -> Tuple[AssumptionOneForm, int]:
    """
    Writes a nonzero operator as (L(θ) - b·M^q·K(θ))·M^shift.

    :param a: the operator
    :return: the form and the power shift of M: a = form∘M^shift when shift ≥ 0, a∘M^(-shift) = form otherwise
    """

    if a.is_zero:
        raise DegenerateOperator("the zero operator has no Assumption-1 form")

    levels = sorted(a.level_set())
    if len(levels) > 2:
        raise NotAssumptionOne(f"operator spans {len(levels)} levels j - i: {levels}")
    if len(levels) == 1:
        raise DegenerateOperator(f"operator spans the single level j - i = {levels[0]}")

    low, high = levels
    operator = a
    if low < 0:
        operator = compose(a, m_power(-low))
        high, low = high - low, 0

    groups = {low: [], high: []}
    for (i, j), c in operator.terms:
        # M^(i+d) D^i = M^d M^i D^i
        groups[j - i].append((i, c))

    # M^d G(θ) = G(θ - d) M^d, so the low group is L(θ) M^low and the high group is M^q K'(θ) M^low
    L = expanded_group_to_euler(groups[low]).shift(-low)
    minus_bK = expanded_group_to_euler(groups[high]).shift(-low)
    form = AssumptionOneForm(L, -minus_bK.leading_coefficient, high - low, minus_bK.monic())
    return form, levels[0]


def detect_assumption1(a: ExpandedOp) -> AssumptionOneForm:
    """
    Detects the Assumption-1 shape L(θ) - b·M^q·K(θ) of an operator, grouping its terms by j - i.

    :param a: a nonzero ExpandedOp
    :return: the AssumptionOneForm (see split_assumption1 for the M power that was divided out)
    """

    form, shift = split_assumption1(a)
    if shift:
        logger.debug("operator equals its Assumption-1 form up to a right factor M^%d", shift)
    return form
