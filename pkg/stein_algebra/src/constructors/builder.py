"""
Bottom-up construction of a Stein operator for a distribution expression.
"""
import logging
from typing import Tuple

from stein_algebra.src.catalog.atoms import Atom, DistExpr, IidSum, Power, Product, Scale, Shift, \
    render_expression
from stein_algebra.src.catalog.operators import SteinOperator, as_expanded, gamma_parameters, prop314_shape
from stein_algebra.src.constants import RULE_ATOM, RULE_SHIFT_GAMMA, RULE_SCALE, RULE_POWER, RULE_INVERSE, \
    RULE_PRODUCT, RULE_PROP314, RULE_NONCENTERED_NORMAL, RULE_SUM_IID, RULE_REDUCE, SHIFTABLE_ATOMS
from stein_algebra.src.constructors.trace import ConstructionTrace
from stein_algebra.src.exceptions import RefusedTransform, ShapeError, UnsupportedExpression
from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm
from stein_algebra.src.operator_core.expanded import ExpandedOp

logger = logging.getLogger(__name__)


def _require_form(operator: SteinOperator, e: DistExpr, what: str) -> AssumptionOneForm:
    if not isinstance(operator, AssumptionOneForm):
        raise UnsupportedExpression(f"{what} needs an Assumption-1 operator, but {render_expression(e)} has "
                                    f"{operator.render()}", e)
    return operator


def _build_power(e: Power, trace: ConstructionTrace) -> SteinOperator:
    form = _require_form(_build(e.base, trace), e.base, "a power")
    gamma = e.gamma
    if gamma < 0:
        form = trace.record(RULE_INVERSE, form)
        gamma = -gamma
    if gamma == 1:
        return form
    try:
        return trace.record(RULE_POWER, form, gamma)
    except RefusedTransform as e_refused:
        raise UnsupportedExpression(str(e_refused), e)


def _build_product(e: Product, trace: ConstructionTrace) -> SteinOperator:
    operators = [_build(factor, trace) for factor in e.factors]
    if all(isinstance(operator, AssumptionOneForm) for operator in operators):
        result = operators[0]
        for operator in operators[1:]:
            result = trace.record(RULE_PRODUCT, result, operator)
        return result

    if len(e.factors) == 2:
        x, y = e.factors
        if x == y:
            shape = prop314_shape(x)
            if shape is not None:
                return trace.record(RULE_PROP314, shape.alpha, shape.beta, shape.a, shape.b)
        if all(isinstance(f, Atom) and f.kind == "Normal" and f.param("sigma2") == 1 for f in (x, y)):
            return trace.record(RULE_NONCENTERED_NORMAL, x.param("mu"), y.param("mu"))

    blocking = next(factor for factor, operator in zip(e.factors, operators)
                    if not isinstance(operator, AssumptionOneForm))
    raise UnsupportedExpression(f"no product rule applies: {render_expression(blocking)} has no Assumption-1 "
                                f"operator and the product is not a supported pair", blocking)


def _build(e: DistExpr, trace: ConstructionTrace) -> SteinOperator:
    if isinstance(e, Atom):
        return trace.record(RULE_ATOM, e)

    if isinstance(e, Shift):
        if isinstance(e.base, Atom) and e.base.kind in SHIFTABLE_ATOMS:
            r, lam = gamma_parameters(e.base)
            return trace.record(RULE_SHIFT_GAMMA, r, e.mu, lam)
        raise UnsupportedExpression("only gamma laws can be shifted", e)

    if isinstance(e, Scale):
        return trace.record(RULE_SCALE, _build(e.base, trace), e.c)

    if isinstance(e, Power):
        return _build_power(e, trace)

    if isinstance(e, Product):
        return _build_product(e, trace)

    if isinstance(e, IidSum):
        base = _build(e.base, trace)
        try:
            return trace.record(RULE_SUM_IID, as_expanded(base), e.n)
        except ShapeError as e_shape:
            raise UnsupportedExpression(str(e_shape), e)

    raise TypeError(f"not a distribution expression: {e!r}")


def build_operator(e: DistExpr, reduce: bool = False) -> Tuple[SteinOperator, ConstructionTrace]:
    """
    Builds a Stein operator for a distribution expression.

    :param e: the expression
    :param reduce: cancel the factors shared by both sides of a final Assumption-1 form
    :return: the operator (an AssumptionOneForm when the construction keeps that shape) and its trace
    """

    trace = ConstructionTrace()
    operator = _build(e, trace)
    if reduce and isinstance(operator, AssumptionOneForm):
        operator = trace.record(RULE_REDUCE, operator)
    logger.info("built %s for %s in %d step(s)", operator, render_expression(e), len(trace.steps))
    return operator, trace


def build_for_expression(e: DistExpr, reduce: bool = False) -> Tuple[ExpandedOp, ConstructionTrace]:
    operator, trace = build_operator(e, reduce)
    return as_expanded(operator), trace
