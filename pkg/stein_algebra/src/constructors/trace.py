"""
Record of the rules applied while building an operator, with the means to re-execute it.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

from stein_algebra.src.catalog.atoms import Atom, render_expression
from stein_algebra.src.catalog.operators import SteinOperator, as_expanded, scale_operator, stein_operator
from stein_algebra.src.constants import RULE_ATOM, RULE_SHIFT_GAMMA, RULE_SCALE, RULE_POWER, RULE_INVERSE, \
    RULE_PRODUCT, RULE_PROP314, RULE_NONCENTERED_NORMAL, RULE_SUM_IID, RULE_REDUCE
from stein_algebra.src.constructors.noncentered import prop314_operator, noncentered_normal_product, \
    shifted_gamma_operator
from stein_algebra.src.constructors.power_level import product_operator
from stein_algebra.src.constructors.powers import power_operator, inverse_operator
from stein_algebra.src.constructors.reduction import reduce_shared_factors
from stein_algebra.src.constructors.sums import sum_iid_operator
from stein_algebra.src.exceptions import SteinAlgebraError
from stein_algebra.src.operator_core.scalars import scalar_to_str

logger = logging.getLogger(__name__)

RULES: Dict[str, Callable[..., SteinOperator]] = {
    RULE_ATOM: stein_operator,
    RULE_SHIFT_GAMMA: shifted_gamma_operator,
    RULE_SCALE: scale_operator,
    RULE_POWER: power_operator,
    RULE_INVERSE: inverse_operator,
    RULE_PRODUCT: product_operator,
    RULE_PROP314: prop314_operator,
    RULE_NONCENTERED_NORMAL: noncentered_normal_product,
    RULE_SUM_IID: sum_iid_operator,
    RULE_REDUCE: lambda form: reduce_shared_factors(form)[0],
}


@dataclass(frozen=True)
class TraceStep:
    rule: str
    arguments: Tuple[Any, ...]
    output: SteinOperator

    def render(self) -> str:
        return f"{self.rule}({', '.join(_render_argument(a) for a in self.arguments)}) -> {self.output.render()}"

    def to_json(self) -> dict:
        return {"rule": self.rule, "arguments": [_render_argument(a) for a in self.arguments],
                "output": self.output.to_json()}


def _render_argument(argument) -> str:
    if isinstance(argument, Atom):
        return render_expression(argument)
    if hasattr(argument, "render"):
        return argument.render()
    if isinstance(argument, int):
        return str(argument)
    return scalar_to_str(argument)


@dataclass
class ConstructionTrace:
    steps: List[TraceStep] = field(default_factory=list)

    def record(self, rule: str, *arguments) -> SteinOperator:
        """
        Applies a rule and appends it to the trace.
        """

        output = RULES[rule](*arguments)
        self.steps.append(TraceStep(rule, tuple(arguments), output))
        logger.debug("%s", self.steps[-1].render())
        return output

    def render(self) -> str:
        return "\n".join(f"{index + 1}. {step.render()}" for index, step in enumerate(self.steps))

    def to_json(self) -> list:
        return [step.to_json() for step in self.steps]


def replay_trace(trace: ConstructionTrace) -> bool:
    """
    Re-executes every recorded rule on its recorded arguments and checks that it reproduces the recorded output.
    """

    for index, step in enumerate(trace.steps):
        try:
            output = RULES[step.rule](*step.arguments)
        except (KeyError, SteinAlgebraError) as e:
            logger.warning("step %d (%s) cannot be replayed: %s", index + 1, step.rule, e)
            return False
        if as_expanded(output) != as_expanded(step.output):
            logger.warning("step %d (%s) gives %s instead of %s", index + 1, step.rule, output, step.output)
            return False
    return True
