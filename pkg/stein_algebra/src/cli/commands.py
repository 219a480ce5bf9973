"""
Commands of the stein tool and their dispatch. Each command evaluates to a Report holding the exit code, the
human-readable text and the JSON payload, so the click layer only has to choose what to print.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from stein_algebra.src.catalog.atoms import DistExpr, expression_to_json, is_positive, is_symmetric, \
    render_expression
from stein_algebra.src.catalog.mellin import mellin
from stein_algebra.src.catalog.moments import moment_sequence
from stein_algebra.src.catalog.operators import as_expanded
from stein_algebra.src.config import EngineSettings, DEFAULT_SETTINGS
from stein_algebra.src.constants import EXIT_OK, EXIT_VERIFICATION_FAILED, SUPPORT_POSITIVE, SUPPORT_SYMMETRIC
from stein_algebra.src.constructors.builder import build_operator
from stein_algebra.src.duality_mellin.duality import dual_ode
from stein_algebra.src.duality_mellin.gamma_product import ComparisonResult, gamma_expr_equal
from stein_algebra.src.duality_mellin.meijer import IDENTITY_SHIFT, density_mellin, g_identities, \
    gparams_from_ode, mellin_validity, normalization_constant
from stein_algebra.src.exceptions import InvalidParameter, RefusedTransform, UnsupportedExpression
from stein_algebra.src.operator_core.assumption_one import AssumptionOneForm
from stein_algebra.src.operator_core.scalars import to_scalar, scalar_to_str
from stein_algebra.src.verify.null_space import null_space_search
from stein_algebra.src.verify.recurrence import derive_moments
from stein_algebra.src.verify.residuals import residual_table, residuals_pass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OperatorCommand:
    expr: DistExpr
    reduce: bool = False
    explain: bool = False


@dataclass(frozen=True)
class VerifyCommand:
    expr: DistExpr
    kmax: int
    reduce: bool = False


@dataclass(frozen=True)
class DensityOdeCommand:
    expr: DistExpr


@dataclass(frozen=True)
class GDensityCommand:
    expr: DistExpr
    support: Optional[str] = None
    identities: Tuple[str, ...] = ()


@dataclass(frozen=True)
class MellinCommand:
    expr: DistExpr


@dataclass(frozen=True)
class MinimalSearchCommand:
    expr: DistExpr
    order: int
    degree: int
    rows: Optional[int] = None


@dataclass(frozen=True)
class MomentsCommand:
    expr: DistExpr
    kmax: int
    seeds: Tuple = ()


Command = Union[OperatorCommand, VerifyCommand, DensityOdeCommand, GDensityCommand, MellinCommand,
                MinimalSearchCommand, MomentsCommand]


@dataclass
class Report:
    exit_code: int
    text: str
    payload: dict = field(default_factory=dict)


def parse_identity(text: str) -> Tuple[str, Optional[str]]:
    """
    "shift:1/2" -> ("shift", "1/2"); "invert" -> ("invert", None).
    """

    name, _, argument = text.partition(":")
    name = name.strip()
    if name == IDENTITY_SHIFT and not argument:
        raise InvalidParameter("shift needs an amount, e.g. shift:1/2")
    return name, (argument.strip() or None)


def _require_form(operator, e: DistExpr) -> AssumptionOneForm:
    if not isinstance(operator, AssumptionOneForm):
        raise UnsupportedExpression(f"the operator of {render_expression(e)} is not of Assumption-1 shape, so no "
                                    f"density ODE is derived", e)
    return operator


def _support(e: DistExpr, requested: Optional[str]) -> str:
    if requested:
        return requested
    if is_symmetric(e):
        return SUPPORT_SYMMETRIC
    if is_positive(e):
        return SUPPORT_POSITIVE
    raise UnsupportedExpression(f"{render_expression(e)} is neither positive nor symmetric; pass --support", e)


def _run_operator(cmd: OperatorCommand, settings: EngineSettings) -> Report:
    operator, trace = build_operator(cmd.expr, cmd.reduce)
    expanded = as_expanded(operator)
    lines = [f"expression: {render_expression(cmd.expr)}",
             f"operator: {operator.render()}",
             f"expanded: {expanded.render()}"]
    payload = {"expression": expression_to_json(cmd.expr),
               "operator": expanded.to_json() | {"rendered": expanded.render()},
               "assumption_one": operator.to_json() if isinstance(operator, AssumptionOneForm) else None}
    if cmd.explain:
        lines += ["construction:", trace.render()]
        payload["trace"] = trace.to_json()
    return Report(EXIT_OK, "\n".join(lines), payload)


def _run_verify(cmd: VerifyCommand, settings: EngineSettings) -> Report:
    operator, _ = build_operator(cmd.expr, cmd.reduce)
    expanded = as_expanded(operator)
    rows = residual_table(expanded, cmd.expr, cmd.kmax, settings)
    passed = residuals_pass(rows)

    lines = [f"operator: {expanded.render()}"]
    for row in rows:
        value = row.value.render() if row.value is not None else "-"
        lines.append(f"k={row.k}: {value} ({row.status}{', ' + row.note if row.note else ''})")
    lines.append("all residuals vanish" if passed else "nonzero residual found")
    payload = {"expression": expression_to_json(cmd.expr), "operator": expanded.to_json(),
               "residuals": [row.to_json() for row in rows], "passed": passed}
    return Report(EXIT_OK if passed else EXIT_VERIFICATION_FAILED, "\n".join(lines), payload)


def _run_density_ode(cmd: DensityOdeCommand, settings: EngineSettings) -> Report:
    operator, _ = build_operator(cmd.expr)
    ode = dual_ode(_require_form(operator, cmd.expr))
    text = f"operator: {operator.render()}\ndensity ODE: {ode.render()}"
    return Report(EXIT_OK, text, {"expression": expression_to_json(cmd.expr), "operator": operator.to_json(),
                                  "density_ode": ode.to_json()})


def _run_g_density(cmd: GDensityCommand, settings: EngineSettings) -> Report:
    support = _support(cmd.expr, cmd.support)
    operator, _ = build_operator(cmd.expr)
    ode = dual_ode(_require_form(operator, cmd.expr))
    g = gparams_from_ode(ode, support, settings)
    for identity in cmd.identities:
        name, argument = parse_identity(identity)
        g = g_identities(g, name, argument)

    lines = [f"density ODE: {ode.render()}", f"candidate: {g.render()}"]
    payload = {"expression": expression_to_json(cmd.expr), "density_ode": ode.to_json(), "gparams": g.to_json(),
               "support": support, "validity": mellin_validity(g).to_json()}

    try:
        constant = normalization_constant(g, support)
        candidate = density_mellin(g, support)
    except RefusedTransform as e:
        logger.warning("candidate left unverified: %s", e)
        lines.append(f"unverified candidate: {e}")
        payload["verdict"] = None
        return Report(EXIT_OK, "\n".join(lines), payload)

    lines += [f"normalization constant: {constant.render()}", f"candidate Mellin transform: {candidate.render()}"]
    payload |= {"normalization": constant.to_json(), "candidate_mellin": candidate.to_json()}

    try:
        expected = mellin(cmd.expr)
    except UnsupportedExpression as e:
        lines.append(f"no catalog Mellin transform to compare with: {e}")
        payload["verdict"] = None
        return Report(EXIT_OK, "\n".join(lines), payload)

    verdict = gamma_expr_equal(candidate, expected, settings)
    lines += [f"catalog Mellin transform: {expected.render()}", f"verdict: {verdict.value}"]
    payload |= {"catalog_mellin": expected.to_json(), "verdict": verdict.value}
    exit_code = EXIT_VERIFICATION_FAILED if verdict == ComparisonResult.DIFFERENT else EXIT_OK
    return Report(exit_code, "\n".join(lines), payload)


def _run_mellin(cmd: MellinCommand, settings: EngineSettings) -> Report:
    transform = mellin(cmd.expr)
    lines = [f"E|X|^(s-1) = {transform.render()}"]
    values = []
    for s in settings.probe_points:
        value = transform.evaluate(s, settings)
        values.append({"s": scalar_to_str(s), "value": None if value is None else str(value)})
        lines.append(f"  s = {scalar_to_str(s)}: {'outside the domain' if value is None else value}")
    return Report(EXIT_OK, "\n".join(lines), {"expression": expression_to_json(cmd.expr),
                                             "mellin": transform.to_json(), "probes": values})


def _run_minimal_search(cmd: MinimalSearchCommand, settings: EngineSettings) -> Report:
    report = null_space_search(cmd.expr, cmd.order, cmd.degree, cmd.rows, settings)
    return Report(EXIT_OK, report.render(), {"expression": expression_to_json(cmd.expr)} | report.to_json())


def _run_moments(cmd: MomentsCommand, settings: EngineSettings) -> Report:
    values = moment_sequence(cmd.expr, cmd.kmax, settings)
    lines = [f"mu_{k} = {value.render()}" for k, value in enumerate(values)]
    payload = {"expression": expression_to_json(cmd.expr), "moments": [value.to_json() for value in values]}
    if not cmd.seeds:
        return Report(EXIT_OK, "\n".join(lines), payload)

    seeds = [to_scalar(seed, "seed") for seed in cmd.seeds]
    operator, _ = build_operator(cmd.expr)
    derived = derive_moments(as_expanded(operator), seeds, cmd.kmax)
    mismatches: List[int] = []
    for k, value in enumerate(derived, start=len(seeds)):
        catalog = values[k]
        agrees = catalog.is_exact and catalog.exact == value
        if catalog.exists and catalog.is_exact and not agrees:
            mismatches.append(k)
        note = "" if agrees else f" (catalog: {catalog.render()})"
        lines.append(f"derived mu_{k} = {scalar_to_str(value)}{note}")
    payload |= {"seeds": [scalar_to_str(seed) for seed in seeds],
                "derived": [scalar_to_str(value) for value in derived], "mismatches": mismatches}
    return Report(EXIT_VERIFICATION_FAILED if mismatches else EXIT_OK, "\n".join(lines), payload)


_HANDLERS = {
    OperatorCommand: _run_operator,
    VerifyCommand: _run_verify,
    DensityOdeCommand: _run_density_ode,
    GDensityCommand: _run_g_density,
    MellinCommand: _run_mellin,
    MinimalSearchCommand: _run_minimal_search,
    MomentsCommand: _run_moments,
}


def run(cmd: Command, settings: EngineSettings = DEFAULT_SETTINGS) -> Report:
    """
    Executes a command.

    :param cmd: the command
    :param settings: engine settings
    :return: the report; its exit code is 0 on success and 2 when a verification fails (errors propagate)
    """

    logger.info("running %s on %s", type(cmd).__name__, render_expression(cmd.expr))
    return _HANDLERS[type(cmd)](cmd, settings)
