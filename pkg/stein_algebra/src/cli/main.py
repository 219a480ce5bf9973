import json
import logging
import sys
from typing import Optional, Sequence

import click

from stein_algebra.src.catalog.atoms import render_expression
from stein_algebra.src.cli.commands import Command, DensityOdeCommand, GDensityCommand, MellinCommand, \
    MinimalSearchCommand, MomentsCommand, OperatorCommand, VerifyCommand, run
from stein_algebra.src.cli.expression_parser import parse_expression
from stein_algebra.src.config import load_settings
from stein_algebra.src.constants import DEFAULT_KMAX, EXIT_OK, EXIT_USAGE, SUPPORT_POSITIVE, SUPPORT_SYMMETRIC
from stein_algebra.src.exceptions import SteinAlgebraError, UnsupportedExpression

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

json_option = click.option("--json", "as_json", is_flag=True, help="print the JSON report instead of text")


def _split_list(value: Optional[str]):
    if not value:
        return None
    return [item.strip() for item in value.split(",") if item.strip()]


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="YAML file with engine settings")
@click.option("--log-level", default=None, help="logging level (default from settings: WARNING)")
@click.option("--probes", default=None, help="comma-separated Mellin probe points, e.g. 1/2,1,7/3,4")
@click.option("--progress/--no-progress", default=None, help="show progress bars")
@click.pass_context
def cli(ctx: click.Context, config_path, log_level, probes, progress):
    """Exact Stein-operator algebra for products, powers and quotients of random variables."""

    try:
        settings = load_settings(config_path, log_level=log_level, probe_points=_split_list(probes),
                                 show_progress=progress)
    except SteinAlgebraError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_USAGE)
    logging.basicConfig(level=settings.log_level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    ctx.obj = settings


def _execute(ctx: click.Context, build_command, as_json: bool):
    try:
        command: Command = build_command()
        report = run(command, ctx.obj)
    except SteinAlgebraError as e:
        message = f"error: {e}"
        if isinstance(e, UnsupportedExpression) and e.subtree is not None:
            message += f" [blocking subexpression: {render_expression(e.subtree)}]"
        click.echo(message, err=True)
        ctx.exit(EXIT_USAGE)

    if as_json:
        click.echo(json.dumps(report.payload, indent=4, ensure_ascii=False))
    else:
        click.echo(report.text)
    ctx.exit(report.exit_code)


@cli.command()
@click.argument("expression")
@click.option("--reduce", is_flag=True, help="cancel factors shared by both sides of the final operator")
@click.option("--explain", is_flag=True, help="append the construction trace")
@json_option
@click.pass_context
def operator(ctx, expression, reduce, explain, as_json):
    """Stein operator of EXPRESSION."""
    _execute(ctx, lambda: OperatorCommand(parse_expression(expression), reduce, explain), as_json)


@cli.command()
@click.argument("expression")
@click.option("--kmax", default=DEFAULT_KMAX, show_default=True, type=click.IntRange(min=0))
@click.option("--reduce", is_flag=True)
@json_option
@click.pass_context
def verify(ctx, expression, kmax, reduce, as_json):
    """Moment residuals of the Stein operator of EXPRESSION for x^0..x^KMAX."""
    _execute(ctx, lambda: VerifyCommand(parse_expression(expression), kmax, reduce), as_json)


@cli.command("density-ode")
@click.argument("expression")
@json_option
@click.pass_context
def density_ode(ctx, expression, as_json):
    """Differential equation satisfied by the density of EXPRESSION."""
    _execute(ctx, lambda: DensityOdeCommand(parse_expression(expression)), as_json)


@cli.command("g-density")
@click.argument("expression")
@click.option("--support", type=click.Choice([SUPPORT_POSITIVE, SUPPORT_SYMMETRIC]), default=None)
@click.option("--identity", "identities", multiple=True,
              help="G identity applied to the candidate, in order: shift:c, invert or reduce")
@json_option
@click.pass_context
def g_density(ctx, expression, support, identities, as_json):
    """Meijer G candidate for the density of EXPRESSION, checked against its Mellin transform."""
    _execute(ctx, lambda: GDensityCommand(parse_expression(expression), support, tuple(identities)), as_json)


@cli.command("mellin")
@click.argument("expression")
@json_option
@click.pass_context
def mellin_transform(ctx, expression, as_json):
    """Symbolic Mellin transform E|X|^(s-1) of EXPRESSION."""
    _execute(ctx, lambda: MellinCommand(parse_expression(expression)), as_json)


@cli.command("minimal-search")
@click.argument("expression")
@click.option("--order", required=True, type=click.IntRange(min=0), help="highest power of D")
@click.option("--degree", required=True, type=click.IntRange(min=0), help="highest power of M")
@click.option("--rows", type=click.IntRange(min=1), default=None, help="number of moment constraints")
@json_option
@click.pass_context
def minimal_search(ctx, expression, order, degree, rows, as_json):
    """All operators of a given shape satisfied by the moments of EXPRESSION."""
    _execute(ctx, lambda: MinimalSearchCommand(parse_expression(expression), order, degree, rows), as_json)


@cli.command()
@click.argument("expression")
@click.option("--kmax", default=DEFAULT_KMAX, show_default=True, type=click.IntRange(min=0))
@click.option("--seeds", default=None, help="comma-separated seed moments for the operator's recurrence")
@json_option
@click.pass_context
def moments(ctx, expression, kmax, seeds, as_json):
    """Moments of EXPRESSION, optionally re-derived from its operator's recurrence."""
    _execute(ctx, lambda: MomentsCommand(parse_expression(expression), kmax, tuple(_split_list(seeds) or ())),
             as_json)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs the tool and returns its exit code: 0 on success, 1 on usage or input errors, 2 when a verification
    fails.
    """

    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="stein", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


if __name__ == '__main__':

    sys.exit(main())
