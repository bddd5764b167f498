"""Command line front end.

Exit codes: 0 success or valid, 1 invalid solution, 2 infeasible,
3 time budget spent without any solution, 4 usage or input error.
"""
from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from . import runner
from .costing import CostError
from .facts import FactsError, read
from .model import ModelError
from .oracle import OracleSizeError
from .scenarios import FAMILIES, ScenarioError
from .validator import PreconditionError

log = logging.getLogger("reconf")

TIME_LIMIT_ENV = "RECONF_TIME_LIMIT"


def _default_time_limit() -> float:
    raw = os.environ.get(TIME_LIMIT_ENV)
    if raw is None:
        return 60.0
    try:
        value = float(raw)
    except ValueError:
        raise click.UsageError(f"{TIME_LIMIT_ENV} must be a number of seconds, got {raw!r}") from None
    if value <= 0:
        raise click.UsageError(f"{TIME_LIMIT_ENV} must be positive")
    return value


def _facts(path: str | None):
    return read(path) if path else None


def _emit(outcome: runner.Outcome, fmt: str) -> int:
    if fmt == "json":
        click.echo(json.dumps(outcome.to_json(), indent=2))
    else:
        click.echo(outcome.to_facts(), nl=False)
    return outcome.exit_code


def _progress(event: dict) -> None:
    click.echo(
        f"incumbent cost={event['cost']} nodes={event['nodes']} t={event['elapsed']:.3f}s",
        err=True,
    )


existing = click.Path(exists=True, dir_okay=False)
fmt_option = click.option("--format", "fmt", type=click.Choice(["facts", "json"]), default="facts", show_default=True)


def _search_options(f):
    f = click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True, help="Parallel differently seeded searches.")(f)
    f = click.option("--all-optimal", type=click.IntRange(min=0), default=0, metavar="N", help="List up to N optimal solutions.")(f)
    f = click.option("--time-limit", type=click.FloatRange(min=0, min_open=True), default=None, help=f"Seconds; defaults to ${TIME_LIMIT_ENV} or 60.")(f)
    f = fmt_option(f)
    f = click.option("-c", "--costs", type=existing, required=True, help="Cost weights file.")(f)
    f = click.option("-i", "--instance", type=existing, required=True, help="Instance file.")(f)
    return f


@click.group()
@click.option("-v", "--verbose", count=True, help="More logging on stderr.")
def cli(verbose: int) -> None:
    """Find, check and price (re)configurations of the house problem."""
    level = logging.WARNING - 10 * verbose
    logging.basicConfig(level=max(level, logging.DEBUG), format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _solve(instance, costs, legacy, fmt, time_limit, all_optimal, workers) -> int:
    outcome = runner.solve(
        _facts(instance),
        _facts(costs),
        _facts(legacy),
        time_limit=time_limit or _default_time_limit(),
        all_optimal=all_optimal,
        workers=workers,
        on_incumbent=_progress,
    )
    click.echo(f"{outcome.status} after {outcome.nodes} nodes, {outcome.elapsed:.3f}s", err=True)
    return _emit(outcome, fmt)


@cli.command()
@_search_options
def solve(instance, costs, fmt, time_limit, all_optimal, workers):
    """Find a minimum-cost configuration."""
    return _solve(instance, costs, None, fmt, time_limit, all_optimal, workers)


@cli.command()
@_search_options
@click.option("-l", "--legacy", type=existing, required=True, help="Legacy configuration file.")
def reconfigure(instance, costs, legacy, fmt, time_limit, all_optimal, workers):
    """Find a minimum-cost reconfiguration with its reuse/delete/create actions."""
    return _solve(instance, costs, legacy, fmt, time_limit, all_optimal, workers)


@cli.command()
@click.option("-i", "--instance", type=existing, required=True)
@click.option("-c", "--costs", type=existing, required=True)
@click.option("-l", "--legacy", type=existing)
@click.option("--all-optimal", type=click.IntRange(min=0), default=0, metavar="N")
@fmt_option
def oracle(instance, costs, legacy, all_optimal, fmt):
    """Enumerate all solutions of a small problem and report the optimum."""
    return _emit(runner.oracle(_facts(instance), _facts(costs), _facts(legacy), all_optimal=all_optimal), fmt)


@cli.command()
@click.option("-i", "--instance", type=existing, required=True)
@click.option("-s", "--solution", type=existing, required=True)
@click.option("-l", "--legacy", type=existing)
@click.option("-a", "--actions", type=existing)
@fmt_option
def validate(instance, solution, legacy, actions, fmt):
    """Check a solution; violations go to stderr (or stdout as JSON)."""
    if actions and not legacy:
        raise click.UsageError("--actions needs --legacy")
    report = runner.validate(_facts(instance), _facts(solution), _facts(legacy), _facts(actions))
    if fmt == "json":
        click.echo(json.dumps(report.to_json(), indent=2))
    else:
        click.echo(report.to_text(), err=True, nl=False)
        click.echo("valid" if report.valid else f"invalid: {len(report.violations)} violation(s)")
    return runner.EXIT_OK if report.valid else runner.EXIT_INVALID


@cli.command()
@click.option("-i", "--instance", type=existing, required=True)
@click.option("-s", "--solution", type=existing, required=True)
@click.option("-c", "--costs", type=existing, required=True)
@click.option("-l", "--legacy", type=existing)
@click.option("-a", "--actions", type=existing)
@fmt_option
def cost(instance, solution, costs, legacy, actions, fmt):
    """Price an existing solution."""
    outcome = runner.price(_facts(instance), _facts(solution), _facts(costs), _facts(legacy), _facts(actions))
    if fmt == "json":
        click.echo(json.dumps(outcome.to_json(), indent=2))
    else:
        for a, w in outcome.cost.items:
            click.echo(f"{a}\t{w}")
        click.echo(f"total\t{outcome.cost.total}")
    if outcome.exit_code:
        click.echo("solution is invalid; run validate for details", err=True)
    return outcome.exit_code


@cli.command()
@click.option("--scenario", type=click.Choice(FAMILIES), required=True)
@click.option("--things", type=int, default=None, help="Number of things (fixed for swap).")
@click.option("-o", "--out", type=click.Path(file_okay=False), required=True, help="Output directory.")
def generate(scenario, things, out):
    """Write a benchmark problem: instance, legacy and cost files."""
    files = runner.generate(scenario, things)
    target = Path(out)
    target.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (target / name).write_text(text)
        click.echo(target / name)
    return runner.EXIT_OK


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)
    return runner.EXIT_OK


_INPUT_ERRORS = (FactsError, CostError, ModelError, ScenarioError, OracleSizeError, PreconditionError, OSError)


def main(argv: list[str] | None = None) -> int:
    try:
        code = cli.main(args=argv, prog_name="reconf", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return runner.EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return runner.EXIT_USAGE
    except _INPUT_ERRORS as e:
        click.echo(f"error: {e}", err=True)
        return runner.EXIT_USAGE
    return code if isinstance(code, int) else runner.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
