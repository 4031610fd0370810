"""Command-line interface: serve, solve, diagnose, batch, rules list."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import DomainError, ParseError
from .syntax import parse_eqset, render
from .rules import CATALOG
from .strategy import STRATEGIES, model_solution, select_strategy
from .diagnosis import diagnose_from_task
from .service import diagnosis_record
from .batch import batch_eval


@click.group()
def main():
    """Stepwise quadratic-equation diagnosis."""


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default="./data/sessions", show_default=True)
def serve(port: int, host: str, data_dir: str):
    """Run the HTTP JSON diagnosis service."""
    import uvicorn

    from .service import SessionStore, create_app

    app = create_app(SessionStore(data_dir))
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.argument("equation")
@click.option(
    "--strategy",
    "strategy_name",
    default="auto",
    type=click.Choice(["auto", "sqrt", "factor", "quadratic-formula"]),
    show_default=True,
)
def solve(equation: str, strategy_name: str):
    """Print the model solution for a task."""
    try:
        task = parse_eqset(equation)
        if strategy_name == "auto":
            strategy_name, strategy = select_strategy(task)
        else:
            strategy = STRATEGIES[strategy_name]()
        solution = model_solution(task, strategy)
    except DomainError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"strategy: {strategy_name}")
    for i, state in enumerate(solution.states):
        click.echo(f"{i:3}. {render(state)}")
        if i < len(solution.rules):
            rule, site = solution.rules[i]
            click.echo(f"      -> {rule.value} @ {site}")


@main.command()
@click.option("--task", required=True)
@click.option("--prev", default=None, help="previous accepted state; defaults to the task")
@click.option("--input", "input_text", required=True)
@click.option("--max-lookahead", default=5, show_default=True)
def diagnose(task: str, prev: str | None, input_text: str, max_lookahead: int):
    """Diagnose one step and print the JSON record."""
    try:
        t = parse_eqset(task)
        p = parse_eqset(prev) if prev else t
        i = parse_eqset(input_text)
        result = diagnose_from_task(t, p, i, max_lookahead)
    except ParseError as exc:
        raise click.ClickException(f"parse failure {exc}")
    except DomainError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(diagnosis_record(result), indent=2))


@main.command()
@click.argument("logfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-lookahead", default=5, show_default=True)
@click.option("--json", "json_path", default=None, help="where to write the machine-readable report")
def batch(logfile: str, max_lookahead: int, json_path: str | None):
    """Replay a diagnosis log and report per-class counts and timing."""
    report = batch_eval(logfile, max_lookahead)
    click.echo(report.to_text())
    out = Path(json_path) if json_path else Path(logfile).with_suffix(".report.json")
    out.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    click.echo(f"report written to {out}")


@main.group()
def rules():
    """Rule catalog commands."""


@rules.command("list")
def rules_list():
    """Dump the production-rule catalog."""
    for rule in CATALOG.values():
        marker = " (minor)" if rule.minor else ""
        click.echo(f"{rule.id.value:20}{marker:8} {rule.description}")


if __name__ == "__main__":
    sys.exit(main())
