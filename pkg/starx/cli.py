from __future__ import annotations

import functools
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable

import click

from starx.catalog import CatalogError, load_source
from starx.config import Settings, get_settings
from starx.formulas import format_sequent
from starx.schemas import CheckReport
from starx.services.encode import (
    SimulationError,
    SimulationOptions,
    encode_report,
    simulate_star_in_x,
    simulate_x_in_star,
    star_to_x,
    x_to_star,
)
from starx.services.graph import explore_graph, trace_jsonl
from starx.services.reduction import FuelExhausted, RuleOptions, TraceStep, star_normalize, star_redexes, star_step
from starx.services.simplification import simplify_traced
from starx.services.strategy import Strategy, StrategyError, StrategyKind
from starx.services.typecheck import TypeCheckError, infer_star, typecheck_star, typecheck_x
from starx.services.xcalc import XCalculusError, x_normalize, x_redexes, x_step
from starx.syntax import TermSyntaxError, format_infix, format_term, parse, parse_sequent
from starx.terms import NonLinearTermError, Term, check_linear

LOGGER = logging.getLogger(__name__)

_FAILURES = (TermSyntaxError, NonLinearTermError, TypeCheckError, XCalculusError, SimulationError, CatalogError)


def _fail(message: str) -> None:
    click.echo(message, err=True)
    raise SystemExit(1)


def _reports_failures(command: Callable) -> Callable:
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except _FAILURES as exc:
            _fail(f"error: {exc}")

    return wrapper


def _read_source(source: str) -> str:
    """``-`` is stdin, ``@name`` a bundled term, anything else a file path."""
    if source == "-":
        return sys.stdin.read()
    if source.startswith("@"):
        return load_source(source[1:])
    path = Path(source)
    if not path.is_file():
        raise click.BadParameter(f"no such file: {source}", param_hint="SOURCE")
    return path.read_text(encoding="utf-8")


def _load(source: str, calculus: str) -> Term:
    return parse(_read_source(source), allow_structural=calculus == "star")


def _show(t: Term, notation: str) -> str:
    return format_infix(t) if notation == "infix" else format_term(t)


def _options(settings: Settings, disable_cutc: bool, insert_assoc: str | None) -> RuleOptions:
    return RuleOptions(
        insert_assoc=insert_assoc or settings.insert_assoc,
        cutc=settings.cutc_rules and not disable_cutc,
        strict_activation=settings.strict_activation,
    )


def source_argument(f: Callable) -> Callable:
    return click.argument("source", default="-")(f)


def calculus_option(f: Callable) -> Callable:
    return click.option(
        "--calculus",
        type=click.Choice(["star", "x"]),
        default="star",
        show_default=True,
        help="Which calculus the term belongs to.",
    )(f)


def format_option(f: Callable) -> Callable:
    return click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)(f)


def notation_option(f: Callable) -> Callable:
    return click.option("--notation", type=click.Choice(["core", "infix"]), default="core", show_default=True)(f)


def rule_options(f: Callable) -> Callable:
    f = click.option("--disable-cutc", is_flag=True, help="Switch off the cut(c) propagation rules.")(f)
    f = click.option(
        "--insert-assoc",
        type=click.Choice(["left", "right"]),
        default=None,
        help="Association of the insertion contractum.",
    )(f)
    return f


@click.group(name="starx")
@click.option("--verbose", is_flag=True, help="Log every rewrite step.")
@click.pass_context
def main(ctx: click.Context, verbose: bool) -> None:
    """Work with X and *X terms: check, type, reduce, explore and encode them."""
    settings = get_settings()
    logging.basicConfig(level=logging.DEBUG if verbose else settings.log_level.upper())
    ctx.obj = settings


@main.command()
@source_argument
@calculus_option
@format_option
@_reports_failures
def check(source: str, calculus: str, fmt: str) -> None:
    """Check that a term is well formed (and linear, for *X)."""
    t = _load(source, calculus)
    diagnostics = check_linear(t) if calculus == "star" else []
    report = CheckReport(
        ok=not diagnostics, calculus=calculus, term=format_term(t), diagnostics=[str(d) for d in diagnostics]
    )
    if fmt == "json":
        click.echo(report.model_dump_json())
    elif report.ok:
        click.echo("ok: linear *X term" if calculus == "star" else "ok: X term")
    else:
        for line in report.diagnostics:
            click.echo(line, err=True)
    if not report.ok:
        raise SystemExit(1)


@main.command(name="type")
@source_argument
@click.option("--sequent", required=True, help="Sequent to check against, e.g. \"x:A |- 'a:A\".")
@calculus_option
@format_option
@_reports_failures
def type_command(source: str, sequent: str, calculus: str, fmt: str) -> None:
    """Check a term against a sequent and print the derivation."""
    t = _load(source, calculus)
    s = parse_sequent(sequent)
    derivation = typecheck_star(t, s) if calculus == "star" else typecheck_x(t, s)
    if fmt == "json":
        click.echo(derivation.to_schema().model_dump_json(indent=2))
    else:
        click.echo(derivation.format_tree())


@main.command()
@source_argument
@_reports_failures
def infer(source: str) -> None:
    """Print the most general sequent of a linear *X term."""
    click.echo(format_sequent(infer_star(_load(source, "star"))))


def _strategy(text: str) -> Strategy:
    try:
        strategy = Strategy.parse(text)
    except StrategyError as exc:
        raise click.BadParameter(str(exc), param_hint="--strategy") from exc
    if strategy.kind in (StrategyKind.INTERACTIVE, StrategyKind.EXHAUSTIVE):
        raise click.BadParameter("use the step or graph command for this strategy", param_hint="--strategy")
    return strategy


@main.command()
@source_argument
@calculus_option
@click.option("--strategy", "strategy_text", default=None, help="left-priority, right-priority or random:SEED.")
@click.option("--fuel", type=click.IntRange(min=1), default=None, help="Maximum number of rewrite steps.")
@click.option("--trace", "show_trace", is_flag=True, help="Print every step as a JSON line.")
@rule_options
@notation_option
@_reports_failures
@click.pass_obj
def reduce(
    settings: Settings,
    source: str,
    calculus: str,
    strategy_text: str | None,
    fuel: int | None,
    show_trace: bool,
    disable_cutc: bool,
    insert_assoc: str | None,
    notation: str,
) -> None:
    """Reduce a term to normal form or until fuel runs out."""
    t = _load(source, calculus)
    strategy = _strategy(strategy_text or settings.strategy)
    options = _options(settings, disable_cutc, insert_assoc)
    normalize = star_normalize if calculus == "star" else x_normalize
    outcome = normalize(t, strategy, fuel if fuel is not None else settings.fuel, options=options)
    if show_trace:
        click.echo(trace_jsonl(outcome.trace), nl=False)
    click.echo(_show(outcome.term, notation))
    if isinstance(outcome, FuelExhausted):
        _fail(f"fuel exhausted after {outcome.steps} steps")
    LOGGER.info("normal form after %d steps", outcome.steps)


def _read_choices(path: str | None) -> list[str]:
    if path is None:
        return []
    return [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]


@main.command()
@source_argument
@calculus_option
@click.option("--fuel", type=click.IntRange(min=1), default=None, help="Stop after this many steps.")
@click.option(
    "--choices", "choices_file", type=click.Path(exists=True, dir_okay=False), help="Replay choices from a file."
)
@click.option("--record", "record_file", type=click.Path(dir_okay=False), help="Write the choices made to a file.")
@rule_options
@notation_option
@_reports_failures
@click.pass_obj
def step(
    settings: Settings,
    source: str,
    calculus: str,
    fuel: int | None,
    choices_file: str | None,
    record_file: str | None,
    disable_cutc: bool,
    insert_assoc: str | None,
    notation: str,
) -> None:
    """Reduce interactively: pick a numbered redex, q quits, a toggles automatic steps."""
    if source == "-":
        raise click.UsageError("step reads its choices from stdin; give the term as a file or @name")
    t = _load(source, calculus)
    options = _options(settings, disable_cutc, insert_assoc)
    redexes_of = star_redexes if calculus == "star" else x_redexes
    step_at = star_step if calculus == "star" else x_step
    replay = _read_choices(choices_file)
    recorded: list[str] = []
    auto = False
    limit = fuel if fuel is not None else settings.fuel
    steps = 0
    automatic = Strategy(StrategyKind.LEFT_PRIORITY)

    while steps < limit:
        if calculus == "star":
            t, simps = simplify_traced(t)
            for s in simps:
                click.echo(f"  {s.rule} at {'.'.join(map(str, s.position)) or 'root'}")
        click.echo(_show(t, notation))
        redexes = redexes_of(t, options)
        if not redexes:
            click.echo("normal form")
            break
        for i, redex in enumerate(redexes, start=1):
            click.echo(f"  [{i}] {redex}")
        if auto and not replay:
            picked = automatic.choose(t, redexes)
        else:
            answer = replay.pop(0) if replay else click.prompt("choice", default="q", show_default=False)
            answer = answer.strip().lower()
            if answer == "q":
                break
            if answer == "a":
                auto = not auto
                recorded.append("a")
                continue
            if not answer.isdigit() or not 1 <= int(answer) <= len(redexes):
                click.echo(f"enter 1..{len(redexes)}, a or q", err=True)
                continue
            picked = redexes[int(answer) - 1]
            recorded.append(answer)
        t = step_at(t, picked.position, picked.rule, options)
        steps += 1
    else:
        click.echo(f"stopped after {limit} steps")

    if record_file:
        Path(record_file).write_text("".join(f"{c}\n" for c in recorded), encoding="utf-8")


@main.command()
@source_argument
@calculus_option
@click.option("--max-nodes", type=click.IntRange(min=1), default=None, help="Stop exploring after this many terms.")
@click.option("--fuel", type=click.IntRange(min=1), default=None, help="Maximum depth of exploration.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write the DOT graph here.")
@rule_options
@format_option
@_reports_failures
@click.pass_obj
def graph(
    settings: Settings,
    source: str,
    calculus: str,
    max_nodes: int | None,
    fuel: int | None,
    output: str | None,
    disable_cutc: bool,
    insert_assoc: str | None,
    fmt: str,
) -> None:
    """Explore every reduction and emit the graph in DOT."""
    t = _load(source, calculus)
    options = _options(settings, disable_cutc, insert_assoc)
    if max_nodes is None:
        max_nodes = settings.max_nodes
    if fuel is None:
        fuel = settings.fuel
    g = explore_graph(t, max_nodes, fuel, calculus=calculus, options=options)
    summary = g.summary(settings.label_width)
    if output is not None:
        Path(output).write_text(g.to_dot(settings.label_width), encoding="utf-8")
    elif fmt == "text":
        click.echo(g.to_dot(settings.label_width), nl=False)
        return
    if fmt == "json":
        click.echo(summary.model_dump_json())
        return
    click.echo(f"{summary.nodes} terms, {summary.edges} steps, {len(summary.normal_forms)} normal forms")
    click.echo("acyclic" if summary.acyclic else "cycle: " + " -> ".join(summary.cycle or []))
    if summary.truncated_by_fuel or summary.truncated_by_nodes:
        click.echo("exploration truncated", err=True)


@main.command()
@source_argument
@click.option("--to", "target", type=click.Choice(["star", "x"]), required=True, help="Calculus to encode into.")
@click.option("--simulate", is_flag=True, help="Check that every one-step reduct is simulated in the target calculus.")
@click.option(
    "--admin-closure", is_flag=True, help="Also accept targets reached from the encoding by administrative steps."
)
@rule_options
@format_option
@notation_option
@_reports_failures
@click.pass_obj
def encode(
    settings: Settings,
    source: str,
    target: str,
    simulate: bool,
    admin_closure: bool,
    disable_cutc: bool,
    insert_assoc: str | None,
    fmt: str,
    notation: str,
) -> None:
    """Translate X terms into *X, or erase *X terms into X."""
    t = _load(source, "x" if target == "star" else "star")
    if not simulate:
        report = encode_report(t, target)
        if fmt == "json":
            click.echo(report.model_dump_json())
        else:
            click.echo(_show(x_to_star(t) if target == "star" else star_to_x(t), notation))
        return

    options = _options(settings, disable_cutc, insert_assoc)
    simulation = SimulationOptions.from_settings(settings)
    if admin_closure:
        simulation = replace(simulation, admin_closure=True)
    if target == "star":
        redexes, step_at, simulated = x_redexes(t, options), x_step, simulate_x_in_star
    else:
        redexes, step_at, simulated = star_redexes(t, options), star_step, simulate_star_in_x
    failed = 0
    for redex in redexes:
        nxt = step_at(t, redex.position, redex.rule, options)
        report = simulated(t, nxt, options=options, simulation=simulation).to_report(str(redex))
        failed += not report.success
        if fmt == "json":
            click.echo(report.model_dump_json())
        elif report.success:
            suffix = " via closure" if report.via_closure else ""
            click.echo(f"{report.redex}: simulated in {report.steps} steps{suffix}")
        else:
            click.echo(f"{report.redex}: not simulated, {report.message}")
    if failed:
        _fail(f"{failed} of {len(redexes)} steps not simulated")


@main.command()
@source_argument
@format_option
@notation_option
@_reports_failures
def simplify(source: str, fmt: str, notation: str) -> None:
    """Apply the duplicator-eraser simplifications until none is left."""
    t, steps = simplify_traced(_load(source, "star"))
    if fmt == "json":
        trace = [TraceStep(i, s.rule, s.position, s.term) for i, s in enumerate(steps, start=1)]
        click.echo(trace_jsonl(trace), nl=False)
    click.echo(_show(t, notation))


if __name__ == "__main__":
    main()
