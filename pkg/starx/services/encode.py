"""Encodings between X and *X, and checks that a step in one is simulated in the other."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from starx.config import Settings
from starx.schemas import EncodeReport, SimulationReport
from starx.services.congruence import canonicalize, float_structure
from starx.services.graph import trace_records
from starx.services.reduction import DEFAULT_OPTIONS, RuleOptions, TraceStep, star_redexes, star_step
from starx.services.simplification import simplify
from starx.services.strategy import Redex
from starx.services.substitution import contract
from starx.services.xcalc import x_redexes, x_step
from starx.syntax import format_term
from starx.terms import (
    BaseCut,
    Capsule,
    DuplL,
    DuplR,
    EraserL,
    EraserR,
    Exporter,
    Importer,
    Name,
    Term,
    children,
    free_names,
    fresh_name,
    freshen,
    index,
    is_structural,
    is_x_term,
    names_of,
    rename_free,
    subterm_at,
    subterms,
    with_children,
    wrap_erasers,
)

LOGGER = logging.getLogger(__name__)


class SimulationError(ValueError):
    pass


def _eraser_in(x: Name, t: Term) -> Term:
    return t if x in names_of(t) else EraserL(x, t)


def _eraser_out(t: Term, a: Name) -> Term:
    return t if a in names_of(t) else EraserR(t, a)


def _join(left: Term, left_bound: Name, right: Term, right_bound: Name, build: Callable[[Term, Term], Term]) -> Term:
    shared = (names_of(left) - {left_bound}) & (names_of(right) - {right_bound})
    if not shared:
        return build(left, right)
    l1, m1 = index(left, shared, 1)
    r2, m2 = index(right, shared, 2)
    return contract(
        build(l1, r2),
        m1,
        m2,
        [n for n in shared if n.is_in],
        [n for n in shared if not n.is_in],
    )


def _encode(t: Term) -> Term:
    if isinstance(t, Capsule):
        return t
    if isinstance(t, Exporter):
        body = _eraser_out(_eraser_in(t.x, _encode(t.body)), t.b)
        if t.a not in names_of(body):
            return Exporter(t.x, body, t.b, t.a)
        body1, m = index(body, [t.a], 1)
        a2 = fresh_name(t.a.kind, f"{t.a.base}_2")
        return DuplR(Exporter(t.x, body1, t.b, a2), m[t.a], a2, t.a)
    if isinstance(t, Importer):
        left = _eraser_out(_encode(t.left), t.a)
        right = _eraser_in(t.y, _encode(t.right))
        if t.x not in names_of(left) | names_of(right):
            return _join(left, t.a, right, t.y, lambda l, r: Importer(l, t.a, t.x, t.y, r))
        principal = freshen(t.x)
        joined = _join(left, t.a, right, t.y, lambda l, r: Importer(l, t.a, principal, t.y, r))
        rest = freshen(t.x)
        return DuplL(rename_free(joined, {t.x: rest}), principal, rest, t.x)
    if isinstance(t, BaseCut):
        left = _eraser_out(_encode(t.left), t.a)
        right = _eraser_in(t.x, _encode(t.right))
        return _join(left, t.a, right, t.x, lambda l, r: type(t)(l, t.a, t.x, r))
    raise SimulationError(f"not an X term: {type(t).__name__} nodes belong to *X")


def x_to_star(p: Term) -> Term:
    """Linear *X term with the same free names as ``p``."""
    return _encode(p)


def star_to_x(q: Term) -> Term:
    if isinstance(q, (EraserL, EraserR)):
        return star_to_x(q.body)
    if isinstance(q, DuplL):
        return rename_free(star_to_x(q.body), {q.x1: q.x, q.x2: q.x})
    if isinstance(q, DuplR):
        return rename_free(star_to_x(q.body), {q.a1: q.a, q.a2: q.a})
    return with_children(q, tuple(star_to_x(c) for c in children(q)))


def _structural_count(t: Term) -> tuple[int, int]:
    nodes = [s for s in subterms(t) if is_structural(s)]
    erasers = sum(isinstance(s, (EraserL, EraserR)) for s in nodes)
    return erasers, len(nodes) - erasers


def encode_report(t: Term, to: str) -> EncodeReport:
    if to == "star":
        out, direction = x_to_star(t), "x-to-star"
        erasers, duplicators = _structural_count(out)
    elif to == "x":
        out, direction = star_to_x(t), "star-to-x"
        erasers, duplicators = _structural_count(t)
    else:
        raise ValueError(f"unknown target calculus {to!r}")
    return EncodeReport(
        direction=direction,
        input_term=format_term(t),
        output_term=format_term(out),
        erasers=erasers,
        duplicators=duplicators,
    )


def observational_form(t: Term) -> Term:
    """Float structure and simplify until nothing changes, then canonicalize."""
    for _ in range(len(list(subterms(t))) + 1):
        nxt = simplify(float_structure(t))
        if nxt == t:
            break
        t = nxt
    return canonicalize(t)

@dataclass
class SimulationResult:
    success: bool
    trace: list[TraceStep] = field(default_factory=list)
    message: str = ""
    via_closure: bool = False

    def to_report(self, redex: str = "") -> SimulationReport:
        return SimulationReport(
            redex=redex,
            success=self.success,
            steps=len(self.trace),
            trace=trace_records(self.trace),
            message=self.message,
            via_closure=self.via_closure,
        )


@dataclass(frozen=True)
class SimulationOptions:
    fuel: int = 200
    max_nodes: int = 5000
    admin_closure: bool = False

    @classmethod
    def from_settings(cls, settings: Settings) -> "SimulationOptions":
        return cls(
            fuel=settings.simulation_fuel,
            max_nodes=settings.simulation_max_nodes,
            admin_closure=settings.simulation_admin_closure,
        )


DEFAULT_SIMULATION = SimulationOptions()

Successors = Callable[[Term], Iterable[tuple[Redex, Term]]]
Key = Callable[[Term], Term]


def _star_successors(options: RuleOptions) -> Successors:
    def successors(t: Term) -> Iterable[tuple[Redex, Term]]:
        s = simplify(t)
        for redex in star_redexes(s, options):
            yield redex, star_step(s, redex.position, redex.rule, options)

    return successors


def _x_successors(options: RuleOptions) -> Successors:
    def successors(t: Term) -> Iterable[tuple[Redex, Term]]:
        for redex in x_redexes(t, options):
            yield redex, x_step(t, redex.position, redex.rule, options)

    return successors


def _star_visit_key(t: Term) -> Term:
    # floating structure would merge terms that differ in where a cut can still go
    return canonicalize(simplify(t))


def _star_admin(t: Term, redex: Redex) -> bool:
    if redex.rule in ("eras-L", "eras-R", "deact-L", "deact-R"):
        return True
    cut = subterm_at(simplify(t), redex.position)
    if redex.rule == "act-L":
        return isinstance(cut.left, EraserR) and cut.left.a == cut.a
    if redex.rule == "act-R":
        return isinstance(cut.right, EraserL) and cut.right.x == cut.x
    return False


def _x_admin(t: Term, redex: Redex) -> bool:
    if redex.rule in ("eras-L", "eras-R", "gc-L", "gc-R", "deact-L", "deact-R"):
        return True
    cut = subterm_at(t, redex.position)
    if redex.rule == "act-L":
        return cut.a not in names_of(cut.left)
    if redex.rule == "act-R":
        return cut.x not in names_of(cut.right)
    return False


def _closure(
    t: Term,
    successors: Successors,
    admin: Callable[[Term, Redex], bool],
    visit_key: Key,
    match_key: Key,
    max_nodes: int,
) -> set[Term]:
    """Match keys of everything reachable from ``t`` by administrative steps."""
    found = {match_key(t)}
    seen = {visit_key(t)}
    queue = deque([t])
    while queue and len(seen) < max_nodes:
        term = queue.popleft()
        for redex, nxt in successors(term):
            if not admin(term, redex):
                continue
            k = visit_key(nxt)
            if k not in seen:
                seen.add(k)
                found.add(match_key(nxt))
                queue.append(nxt)
    return found


def _search(
    start: Term,
    goals: set[Term],
    successors: Successors,
    visit_key: Key,
    match_key: Key,
    *,
    fuel: int,
    max_nodes: int,
    allow_zero: bool,
) -> tuple[list[TraceStep] | None, Term | None, str]:
    if allow_zero:
        matched = match_key(start)
        if matched in goals:
            return [], matched, "matched without steps"
    start_key = visit_key(start)
    parents: dict[Term, tuple[Term, Redex, Term]] = {}
    seen = {start_key}
    queue = deque([(start, start_key, 0)])
    truncated = False

    def path(k: Term, last: tuple[Redex, Term]) -> list[TraceStep]:
        steps = [last]
        while k != start_key:
            k, redex, term = parents[k]
            steps.append((redex, term))
        steps.reverse()
        return [TraceStep(i, r.rule, r.position, term) for i, (r, term) in enumerate(steps, start=1)]

    while queue:
        term, k, depth = queue.popleft()
        if depth >= fuel:
            truncated = True
            continue
        for redex, nxt in successors(term):
            matched = match_key(nxt)
            if matched in goals:
                return path(k, (redex, nxt)), matched, f"matched after {depth + 1} steps"
            nk = visit_key(nxt)
            if nk in seen:
                continue
            if len(seen) >= max_nodes:
                truncated = True
                continue
            seen.add(nk)
            parents[nk] = (k, redex, nxt)
            queue.append((nxt, nk, depth + 1))
    reason = "search truncated" if truncated else "search space exhausted"
    return None, None, f"{reason} after {len(seen)} terms without reaching the target"


def _require_x(t: Term) -> None:
    if not is_x_term(t):
        raise SimulationError("expected an X term without erasers or duplicators")


def _simulate(
    start: Term,
    target: Term,
    successors: Successors,
    admin: Callable[[Term, Redex], bool],
    visit_key: Key,
    match_key: Key,
    simulation: SimulationOptions,
    allow_zero: bool,
) -> SimulationResult:
    exact = match_key(target)
    goals = {exact}
    if simulation.admin_closure:
        goals = _closure(target, successors, admin, visit_key, match_key, simulation.max_nodes)
    trace, matched, message = _search(
        start,
        goals,
        successors,
        visit_key,
        match_key,
        fuel=simulation.fuel,
        max_nodes=simulation.max_nodes,
        allow_zero=allow_zero,
    )
    if trace is None:
        return SimulationResult(False, [], message)
    via_closure = matched != exact
    if via_closure:
        message += " (administrative successor of the target)"
    return SimulationResult(True, trace, message, via_closure)


def simulate_x_in_star(
    p: Term,
    p_next: Term,
    *,
    options: RuleOptions = DEFAULT_OPTIONS,
    simulation: SimulationOptions = DEFAULT_SIMULATION,
) -> SimulationResult:
    """Look for a non-empty *X reduction from the encoding of ``p`` to that of ``p_next``.

    Names the step lost are erased around the target.
    """
    _require_x(p)
    _require_x(p_next)
    lost_in = free_names(p).innames - free_names(p_next).innames
    lost_out = free_names(p).outnames - free_names(p_next).outnames
    target = wrap_erasers(x_to_star(p_next), lost_in, lost_out)
    result = _simulate(
        x_to_star(p),
        target,
        _star_successors(options),
        _star_admin,
        _star_visit_key,
        observational_form,
        simulation,
        allow_zero=False,
    )
    if not result.success:
        LOGGER.info("X step not simulated: %s -> %s (%s)", format_term(p), format_term(p_next), result.message)
    return result


def simulate_star_in_x(
    q: Term,
    q_next: Term,
    *,
    options: RuleOptions = DEFAULT_OPTIONS,
    simulation: SimulationOptions = DEFAULT_SIMULATION,
) -> SimulationResult:
    """Look for an X reduction from the erasure of ``q`` to that of ``q_next``; an empty one counts."""
    result = _simulate(
        star_to_x(q),
        star_to_x(q_next),
        _x_successors(options),
        _x_admin,
        canonicalize,
        canonicalize,
        simulation,
        allow_zero=True,
    )
    if not result.success:
        LOGGER.info("*X step not simulated: %s -> %s (%s)", format_term(q), format_term(q_next), result.message)
    return result


def lost_names(q: Term) -> frozenset[Name]:
    """Names of ``q`` that only erasers introduce, which erasure forgets."""
    return names_of(q) - names_of(star_to_x(q))
