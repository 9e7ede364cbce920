from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from starx.config import Settings
from starx.services.simplification import simplify_traced
from starx.services.strategy import Chooser, Redex, Strategy
from starx.services.substitution import dup_subst_left, dup_subst_right
from starx.terms import (
    BaseCut,
    Capsule,
    Cut,
    CutL,
    CutR,
    DuplL,
    DuplR,
    EraserL,
    EraserR,
    Exporter,
    Importer,
    Position,
    Term,
    binders,
    children,
    free_names,
    is_l_principal,
    names_of,
    positions,
    rename,
    replace_at,
    require_linear,
    subterm_at,
    with_children,
    wrap_erasers,
)

LOGGER = logging.getLogger(__name__)


class RuleNotApplicableError(ValueError):
    pass


class StarRule(str, Enum):
    ACT_L = "act-L"
    ACT_R = "act-R"
    REN_L = "ren-L"
    REN_R = "ren-R"
    EI_INSERT = "ei-insert"
    ERAS_L = "eras-L"
    ERAS_R = "eras-R"
    DUPL_L = "dupl-L"
    DUPL_R = "dupl-R"
    DEACT_L = "deact-L"
    DEACT_R = "deact-R"
    PROP_L = "prop-L"
    PROP_R = "prop-R"
    CUTC_PROP_L = "cutc-prop-L"
    CUTC_PROP_R = "cutc-prop-R"
    SIMP_L = "simp-L"
    SIMP_R = "simp-R"


@dataclass(frozen=True)
class RuleOptions:
    insert_assoc: str = "left"
    cutc: bool = True
    strict_activation: bool = False

    @classmethod
    def from_settings(cls, settings: Settings) -> "RuleOptions":
        return cls(
            insert_assoc=settings.insert_assoc,
            cutc=settings.cutc_rules,
            strict_activation=settings.strict_activation,
        )


DEFAULT_OPTIONS = RuleOptions()


def insert_contractum(exporter: Exporter, importer: Importer, assoc: str) -> Term:
    """Put the exporter body between the importer's two subterms."""
    y, body, b = exporter.x, exporter.body, exporter.b
    q, g, z, r = importer.left, importer.a, importer.y, importer.right
    if assoc == "right":
        return Cut(q, g, y, Cut(body, b, z, r))
    return Cut(Cut(q, g, y, body), b, z, r)


def _cut_rules(t: Cut, options: RuleOptions) -> list[StarRule]:
    p, q = t.left, t.right
    rules: list[StarRule] = []
    if isinstance(p, Capsule) and p.a == t.a:
        rules.append(StarRule.REN_L)
    if isinstance(q, Capsule) and q.x == t.x:
        rules.append(StarRule.REN_R)
    if isinstance(p, Exporter) and p.a == t.a and isinstance(q, Importer) and q.x == t.x:
        rules.append(StarRule.EI_INSERT)
    if options.strict_activation and (isinstance(p, (CutL, CutR)) or isinstance(q, (CutL, CutR))):
        return rules
    if not is_l_principal(p, t.a):
        rules.append(StarRule.ACT_L)
    if not is_l_principal(q, t.x):
        rules.append(StarRule.ACT_R)
    return rules


def _is_cutc_left(p: Term, a) -> bool:
    return isinstance(p, Cut) and isinstance(p.right, Capsule) and p.right.x == p.x and p.right.a == a


def _is_cutc_right(q: Term, x) -> bool:
    return isinstance(q, Cut) and isinstance(q.left, Capsule) and q.left.a == q.a and q.left.x == x


def _left_rules(t: CutL, options: RuleOptions) -> list[StarRule]:
    p = t.left
    if is_l_principal(p, t.a):
        return [StarRule.DEACT_L]
    if isinstance(p, EraserR) and p.a == t.a:
        return [StarRule.ERAS_L]
    if isinstance(p, DuplR) and p.a == t.a:
        return [StarRule.DUPL_L]
    if options.cutc and _is_cutc_left(p, t.a):
        return [StarRule.CUTC_PROP_L]
    if isinstance(p, (Capsule, CutL, CutR)):
        return []
    return [StarRule.PROP_L]


def _right_rules(t: CutR, options: RuleOptions) -> list[StarRule]:
    q = t.right
    if is_l_principal(q, t.x):
        return [StarRule.DEACT_R]
    if isinstance(q, EraserL) and q.x == t.x:
        return [StarRule.ERAS_R]
    if isinstance(q, DuplL) and q.x == t.x:
        return [StarRule.DUPL_R]
    if options.cutc and _is_cutc_right(q, t.x):
        return [StarRule.CUTC_PROP_R]
    if isinstance(q, (Capsule, CutL, CutR)):
        return []
    return [StarRule.PROP_R]


def node_rules(t: Term, options: RuleOptions = DEFAULT_OPTIONS) -> list[StarRule]:
    if isinstance(t, Cut):
        return _cut_rules(t, options)
    if isinstance(t, CutL):
        return _left_rules(t, options)
    if isinstance(t, CutR):
        return _right_rules(t, options)
    return []


def star_redexes(t: Term, options: RuleOptions = DEFAULT_OPTIONS) -> list[Redex]:
    require_linear(t)
    found = []
    for pos in positions(t):
        for rule in node_rules(subterm_at(t, pos), options):
            found.append(Redex(pos, rule.value))
    return found


def _push(t: Term, name, wrap) -> Term:
    """Rebuild ``t`` with ``wrap`` applied to the immediate subterm where ``name`` is free."""
    kids = children(t)
    for i, (child, bound) in enumerate(zip(kids, binders(t))):
        if name in names_of(child) and name not in bound:
            new = list(kids)
            new[i] = wrap(child)
            return with_children(t, tuple(new))
    raise RuleNotApplicableError(f"{name} does not occur in an immediate subterm")


def contract(t: Term, rule: StarRule, options: RuleOptions = DEFAULT_OPTIONS) -> Term:
    """The contractum of ``rule`` at the root of ``t``."""
    if rule not in node_rules(t, options):
        raise RuleNotApplicableError(f"{rule.value} does not apply here")
    p, a, x, q = t.left, t.a, t.x, t.right
    if rule is StarRule.REN_L:
        return rename(q, p.x, x)
    if rule is StarRule.REN_R:
        return rename(p, q.a, a)
    if rule is StarRule.EI_INSERT:
        return insert_contractum(p, q, options.insert_assoc)
    if rule is StarRule.ACT_L:
        return CutL(p, a, x, q)
    if rule is StarRule.ACT_R:
        return CutR(p, a, x, q)
    if rule in (StarRule.DEACT_L, StarRule.DEACT_R):
        return Cut(p, a, x, q)
    if rule is StarRule.ERAS_L:
        q_names = free_names(q)
        return wrap_erasers(p.body, q_names.innames - {x}, q_names.outnames)
    if rule is StarRule.ERAS_R:
        p_names = free_names(p)
        return wrap_erasers(q.body, p_names.innames, p_names.outnames - {a})
    if rule is StarRule.DUPL_L:
        return dup_subst_left(p.body, p.a1, p.a2, x, q, a=a)
    if rule is StarRule.DUPL_R:
        return dup_subst_right(p, a, q.x1, q.x2, q.body, x=x)
    if rule is StarRule.CUTC_PROP_L:
        return Cut(p.left, p.a, x, q)
    if rule is StarRule.CUTC_PROP_R:
        return Cut(p, a, q.x, q.right)
    if rule is StarRule.PROP_L:
        return _push(p, a, lambda r: CutL(r, a, x, q))
    return _push(q, x, lambda r: CutR(p, a, x, r))


def star_step(t: Term, pos: Position, rule: StarRule | str, options: RuleOptions = DEFAULT_OPTIONS) -> Term:
    rule = StarRule(rule)
    return replace_at(t, pos, contract(subterm_at(t, pos), rule, options))


@dataclass(frozen=True)
class TraceStep:
    step: int
    rule: str
    position: Position
    term: Term


@dataclass
class NormalForm:
    term: Term
    steps: int
    trace: list[TraceStep] = field(default_factory=list)


@dataclass
class FuelExhausted:
    term: Term
    steps: int
    trace: list[TraceStep] = field(default_factory=list)


@dataclass
class Interrupted:
    term: Term
    steps: int
    trace: list[TraceStep] = field(default_factory=list)


Outcome = NormalForm | FuelExhausted | Interrupted


def star_normalize(
    t: Term,
    strategy: Strategy,
    fuel: int,
    *,
    options: RuleOptions = DEFAULT_OPTIONS,
    chooser: Chooser | None = None,
) -> Outcome:
    """Simplify, pick a redex, step; until no redex is left or fuel runs out.

    Simplification steps appear in the trace but do not consume fuel.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    trace: list[TraceStep] = []
    steps = 0
    while True:
        t, simps = simplify_traced(t)
        for s in simps:
            trace.append(TraceStep(len(trace) + 1, s.rule, s.position, s.term))
        redexes = star_redexes(t, options)
        if not redexes:
            return NormalForm(t, steps, trace)
        if steps >= fuel:
            LOGGER.info("fuel of %d exhausted", fuel)
            return FuelExhausted(t, steps, trace)
        picked = strategy.choose(t, redexes, chooser)
        if picked is None:
            return Interrupted(t, steps, trace)
        t = star_step(t, picked.position, picked.rule, options)
        steps += 1
        trace.append(TraceStep(len(trace) + 1, picked.rule, picked.position, t))
        LOGGER.debug("step %d: %s", steps, picked)
