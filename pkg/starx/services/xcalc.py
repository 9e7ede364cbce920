"""The X calculus, where weakening and contraction stay implicit."""

from __future__ import annotations

import logging
from enum import Enum

from starx.services.reduction import (
    DEFAULT_OPTIONS,
    FuelExhausted,
    Interrupted,
    NormalForm,
    Outcome,
    RuleOptions,
    TraceStep,
    insert_contractum,
)
from starx.services.strategy import Chooser, Redex, Strategy
from starx.terms import (
    Capsule,
    Cut,
    CutL,
    CutR,
    Exporter,
    Importer,
    Name,
    Position,
    Term,
    clone_fresh,
    freshen,
    is_structural,
    names_of,
    positions,
    rename_free,
    replace_at,
    subterm_at,
    subterms,
)

LOGGER = logging.getLogger(__name__)


class XCalculusError(ValueError):
    pass


class XRule(str, Enum):
    CAP_REN = "cap-ren"
    EXP_REN = "exp-ren"
    IMP_REN = "imp-ren"
    EXP_IMP_INS = "exp-imp-ins"
    ACT_L = "act-L"
    ACT_R = "act-R"
    DEACT_L = "deact-L"
    DEACT_R = "deact-R"
    ERAS_L = "eras-L"
    ERAS_R = "eras-R"
    GC_L = "gc-L"
    GC_R = "gc-R"
    PROP_L = "prop-L"
    PROP_R = "prop-R"
    PROP_DUPL_DEACT_L = "prop-dupl-deact-L"
    PROP_DUPL_DEACT_R = "prop-dupl-deact-R"
    PROP_DUPL_L = "prop-dupl-L"
    PROP_DUPL_R = "prop-dupl-R"
    CUTC_PROP_L = "cutc-prop-L"
    CUTC_PROP_R = "cutc-prop-R"


def freshly_introduces(t: Term, name: Name) -> bool:
    if isinstance(t, Capsule):
        return name in (t.x, t.a)
    if isinstance(t, Importer):
        return name == t.x and name not in names_of(t.left) and name not in names_of(t.right)
    if isinstance(t, Exporter):
        return name == t.a and name not in names_of(t.body)
    return False


def _check_x_term(t: Term) -> None:
    if any(is_structural(s) for s in subterms(t)):
        raise XCalculusError("X terms contain no erasers or duplicators")


def _cut_rules(t: Cut, options: RuleOptions) -> list[XRule]:
    p, q = t.left, t.right
    fresh_left = freshly_introduces(p, t.a)
    fresh_right = freshly_introduces(q, t.x)
    if fresh_left and fresh_right:
        if isinstance(p, Capsule):
            return [XRule.CAP_REN if isinstance(q, Capsule) else XRule.IMP_REN]
        return [XRule.EXP_REN if isinstance(q, Capsule) else XRule.EXP_IMP_INS]
    if options.strict_activation and (isinstance(p, (CutL, CutR)) or isinstance(q, (CutL, CutR))):
        return []
    rules = []
    if not fresh_left:
        rules.append(XRule.ACT_L)
    if not fresh_right:
        rules.append(XRule.ACT_R)
    return rules


def _left_rules(t: CutL, options: RuleOptions) -> list[XRule]:
    p, a = t.left, t.a
    if freshly_introduces(p, a):
        return [XRule.DEACT_L]
    if a not in names_of(p):
        return [XRule.ERAS_L if isinstance(p, Capsule) else XRule.GC_L]
    if isinstance(p, Exporter):
        return [XRule.PROP_DUPL_DEACT_L if p.a == a else XRule.PROP_L]
    if isinstance(p, Cut):
        r = p.right
        if options.cutc and isinstance(r, Capsule) and r.x == p.x and r.a == a and a not in names_of(p.left):
            return [XRule.CUTC_PROP_L]
        return [XRule.PROP_DUPL_L]
    if isinstance(p, Importer):
        return [XRule.PROP_DUPL_L]
    return []


def _right_rules(t: CutR, options: RuleOptions) -> list[XRule]:
    q, x = t.right, t.x
    if freshly_introduces(q, x):
        return [XRule.DEACT_R]
    if x not in names_of(q):
        return [XRule.ERAS_R if isinstance(q, Capsule) else XRule.GC_R]
    if isinstance(q, Exporter):
        return [XRule.PROP_R]
    if isinstance(q, Importer):
        return [XRule.PROP_DUPL_DEACT_R if q.x == x else XRule.PROP_DUPL_R]
    if isinstance(q, Cut):
        c = q.left
        if options.cutc and isinstance(c, Capsule) and c.a == q.a and c.x == x and x not in names_of(q.right):
            return [XRule.CUTC_PROP_R]
        return [XRule.PROP_DUPL_R]
    return []


def x_node_rules(t: Term, options: RuleOptions = DEFAULT_OPTIONS) -> list[XRule]:
    if isinstance(t, Cut):
        return _cut_rules(t, options)
    if isinstance(t, CutL):
        return _left_rules(t, options)
    if isinstance(t, CutR):
        return _right_rules(t, options)
    return []


def x_redexes(t: Term, options: RuleOptions = DEFAULT_OPTIONS) -> list[Redex]:
    _check_x_term(t)
    found = []
    for pos in positions(t):
        for rule in x_node_rules(subterm_at(t, pos), options):
            found.append(Redex(pos, rule.value))
    return found


def _left_module(r: Term, a: Name, x: Name, q: Term) -> Term:
    """A copy of ``cutL(r,'a,x,q)`` with its cut names and the binders of ``q`` renewed."""
    a2, x2 = freshen(a), freshen(x)
    return CutL(rename_free(r, {a: a2}), a2, x2, clone_fresh(rename_free(q, {x: x2})))


def _right_module(p: Term, a: Name, x: Name, r: Term) -> Term:
    a2, x2 = freshen(a), freshen(x)
    return CutR(clone_fresh(rename_free(p, {a: a2})), a2, x2, rename_free(r, {x: x2}))


def x_contract(t: Term, rule: XRule, options: RuleOptions = DEFAULT_OPTIONS) -> Term:
    if rule not in x_node_rules(t, options):
        raise XCalculusError(f"{rule.value} does not apply here")
    p, a, x, q = t.left, t.a, t.x, t.right
    if rule is XRule.CAP_REN:
        return Capsule(p.x, q.a)
    if rule is XRule.EXP_REN:
        return Exporter(p.x, p.body, p.b, q.a)
    if rule is XRule.IMP_REN:
        return Importer(q.left, q.a, p.x, q.y, q.right)
    if rule is XRule.EXP_IMP_INS:
        return insert_contractum(p, q, options.insert_assoc)
    if rule is XRule.ACT_L:
        return CutL(p, a, x, q)
    if rule is XRule.ACT_R:
        return CutR(p, a, x, q)
    if rule in (XRule.DEACT_L, XRule.DEACT_R):
        return Cut(p, a, x, q)
    if rule in (XRule.ERAS_L, XRule.GC_L):
        return p
    if rule in (XRule.ERAS_R, XRule.GC_R):
        return q
    if rule is XRule.PROP_L:
        return Exporter(p.x, _left_module(p.body, a, x, q), p.b, p.a)
    if rule is XRule.PROP_DUPL_DEACT_L:
        return Cut(Exporter(p.x, _left_module(p.body, a, x, q), p.b, p.a), a, x, q)
    if rule is XRule.PROP_DUPL_L:
        left, right = _left_module(p.left, a, x, q), _left_module(p.right, a, x, q)
        if isinstance(p, Importer):
            return Importer(left, p.a, p.x, p.y, right)
        return Cut(left, p.a, p.x, right)
    if rule is XRule.CUTC_PROP_L:
        return Cut(p.left, p.a, x, q)
    if rule is XRule.PROP_R:
        return Exporter(q.x, _right_module(p, a, x, q.body), q.b, q.a)
    if rule is XRule.PROP_DUPL_DEACT_R:
        inner = Importer(_right_module(p, a, x, q.left), q.a, q.x, q.y, _right_module(p, a, x, q.right))
        return Cut(p, a, x, inner)
    if rule is XRule.PROP_DUPL_R:
        left, right = _right_module(p, a, x, q.left), _right_module(p, a, x, q.right)
        if isinstance(q, Importer):
            return Importer(left, q.a, q.x, q.y, right)
        return Cut(left, q.a, q.x, right)
    return Cut(p, a, q.x, q.right)


def x_step(t: Term, pos: Position, rule: XRule | str, options: RuleOptions = DEFAULT_OPTIONS) -> Term:
    rule = XRule(rule)
    return replace_at(t, pos, x_contract(subterm_at(t, pos), rule, options))


def x_normalize(
    t: Term,
    strategy: Strategy,
    fuel: int,
    *,
    options: RuleOptions = DEFAULT_OPTIONS,
    chooser: Chooser | None = None,
) -> Outcome:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    trace: list[TraceStep] = []
    for steps in range(fuel + 1):
        redexes = x_redexes(t, options)
        if not redexes:
            return NormalForm(t, steps, trace)
        if steps == fuel:
            break
        picked = strategy.choose(t, redexes, chooser)
        if picked is None:
            return Interrupted(t, steps, trace)
        t = x_step(t, picked.position, picked.rule, options)
        trace.append(TraceStep(steps + 1, picked.rule, picked.position, t))
        LOGGER.debug("X step %d: %s", steps + 1, picked)
    LOGGER.info("fuel of %d exhausted", fuel)
    return FuelExhausted(t, fuel, trace)
