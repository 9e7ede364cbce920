"""Simple types for X and *X terms."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Union

from starx.formulas import Arrow, Atom, Formula, Sequent, atoms, format_formula, format_sequent
from starx.schemas import DerivationNode, WitnessReport
from starx.services.reduction import DEFAULT_OPTIONS, RuleOptions, star_redexes, star_step
from starx.services.simplification import simplify
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
    Position,
    Term,
    check_linear,
    free_names,
    names_of,
)

LOGGER = logging.getLogger(__name__)


class TypeCheckError(Exception):
    def __init__(self, message: str, position: Position = ()) -> None:
        self.message = message
        self.position = position
        where = ".".join(str(i) for i in position) or "root"
        super().__init__(f"at {where}: {message}")


@dataclass(frozen=True)
class TypeVar:
    id: int


Type = Union[Atom, Arrow, TypeVar]

RULE_NAMES = {
    Capsule: "ax",
    Exporter: "→R",
    Importer: "→L",
    EraserL: "weak-L",
    EraserR: "weak-R",
    DuplL: "cont-L",
    DuplR: "cont-R",
}


def _rule_name(t: Term) -> str:
    return "cut" if isinstance(t, BaseCut) else RULE_NAMES[type(t)]


@dataclass
class Derivation:
    rule: str
    term: Term
    conclusion: Sequent
    premises: list["Derivation"] = field(default_factory=list)

    def rules_postorder(self) -> list[str]:
        out: list[str] = []
        for premise in self.premises:
            out.extend(premise.rules_postorder())
        out.append(self.rule)
        return out

    def format_tree(self, depth: int = 0) -> str:
        lines = [f"{'  ' * depth}({self.rule}) {format_sequent(self.conclusion)}"]
        lines.extend(p.format_tree(depth + 1) for p in self.premises)
        return "\n".join(lines)

    def to_schema(self) -> DerivationNode:
        return DerivationNode(
            rule=self.rule,
            sequent=format_sequent(self.conclusion),
            premises=[p.to_schema() for p in self.premises],
        )


@dataclass
class _Proto:
    rule: str
    term: Term
    context: dict[Name, Type]
    premises: list["_Proto"]


class _Unifier:
    def __init__(self) -> None:
        self.bindings: dict[int, Type] = {}
        self._ids = itertools.count()

    def fresh(self) -> TypeVar:
        return TypeVar(next(self._ids))

    def walk(self, t: Type) -> Type:
        while isinstance(t, TypeVar) and t.id in self.bindings:
            t = self.bindings[t.id]
        return t

    def resolve(self, t: Type) -> Type:
        t = self.walk(t)
        if isinstance(t, Arrow):
            return Arrow(self.resolve(t.left), self.resolve(t.right))
        return t

    def _occurs(self, var: TypeVar, t: Type) -> bool:
        t = self.walk(t)
        if t == var:
            return True
        if isinstance(t, Arrow):
            return self._occurs(var, t.left) or self._occurs(var, t.right)
        return False

    def unify(self, left: Type, right: Type, pos: Position) -> None:
        a, b = self.walk(left), self.walk(right)
        if a == b:
            return
        if isinstance(a, TypeVar) or isinstance(b, TypeVar):
            var, other = (a, b) if isinstance(a, TypeVar) else (b, a)
            if self._occurs(var, other):
                raise TypeCheckError(f"occurs check: {_show(var)} occurs in {_show(self.resolve(other))}", pos)
            self.bindings[var.id] = other
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.left, b.left, pos)
            self.unify(a.right, b.right, pos)
            return
        raise TypeCheckError(f"cannot match {_show(self.resolve(a))} with {_show(self.resolve(b))}", pos)


def _show(t: Type) -> str:
    if isinstance(t, TypeVar):
        return f"?{t.id}"
    if isinstance(t, Atom):
        return t.name
    left = _show(t.left)
    return f"({left})->{_show(t.right)}" if isinstance(t.left, Arrow) else f"{left}->{_show(t.right)}"


def _collect(t: Term, env: dict[Name, Type], u: _Unifier, pos: Position, shared: bool) -> _Proto:
    """Generate the equations of the unique rule at every node.

    With ``shared`` each conclusion keeps every name in scope, as in a
    context-sharing system; otherwise it holds exactly the free names.
    """

    def look(n: Name) -> Type:
        if n not in env:
            raise TypeCheckError(f"{n} is not in the context", pos)
        return env[n]

    def scoped(child: Term, i: int, extra: dict[Name, Type]) -> _Proto:
        return _collect(child, {**env, **extra}, u, pos + (i,), shared)

    premises: list[_Proto] = []
    if isinstance(t, Capsule):
        u.unify(look(t.x), look(t.a), pos)
    elif isinstance(t, Exporter):
        tx, tb = u.fresh(), u.fresh()
        premises.append(scoped(t.body, 0, {t.x: tx, t.b: tb}))
        u.unify(look(t.a), Arrow(tx, tb), pos)
    elif isinstance(t, Importer):
        ta, ty = u.fresh(), u.fresh()
        premises.append(scoped(t.left, 0, {t.a: ta}))
        premises.append(scoped(t.right, 1, {t.y: ty}))
        u.unify(look(t.x), Arrow(ta, ty), pos)
    elif isinstance(t, BaseCut):
        ta, tx = u.fresh(), u.fresh()
        premises.append(scoped(t.left, 0, {t.a: ta}))
        premises.append(scoped(t.right, 1, {t.x: tx}))
        u.unify(ta, tx, pos)
    elif isinstance(t, (EraserL, EraserR)):
        look(t.x if isinstance(t, EraserL) else t.a)
        premises.append(scoped(t.body, 0, {}))
    else:
        pair = (t.x1, t.x2) if isinstance(t, DuplL) else (t.a1, t.a2)
        source = look(t.x if isinstance(t, DuplL) else t.a)
        t1, t2 = u.fresh(), u.fresh()
        premises.append(scoped(t.body, 0, {pair[0]: t1, pair[1]: t2}))
        u.unify(t1, source, pos)
        u.unify(t2, source, pos)
    visible = env if shared else {n: env[n] for n in names_of(t) if n in env}
    return _Proto(_rule_name(t), t, dict(visible), premises)


class _Grounding:
    """Replaces leftover type variables by atoms unused elsewhere."""

    def __init__(self, u: _Unifier, taken: set[str]) -> None:
        self.u = u
        self.taken = taken
        self.names: dict[int, str] = {}
        self._counter = itertools.count()

    def __call__(self, t: Type) -> Formula:
        t = self.u.resolve(t)
        if isinstance(t, TypeVar):
            if t.id not in self.names:
                name = f"T{next(self._counter)}"
                while name in self.taken:
                    name = f"T{next(self._counter)}"
                self.taken.add(name)
                self.names[t.id] = name
            return Atom(self.names[t.id])
        if isinstance(t, Arrow):
            return Arrow(self(t.left), self(t.right))
        return t


def _finish(proto: _Proto, ground: _Grounding) -> Derivation:
    ctx = {n: ground(ty) for n, ty in proto.context.items()}
    sequent = Sequent({n: f for n, f in ctx.items() if n.is_in}, {n: f for n, f in ctx.items() if not n.is_in})
    return Derivation(proto.rule, proto.term, sequent, [_finish(p, ground) for p in proto.premises])


def _sequent_atoms(s: Sequent) -> set[str]:
    return {name for f in [*s.gamma.values(), *s.delta.values()] for name in atoms(f)}


def _require_linear(t: Term) -> None:
    diagnostics = check_linear(t)
    if diagnostics:
        first = diagnostics[0]
        raise TypeCheckError(f"term is not linear: {first.message}", first.position)


def typecheck_star(t: Term, s: Sequent) -> Derivation:
    _require_linear(t)
    names = free_names(t)
    for label, have, want in (("antecedent", set(s.gamma), names.innames), ("succedent", set(s.delta), names.outnames)):
        missing, extra = sorted(want - have), sorted(have - want)
        if missing or extra:
            parts = []
            if missing:
                parts.append("missing " + ", ".join(map(str, missing)))
            if extra:
                parts.append("unexpected " + ", ".join(map(str, extra)))
            raise TypeCheckError(f"{label} does not match the free names: {'; '.join(parts)}")
    u = _Unifier()
    proto = _collect(t, {**s.gamma, **s.delta}, u, (), shared=False)
    return _finish(proto, _Grounding(u, _sequent_atoms(s)))


def typecheck_x(t: Term, s: Sequent) -> Derivation:
    u = _Unifier()
    proto = _collect(t, {**s.gamma, **s.delta}, u, (), shared=True)
    return _finish(proto, _Grounding(u, _sequent_atoms(s)))


def infer_star(t: Term) -> Sequent:
    """Most general sequent, atoms numbered T0, T1, ... by first appearance."""
    _require_linear(t)
    u = _Unifier()
    env: dict[Name, Type] = {n: u.fresh() for n in sorted(names_of(t))}
    _collect(t, env, u, (), shared=False)
    ground = _Grounding(u, set())
    ordered = sorted(env)
    for n in [m for m in ordered if m.is_in] + [m for m in ordered if not m.is_in]:
        ground(env[n])
    return Sequent(
        {n: ground(env[n]) for n in ordered if n.is_in},
        {n: ground(env[n]) for n in ordered if not n.is_in},
    )


def witness_reduction_check(
    t: Term,
    s: Sequent,
    steps: int,
    seed: int,
    options: RuleOptions = DEFAULT_OPTIONS,
) -> WitnessReport:
    """Reduce at random and re-check the sequent after every step."""
    typecheck_star(t, s)
    rng = random.Random(seed)
    taken = 0
    while taken < steps:
        simplified = simplify(t)
        if simplified != t:
            try:
                typecheck_star(simplified, s)
            except TypeCheckError as exc:
                return WitnessReport(
                    steps_taken=taken,
                    ok=False,
                    violation=f"after simplification: {exc}",
                    final_term=format_term(simplified),
                )
            t = simplified
        redexes = star_redexes(t, options)
        if not redexes:
            break
        redex = rng.choice(redexes)
        t = star_step(t, redex.position, redex.rule, options)
        taken += 1
        try:
            typecheck_star(t, s)
        except TypeCheckError as exc:
            LOGGER.info("witness reduction violated by %s", redex)
            return WitnessReport(steps_taken=taken, ok=False, violation=f"{redex}: {exc}", final_term=format_term(t))
    return WitnessReport(steps_taken=taken, ok=True, final_term=format_term(t))


def format_type(f: Formula) -> str:
    return format_formula(f)
