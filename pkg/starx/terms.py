from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Union


class NameKind(str, Enum):
    IN = "in"
    OUT = "out"


@dataclass(frozen=True, order=True)
class Name:
    """An inname or an outname.

    Names parsed from text carry uid 0; every name minted by ``fresh_name``
    carries a uid unique to the process, so bound names never clash with
    free ones.
    """

    kind: NameKind
    base: str
    uid: int = 0

    @property
    def is_in(self) -> bool:
        return self.kind is NameKind.IN

    def __str__(self) -> str:
        return self.base if self.is_in else f"'{self.base}"


_UIDS = itertools.count(1)


def fresh_name(kind: NameKind, base: str) -> Name:
    return Name(kind, base, next(_UIDS))


def freshen(name: Name) -> Name:
    return fresh_name(name.kind, name.base)


def inname(base: str, uid: int = 0) -> Name:
    return Name(NameKind.IN, base, uid)


def outname(base: str, uid: int = 0) -> Name:
    return Name(NameKind.OUT, base, uid)


@dataclass(frozen=True)
class Capsule:
    x: Name
    a: Name


@dataclass(frozen=True)
class Exporter:
    x: Name
    body: "Term"
    b: Name
    a: Name


@dataclass(frozen=True)
class Importer:
    left: "Term"
    a: Name
    x: Name
    y: Name
    right: "Term"


@dataclass(frozen=True)
class BaseCut:
    left: "Term"
    a: Name
    x: Name
    right: "Term"


@dataclass(frozen=True)
class Cut(BaseCut):
    pass


@dataclass(frozen=True)
class CutL(BaseCut):
    pass


@dataclass(frozen=True)
class CutR(BaseCut):
    pass


@dataclass(frozen=True)
class EraserL:
    x: Name
    body: "Term"


@dataclass(frozen=True)
class EraserR:
    body: "Term"
    a: Name


@dataclass(frozen=True)
class DuplL:
    body: "Term"
    x1: Name
    x2: Name
    x: Name


@dataclass(frozen=True)
class DuplR:
    body: "Term"
    a1: Name
    a2: Name
    a: Name


Term = Union[Capsule, Exporter, Importer, Cut, CutL, CutR, EraserL, EraserR, DuplL, DuplR]
Position = tuple[int, ...]

STRUCTURAL = (EraserL, EraserR, DuplL, DuplR)
ACTIVE_CUTS = (CutL, CutR)


class RenameError(ValueError):
    pass


class IndexingError(ValueError):
    pass


class PositionError(LookupError):
    pass


@dataclass(frozen=True)
class NameSets:
    innames: frozenset[Name]
    outnames: frozenset[Name]

    @property
    def all(self) -> frozenset[Name]:
        return self.innames | self.outnames

    def __contains__(self, name: object) -> bool:
        return name in self.innames or name in self.outnames

    @classmethod
    def of(cls, names: Iterable[Name]) -> "NameSets":
        names = list(names)
        return cls(
            frozenset(n for n in names if n.is_in),
            frozenset(n for n in names if not n.is_in),
        )


@dataclass(frozen=True)
class Diagnostic:
    position: Position
    name: Name | None
    message: str

    def __str__(self) -> str:
        where = ".".join(str(i) for i in self.position) or "root"
        return f"at {where}: {self.message}"


class NonLinearTermError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics) or "term is not linear")


def is_structural(t: Term) -> bool:
    return isinstance(t, STRUCTURAL)


def is_x_term(t: Term) -> bool:
    return not any(is_structural(s) for s in subterms(t))


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, Capsule):
        return ()
    if isinstance(t, (Importer, BaseCut)):
        return (t.left, t.right)
    return (t.body,)


def with_children(t: Term, kids: tuple[Term, ...]) -> Term:
    if isinstance(t, Capsule):
        return t
    if isinstance(t, (Importer, BaseCut)):
        left, right = kids
        return replace(t, left=left, right=right)
    (body,) = kids
    return replace(t, body=body)


def binders(t: Term) -> tuple[tuple[Name, ...], ...]:
    """Names bound in each immediate subterm, in field order."""
    if isinstance(t, Capsule):
        return ()
    if isinstance(t, Exporter):
        return ((t.x, t.b),)
    if isinstance(t, Importer):
        return ((t.a,), (t.y,))
    if isinstance(t, BaseCut):
        return ((t.a,), (t.x,))
    if isinstance(t, DuplL):
        return ((t.x1, t.x2),)
    if isinstance(t, DuplR):
        return ((t.a1, t.a2),)
    return ((),)


def own_names(t: Term) -> tuple[Name, ...]:
    """Names occurring free at the node itself."""
    if isinstance(t, Capsule):
        return (t.x, t.a)
    if isinstance(t, (Exporter, EraserR, DuplR)):
        return (t.a,)
    if isinstance(t, (Importer, EraserL, DuplL)):
        return (t.x,)
    return ()


def subterms(t: Term) -> Iterator[Term]:
    yield t
    for child in children(t):
        yield from subterms(child)


def positions(t: Term) -> list[Position]:
    out: list[Position] = []

    def walk(s: Term, pos: Position) -> None:
        out.append(pos)
        for i, child in enumerate(children(s)):
            walk(child, pos + (i,))

    walk(t, ())
    return out


def subterm_at(t: Term, pos: Position) -> Term:
    current = t
    for i in pos:
        kids = children(current)
        if i >= len(kids):
            raise PositionError(f"position {pos} does not resolve in term")
        current = kids[i]
    return current


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    kids = list(children(t))
    head, rest = pos[0], pos[1:]
    if head >= len(kids):
        raise PositionError(f"position {pos} does not resolve in term")
    kids[head] = replace_at(kids[head], rest, new)
    return with_children(t, tuple(kids))


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


@lru_cache(maxsize=65536)
def _free(t: Term) -> frozenset[Name]:
    names = set(own_names(t))
    for child, bound in zip(children(t), binders(t)):
        names |= _free(child) - set(bound)
    return frozenset(names)


def free_names(t: Term) -> NameSets:
    return NameSets.of(_free(t))


def names_of(t: Term) -> frozenset[Name]:
    """N(t): all free names."""
    return _free(t)


def occurrences(t: Term) -> Counter[Name]:
    """Multiplicity of every free name."""
    counts: Counter[Name] = Counter(own_names(t))
    for child, bound in zip(children(t), binders(t)):
        inner = occurrences(child)
        for name in bound:
            inner.pop(name, None)
        counts.update(inner)
    return counts


def logical_outnames(t: Term) -> frozenset[Name]:
    """Free outnames whose occurrence is not introduced by weakening."""
    if isinstance(t, (Capsule, Exporter)):
        return frozenset({t.a})
    if isinstance(t, (Importer, BaseCut)):
        return (logical_outnames(t.left) - {t.a}) | logical_outnames(t.right)
    if isinstance(t, DuplR):
        inner = logical_outnames(t.body)
        merged = {t.a} if inner & {t.a1, t.a2} else set()
        return (inner - {t.a1, t.a2}) | merged
    return logical_outnames(t.body)


def check_linear(t: Term) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []

    def walk(s: Term, pos: Position) -> None:
        bound_sets = binders(s)
        kids = children(s)
        for i, (child, bound) in enumerate(zip(kids, bound_sets)):
            if len(set(bound)) < len(bound):
                diagnostics.append(Diagnostic(pos, bound[0], f"binder {bound[0]} is declared twice"))
            inner = occurrences(child)
            for name in set(bound):
                count = inner.get(name, 0)
                if count == 0:
                    diagnostics.append(Diagnostic(pos, name, f"binder {name} binds no occurrence"))
                elif count > 1:
                    diagnostics.append(Diagnostic(pos, name, f"binder {name} binds {count} occurrences"))
            for name in own_names(s):
                if name in _free(child) and name not in bound:
                    diagnostics.append(Diagnostic(pos + (i,), name, _own_clash_message(s, name)))
        if len(kids) == 2:
            left = _free(kids[0]) - set(bound_sets[0])
            right = _free(kids[1]) - set(bound_sets[1])
            for name in sorted(left & right):
                diagnostics.append(Diagnostic(pos, name, f"{name} is free in both subterms"))
        own = own_names(s)
        for name in set(own):
            if own.count(name) > 1:
                diagnostics.append(Diagnostic(pos, name, f"{name} occurs twice at one node"))
        for bound in bound_sets:
            for name in bound:
                if name in _free(s):
                    diagnostics.append(Diagnostic(pos, name, f"{name} is both bound and free"))
        for i, child in enumerate(kids):
            walk(child, pos + (i,))

    walk(t, ())
    if not diagnostics:
        for name, count in sorted(occurrences(t).items()):
            if count > 1:
                diagnostics.append(Diagnostic((), name, f"{name} occurs {count} times"))
    return diagnostics


def _own_clash_message(s: Term, name: Name) -> str:
    if isinstance(s, (EraserL, EraserR)):
        return f"{name} occurs free in eraser body"
    if isinstance(s, (DuplL, DuplR)):
        return f"duplicator source {name} occurs free in its body"
    if isinstance(s, Exporter):
        return f"exported name {name} occurs free in the exporter body"
    return f"imported name {name} occurs free in a subterm"


def is_linear(t: Term) -> bool:
    return not check_linear(t)


def require_linear(t: Term) -> None:
    diagnostics = check_linear(t)
    if diagnostics:
        raise NonLinearTermError(diagnostics)


def _substitute(t: Term, env: Mapping[Name, Name], make_binder: Callable[[Name], Name] | None) -> Term:
    def own(n: Name) -> Name:
        return env.get(n, n)

    def scope(child: Term, bound: tuple[Name, ...]) -> tuple[Term, tuple[Name, ...]]:
        inner = dict(env)
        new_bound = []
        for b in bound:
            if make_binder is not None:
                nb = inner[b] = make_binder(b)
            else:
                inner.pop(b, None)
                nb = b
            new_bound.append(nb)
        if make_binder is None and inner:
            targets = {v: k for k, v in inner.items()}
            for b in bound:
                if b in targets and targets[b] in _free(child):
                    raise RenameError(f"renaming {targets[b]} to {b} would be captured by a binder")
        return _substitute(child, inner, make_binder), tuple(new_bound)

    if isinstance(t, Capsule):
        return Capsule(own(t.x), own(t.a))
    if isinstance(t, Exporter):
        body, (x, b) = scope(t.body, (t.x, t.b))
        return Exporter(x, body, b, own(t.a))
    if isinstance(t, Importer):
        left, (a,) = scope(t.left, (t.a,))
        right, (y,) = scope(t.right, (t.y,))
        return Importer(left, a, own(t.x), y, right)
    if isinstance(t, BaseCut):
        left, (a,) = scope(t.left, (t.a,))
        right, (x,) = scope(t.right, (t.x,))
        return type(t)(left, a, x, right)
    if isinstance(t, EraserL):
        return EraserL(own(t.x), _substitute(t.body, env, make_binder))
    if isinstance(t, EraserR):
        return EraserR(_substitute(t.body, env, make_binder), own(t.a))
    if isinstance(t, DuplL):
        body, (x1, x2) = scope(t.body, (t.x1, t.x2))
        return DuplL(body, x1, x2, own(t.x))
    body, (a1, a2) = scope(t.body, (t.a1, t.a2))
    return DuplR(body, a1, a2, own(t.a))


def rename(t: Term, new: Name, old: Name) -> Term:
    """Replace the unique free occurrence of ``old`` by ``new``."""
    if new.kind is not old.kind:
        raise RenameError(f"cannot rename {old} to {new}: kinds differ")
    if old not in _free(t):
        raise RenameError(f"{old} is not free in the term")
    if new != old and (new in _free(t) or new in bound_names(t)):
        raise RenameError(f"{new} is not fresh for the term")
    if new == old:
        return t
    return _substitute(t, {old: new}, None)


def rename_free(t: Term, mapping: Mapping[Name, Name]) -> Term:
    """Rename free occurrences, possibly merging several names into one."""
    for old, new in mapping.items():
        if old.kind is not new.kind:
            raise RenameError(f"cannot rename {old} to {new}: kinds differ")
    return _substitute(t, {k: v for k, v in mapping.items() if k != v}, None)


def clone_fresh(t: Term) -> Term:
    """An alpha-variant of ``t`` whose binders are all fresh."""
    return _substitute(t, {}, freshen)


def relabel_binders(t: Term, make: Callable[[Name], Name]) -> Term:
    """Rename every binder with ``make``, visiting binders in preorder."""
    return _substitute(t, {}, make)


def bound_names(t: Term) -> frozenset[Name]:
    return frozenset(n for s in subterms(t) for bound in binders(s) for n in bound)


def index(t: Term, names: NameSets | Iterable[Name], i: int) -> tuple[Term, dict[Name, Name]]:
    """Replace each listed free name by a fresh name suffixed with ``i``."""
    listed = sorted(names.all if isinstance(names, NameSets) else set(names))
    missing = [n for n in listed if n not in _free(t)]
    if missing:
        raise IndexingError(f"cannot index names that are not free: {', '.join(map(str, missing))}")
    mapping = {n: fresh_name(n.kind, f"{n.base}_{i}") for n in listed}
    return _substitute(t, mapping, None), mapping


def l_principal(t: Term) -> tuple[Name, ...]:
    if isinstance(t, Capsule):
        return (t.x, t.a)
    if isinstance(t, Exporter):
        return (t.a,)
    if isinstance(t, Importer):
        return (t.x,)
    return ()


def s_principal(t: Term) -> Name | None:
    if isinstance(t, (EraserL, DuplL)):
        return t.x
    if isinstance(t, (EraserR, DuplR)):
        return t.a
    return None


def principal_names(t: Term) -> tuple[Name, ...]:
    s = s_principal(t)
    return l_principal(t) + ((s,) if s is not None else ())


def is_l_principal(t: Term, name: Name) -> bool:
    return name in l_principal(t)


def subterm_with_principal(t: Term, name: Name) -> tuple[Position, Term]:
    if name not in _free(t):
        raise RenameError(f"{name} is not free in the term")
    pos: Position = ()
    current = t
    while name not in principal_names(current):
        for i, (child, bound) in enumerate(zip(children(current), binders(current))):
            if name in _free(child) and name not in bound:
                pos, current = pos + (i,), child
                break
        else:
            raise RenameError(f"no subterm introduces {name}")
    return pos, current


def wrap_erasers(t: Term, innames: Iterable[Name], outnames: Iterable[Name]) -> Term:
    """``I ⊙ t ⊙ O`` with innames nearest the body, each list in name order."""
    for x in sorted(innames):
        t = EraserL(x, t)
    for a in sorted(outnames):
        t = EraserR(t, a)
    return t
