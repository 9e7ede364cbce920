"""Simultaneous substitution: the contractum of the duplicating actions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from starx.terms import (
    Cut,
    CutL,
    CutR,
    DuplL,
    DuplR,
    Name,
    NameKind,
    Term,
    children,
    clone_fresh,
    fresh_name,
    free_names,
    index,
    names_of,
    principal_names,
    with_children,
)


class SubstitutionError(ValueError):
    pass


def _copies(t: Term) -> tuple[Term, dict[Name, Name], Term, dict[Name, Name]]:
    t1, m1 = index(t, names_of(t), 1)
    t2, m2 = index(t, names_of(t), 2)
    return clone_fresh(t1), m1, clone_fresh(t2), m2


def contract(
    t: Term,
    m1: dict[Name, Name],
    m2: dict[Name, Name],
    innames: Iterable[Name],
    outnames: Iterable[Name],
) -> Term:
    """Merge the two indexed copies of each listed name back into it."""
    for y in sorted(innames):
        t = DuplL(t, m1[y], m2[y], y)
    for b in sorted(outnames):
        t = DuplR(t, m1[b], m2[b], b)
    return t


def dup_subst_left(p: Term, a1: Name, a2: Name, x: Name, q: Term, *, a: Name | None = None) -> Term:
    if a1 == a2 or a1 not in names_of(p) or a2 not in names_of(p):
        raise SubstitutionError(f"{a1} and {a2} must be distinct free outnames of the target")
    if x not in names_of(q):
        raise SubstitutionError(f"{x} is not free in the substituted term")
    a = a if a is not None else fresh_name(NameKind.OUT, "a")
    kids = children(p)
    principal = principal_names(p)
    q_names = free_names(q)
    i_q, o_q = q_names.innames - {x}, q_names.outnames

    def copies() -> tuple[dict[Name, tuple[Term, Name]], dict, dict]:
        q1, m1, q2, m2 = _copies(q)
        return {a1: (q1, m1[x]), a2: (q2, m2[x])}, m1, m2

    if a1 in principal or a2 in principal:
        top, inner = (a1, a2) if a1 in principal else (a2, a1)
        pieces, m1, m2 = copies()
        q_top, x_top = pieces[top]
        q_in, x_in = pieces[inner]
        rebuilt = tuple(CutL(r, inner, x_in, q_in) if inner in names_of(r) else r for r in kids)
        if rebuilt == kids:
            raise SubstitutionError(f"{inner} does not occur below {top}")
        return contract(Cut(with_children(p, rebuilt), top, x_top, q_top), m1, m2, i_q, o_q)

    if len(kids) == 1:
        (r,) = kids
        return with_children(p, (CutL(DuplR(r, a1, a2, a), a, x, q),))

    if len(kids) == 2:
        r1, r2 = kids
        n1, n2 = names_of(r1), names_of(r2)
        if (a1 in n1 and a2 in n2) or (a2 in n1 and a1 in n2):
            pieces, m1, m2 = copies()
            left_name, right_name = (a1, a2) if a1 in n1 else (a2, a1)
            ql, xl = pieces[left_name]
            qr, xr = pieces[right_name]
            rebuilt = with_children(p, (CutL(r1, left_name, xl, ql), CutL(r2, right_name, xr, qr)))
            return contract(rebuilt, m1, m2, i_q, o_q)
        if a1 in n1 and a2 in n1:
            return with_children(p, (CutL(DuplR(r1, a1, a2, a), a, x, q), r2))
        if a1 in n2 and a2 in n2:
            return with_children(p, (r1, CutL(DuplR(r2, a1, a2, a), a, x, q)))

    raise SubstitutionError("no case of left simultaneous substitution applies")


def dup_subst_right(p: Term, a: Name, x1: Name, x2: Name, q: Term, *, x: Name | None = None) -> Term:
    if x1 == x2 or x1 not in names_of(q) or x2 not in names_of(q):
        raise SubstitutionError(f"{x1} and {x2} must be distinct free innames of the target")
    if a not in names_of(p):
        raise SubstitutionError(f"{a} is not free in the substituted term")
    x = x if x is not None else fresh_name(NameKind.IN, "x")
    kids = children(q)
    principal = principal_names(q)
    p_names = free_names(p)
    i_p, o_p = p_names.innames, p_names.outnames - {a}

    def copies() -> tuple[dict[Name, tuple[Term, Name]], dict, dict]:
        p1, m1, p2, m2 = _copies(p)
        return {x1: (p1, m1[a]), x2: (p2, m2[a])}, m1, m2

    if x1 in principal or x2 in principal:
        top, inner = (x1, x2) if x1 in principal else (x2, x1)
        pieces, m1, m2 = copies()
        p_top, a_top = pieces[top]
        p_in, a_in = pieces[inner]
        rebuilt = tuple(CutR(p_in, a_in, inner, r) if inner in names_of(r) else r for r in kids)
        if rebuilt == kids:
            raise SubstitutionError(f"{inner} does not occur below {top}")
        return contract(Cut(p_top, a_top, top, with_children(q, rebuilt)), m1, m2, i_p, o_p)

    if len(kids) == 1:
        (r,) = kids
        return with_children(q, (CutR(p, a, x, DuplL(r, x1, x2, x)),))

    if len(kids) == 2:
        r1, r2 = kids
        n1, n2 = names_of(r1), names_of(r2)
        if (x1 in n1 and x2 in n2) or (x2 in n1 and x1 in n2):
            pieces, m1, m2 = copies()
            left_name, right_name = (x1, x2) if x1 in n1 else (x2, x1)
            pl, al = pieces[left_name]
            pr, ar = pieces[right_name]
            rebuilt = with_children(q, (CutR(pl, al, left_name, r1), CutR(pr, ar, right_name, r2)))
            return contract(rebuilt, m1, m2, i_p, o_p)
        if x1 in n1 and x2 in n1:
            return with_children(q, (CutR(p, a, x, DuplL(r1, x1, x2, x)), r2))
        if x1 in n2 and x2 in n2:
            return with_children(q, (r1, CutR(p, a, x, DuplL(r2, x1, x2, x))))

    raise SubstitutionError("no case of right simultaneous substitution applies")


@dataclass(frozen=True)
class Module:
    """A cut with one side missing; ``hole`` is the name the missing side must provide."""

    side: Literal["L", "R"]
    hole: Name
    binder: Name
    term: Term


def left_module(a: Name, x: Name, q: Term) -> Module:
    return Module("L", a, x, q)


def right_module(p: Term, a: Name, x: Name) -> Module:
    return Module("R", x, a, p)


def modules_independent(m1: Module, m2: Module) -> bool:
    """Two modules commute when neither captures or supplies the other's hole."""
    if m1.hole == m2.hole:
        return False
    free1 = names_of(m1.term) - {m1.binder}
    free2 = names_of(m2.term) - {m2.binder}
    return m1.hole not in free2 and m2.hole not in free1
