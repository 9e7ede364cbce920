"""Canonical representatives of the structural congruence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from starx.terms import (
    DuplL,
    DuplR,
    EraserL,
    EraserR,
    Name,
    Term,
    binders,
    children,
    fresh_name,
    is_structural,
    own_names,
    relabel_binders,
    with_children,
)

Structural = EraserL | EraserR | DuplL | DuplR


def alpha_normalize(t: Term) -> Term:
    counter = itertools.count(1)
    return relabel_binders(t, lambda b: Name(b.kind, "x" if b.is_in else "a", -next(counter)))


def alpha_equivalent(t: Term, u: Term) -> bool:
    return alpha_normalize(t) == alpha_normalize(u)


def canonicalize(t: Term) -> Term:
    # Normalizing first gives bound names a structural order for the sort keys.
    return alpha_normalize(_sort_structure(alpha_normalize(t)))


def congruent(t: Term, u: Term) -> bool:
    return canonicalize(t) == canonicalize(u)


def split_chain(t: Term) -> tuple[list[Structural], Term]:
    """The maximal run of erasers and duplicators at the top of ``t``, and what it sits on."""
    chain: list[Structural] = []
    while is_structural(t):
        chain.append(t)
        t = t.body
    return chain, t


def wrap_chain(chain: Sequence[Structural], body: Term) -> Term:
    for node in reversed(chain):
        body = with_children(node, (body,))
    return body


def _source(node: Structural) -> Name:
    return node.x if isinstance(node, (EraserL, DuplL)) else node.a


def _pair(node: DuplL | DuplR) -> tuple[Name, Name]:
    return (node.x1, node.x2) if isinstance(node, DuplL) else (node.a1, node.a2)


def _make_dupl(body: Term, n1: Name, n2: Name, source: Name) -> Term:
    return DuplL(body, n1, n2, source) if source.is_in else DuplR(body, n1, n2, source)


def _make_eraser(body: Term, name: Name) -> Term:
    return EraserL(name, body) if name.is_in else EraserR(body, name)


def occurrence_order(t: Term) -> dict[Name, int]:
    """Preorder rank of the first free occurrence of every free name."""
    order: dict[Name, int] = {}

    def walk(s: Term, bound: frozenset[Name]) -> None:
        for name in own_names(s):
            if name not in bound:
                order.setdefault(name, len(order))
        for child, extra in zip(children(s), binders(s)):
            walk(child, bound | set(extra))

    walk(t, frozenset())
    return order


def _sort_structure(t: Term) -> Term:
    if is_structural(t):
        chain, base = split_chain(t)
        return _rebuild_chain(chain, _sort_structure(base))
    return with_children(t, tuple(_sort_structure(c) for c in children(t)))


@dataclass
class _Forest:
    trees: dict[Name, list[Name]]
    eraser_leaves: list[Name]
    root_erasers: list[Name]


def _forest(chain: Sequence[Structural], occ: dict[Name, int]) -> _Forest | None:
    dupls = {_source(n): _pair(n) for n in chain if isinstance(n, (DuplL, DuplR))}
    erased = [_source(n) for n in chain if isinstance(n, (EraserL, EraserR))]
    bound = {m for pair in dupls.values() for m in pair}
    if len(dupls) != sum(isinstance(n, (DuplL, DuplR)) for n in chain) or len(set(erased)) != len(erased):
        return None
    for name in bound:
        if name not in occ and name not in dupls and name not in erased:
            return None

    def leaves(source: Name) -> list[Name]:
        out: list[Name] = []
        for name in dupls[source]:
            out.extend(leaves(name) if name in dupls else [name])
        return out

    trees = {s: leaves(s) for s in dupls if s not in bound}
    return _Forest(
        trees=trees,
        eraser_leaves=[n for n in erased if n in bound],
        root_erasers=[n for n in erased if n not in bound],
    )


def _rebuild_chain(chain: Sequence[Structural], base: Term) -> Term:
    occ = occurrence_order(base)
    forest = _forest(chain, occ)
    if forest is None:
        return wrap_chain(chain, base)

    def leaf_key(name: Name) -> tuple:
        return (0, occ[name]) if name in occ else (1, name)

    result = base
    for name in sorted(forest.eraser_leaves):
        result = _make_eraser(result, name)

    roots: list[tuple[tuple, Name]] = []
    for source, leaves in forest.trees.items():
        roots.append(((0, min(leaf_key(n) for n in leaves)), source))
    for name in forest.root_erasers:
        roots.append(((1, name), name))

    for _, name in sorted(roots, key=lambda item: item[0]):
        if name not in forest.trees:
            result = _make_eraser(result, name)
            continue
        leaves = sorted(forest.trees[name], key=leaf_key)
        current = leaves[0]
        for i, leaf in enumerate(leaves[1:], start=2):
            target = name if i == len(leaves) else fresh_name(name.kind, name.base)
            result = _make_dupl(result, current, leaf, target)
            current = target
    return result


def float_structure(t: Term) -> Term:
    """Lift erasers and duplicators out of constructors that do not bind their names."""
    if is_structural(t):
        chain, base = split_chain(t)
        return wrap_chain(chain, float_structure(base))
    lifted: list[Structural] = []
    kids = []
    for child, bound in zip(children(t), binders(t)):
        chain, base = split_chain(float_structure(child))
        kept: list[Structural] = []
        blocked = set(bound)
        for node in chain:
            if _source(node) in blocked:
                kept.append(node)
                if isinstance(node, (DuplL, DuplR)):
                    blocked |= set(_pair(node))
            else:
                lifted.append(node)
        kids.append(wrap_chain(kept, base))
    return wrap_chain(lifted, with_children(t, tuple(kids)))
