from __future__ import annotations

import logging
from dataclasses import dataclass

from starx.services.congruence import split_chain, wrap_chain
from starx.terms import (
    DuplL,
    DuplR,
    EraserL,
    EraserR,
    Position,
    Term,
    positions,
    rename,
    replace_at,
    subterm_at,
)

LOGGER = logging.getLogger(__name__)


class SimplificationError(ValueError):
    pass


@dataclass(frozen=True)
class SimplificationStep:
    position: Position
    rule: str
    term: Term


def _collapse(node: Term) -> Term | None:
    """Drop a duplicator one of whose copies is erased somewhere in the chain below it."""
    if not isinstance(node, (DuplL, DuplR)):
        return None
    chain, base = split_chain(node.body)
    if isinstance(node, DuplL):
        pair, source, eraser = (node.x1, node.x2), node.x, EraserL
    else:
        pair, source, eraser = (node.a1, node.a2), node.a, EraserR
    for i, link in enumerate(chain):
        if isinstance(link, eraser):
            erased = link.x if isinstance(link, EraserL) else link.a
            if erased in pair:
                survivor = pair[1] if erased == pair[0] else pair[0]
                body = wrap_chain(chain[:i] + chain[i + 1 :], base)
                return rename(body, source, survivor)
    return None


def simp_redexes(t: Term) -> list[tuple[Position, str]]:
    found = []
    for pos in positions(t):
        node = subterm_at(t, pos)
        if _collapse(node) is not None:
            found.append((pos, "simp-L" if isinstance(node, DuplL) else "simp-R"))
    return found


def simp_step(t: Term, pos: Position) -> Term:
    collapsed = _collapse(subterm_at(t, pos))
    if collapsed is None:
        raise SimplificationError(f"no simplification applies at {pos}")
    return replace_at(t, pos, collapsed)


def simplify_traced(t: Term) -> tuple[Term, list[SimplificationStep]]:
    steps: list[SimplificationStep] = []
    while True:
        redexes = simp_redexes(t)
        if not redexes:
            return t, steps
        pos, rule = redexes[0]
        t = simp_step(t, pos)
        steps.append(SimplificationStep(pos, rule, t))


def simplify(t: Term) -> Term:
    result, steps = simplify_traced(t)
    if steps:
        LOGGER.debug("simplification removed %d duplicator(s)", len(steps))
    return result
