from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from starx.terms import Position, Term


class StrategyError(ValueError):
    pass


class StrategyKind(str, Enum):
    LEFT_PRIORITY = "left-priority"
    RIGHT_PRIORITY = "right-priority"
    RANDOM = "random"
    INTERACTIVE = "interactive"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class Redex:
    position: Position
    rule: str

    def __str__(self) -> str:
        where = ".".join(str(i) for i in self.position) or "root"
        return f"{self.rule} at {where}"


Chooser = Callable[[Term, Sequence[Redex]], "int | None"]

# Rules preferred by each priority; everything else ranks after them.
_LEFT_FIRST = ("simp-L", "simp-R", "ren-L", "cap-ren", "act-L")
_RIGHT_FIRST = ("simp-L", "simp-R", "ren-R", "cap-ren", "act-R")


@dataclass
class Strategy:
    kind: StrategyKind = StrategyKind.LEFT_PRIORITY
    seed: int | None = None
    _rng: random.Random = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._rng = random.Random(self.seed)

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        """``left-priority``, ``right-priority``, ``random:SEED``, ``interactive`` or ``exhaustive``."""
        head, _, tail = text.strip().partition(":")
        try:
            kind = StrategyKind(head)
        except ValueError as exc:
            raise StrategyError(f"unknown strategy {text!r}") from exc
        seed = None
        if tail:
            if kind is not StrategyKind.RANDOM:
                raise StrategyError(f"strategy {head} takes no argument")
            try:
                seed = int(tail)
            except ValueError as exc:
                raise StrategyError(f"random seed must be an integer, got {tail!r}") from exc
        return cls(kind, seed)

    def __str__(self) -> str:
        if self.kind is StrategyKind.RANDOM and self.seed is not None:
            return f"random:{self.seed}"
        return self.kind.value

    def choose(self, term: Term, redexes: Sequence[Redex], chooser: Chooser | None = None) -> Redex | None:
        """Pick a redex, or ``None`` when an interactive chooser declines."""
        if not redexes:
            return None
        if self.kind is StrategyKind.LEFT_PRIORITY:
            return _by_priority(redexes, _LEFT_FIRST)
        if self.kind is StrategyKind.RIGHT_PRIORITY:
            return _by_priority(redexes, _RIGHT_FIRST)
        if self.kind is StrategyKind.RANDOM:
            return self._rng.choice(list(redexes))
        if self.kind is StrategyKind.INTERACTIVE:
            if chooser is None:
                raise StrategyError("interactive strategy needs a chooser")
            picked = chooser(term, redexes)
            if picked is None:
                return None
            if not 0 <= picked < len(redexes):
                raise StrategyError(f"choice {picked} out of range 0..{len(redexes) - 1}")
            return redexes[picked]
        raise StrategyError("exhaustive strategy explores the whole reduction graph instead of choosing")


def _by_priority(redexes: Sequence[Redex], preferred: tuple[str, ...]) -> Redex:
    """Outermost-leftmost redex, ties at one position broken by ``preferred``."""

    def rank(r: Redex) -> tuple[int, Position, int]:
        order = preferred.index(r.rule) if r.rule in preferred else len(preferred)
        return (len(r.position), r.position, order)

    return min(redexes, key=rank)
