from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from starx.terms import Name


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Arrow:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Arrow]


def arrow(*parts: Formula) -> Formula:
    """Right-nested implication ``A -> B -> ... -> Z``."""
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Arrow(part, result)
    return result


def format_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    left = format_formula(f.left)
    if isinstance(f.left, Arrow):
        left = f"({left})"
    return f"{left}->{format_formula(f.right)}"


def atoms(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    return atoms(f.left) | atoms(f.right)


@dataclass
class Sequent:
    gamma: dict[Name, Formula] = field(default_factory=dict)
    delta: dict[Name, Formula] = field(default_factory=dict)

    def domain(self) -> frozenset[Name]:
        return frozenset(self.gamma) | frozenset(self.delta)


def _format_context(entries: dict[Name, Formula]) -> str:
    return ", ".join(f"{name}:{format_formula(f)}" for name, f in sorted(entries.items()))


def format_sequent(s: Sequent) -> str:
    left = _format_context(s.gamma)
    right = _format_context(s.delta)
    return f"{left} |- {right}".strip()
