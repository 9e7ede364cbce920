"""Hypothesis strategies for random X and *X terms."""

from typing import Callable, Sequence

from hypothesis import strategies as st

from starx.services.encode import x_to_star
from starx.services.reduction import star_redexes, star_step
from starx.services.strategy import Redex
from starx.services.xcalc import x_redexes, x_step
from starx.terms import Capsule, Cut, CutL, CutR, Exporter, Importer, Name, NameKind, Term, fresh_name, inname, outname

FREE_IN = (inname("u"), inname("v"))
FREE_OUT = (outname("c"), outname("d"))
CUTS = (Cut, CutL, CutR)


@st.composite
def _x_term(draw, depth: int, ins: tuple[Name, ...], outs: tuple[Name, ...]) -> Term:
    shape = "cap" if depth <= 0 else draw(st.sampled_from(["cap", "exp", "imp", "cut"]))
    if shape == "cap":
        return Capsule(draw(st.sampled_from(ins)), draw(st.sampled_from(outs)))
    if shape == "exp":
        x, b = fresh_name(NameKind.IN, "x"), fresh_name(NameKind.OUT, "b")
        body = draw(_x_term(depth - 1, ins + (x,), outs + (b,)))
        return Exporter(x, body, b, draw(st.sampled_from(outs)))
    a = fresh_name(NameKind.OUT, "a")
    left = draw(_x_term(depth - 1, ins, outs + (a,)))
    if shape == "imp":
        y = fresh_name(NameKind.IN, "y")
        right = draw(_x_term(depth - 1, ins + (y,), outs))
        return Importer(left, a, draw(st.sampled_from(ins)), y, right)
    x = fresh_name(NameKind.IN, "x")
    right = draw(_x_term(depth - 1, ins + (x,), outs))
    return draw(st.sampled_from(CUTS))(left, a, x, right)


def x_terms(max_depth: int = 3) -> st.SearchStrategy[Term]:
    """Pure X terms over the free names u, v, 'c and 'd, active cuts included."""
    return st.integers(min_value=0, max_value=max_depth).flatmap(lambda d: _x_term(d, FREE_IN, FREE_OUT))


def star_terms(max_depth: int = 3) -> st.SearchStrategy[Term]:
    """Linear *X terms, built by encoding random X terms."""
    return x_terms(max_depth).map(x_to_star)


@st.composite
def _split(draw, names: tuple[Name, ...]) -> tuple[tuple[Name, ...], tuple[Name, ...]]:
    shuffled = tuple(draw(st.permutations(names)))
    k = draw(st.integers(min_value=0, max_value=len(shuffled)))
    return shuffled[:k], shuffled[k:]


@st.composite
def _linear_x_term(draw, depth: int, ins: tuple[Name, ...], out: Name) -> Term:
    # every name in ins occurs exactly once, out is the only free outname
    if depth <= 0:
        shape = "cap" if len(ins) == 1 else "exp" if not ins else "imp"
    else:
        shapes = ["exp", "cut"] + (["imp"] if ins else []) + (["cap"] if len(ins) == 1 else [])
        shape = draw(st.sampled_from(shapes))
    if shape == "cap":
        return Capsule(ins[0], out)
    if shape == "exp":
        x, b = fresh_name(NameKind.IN, "x"), fresh_name(NameKind.OUT, "b")
        return Exporter(x, draw(_linear_x_term(depth - 1, ins + (x,), b)), b, out)
    a = fresh_name(NameKind.OUT, "a")
    if shape == "imp":
        if depth <= 0:
            principal, left_ins, right_ins = ins[0], ins[1:2], ins[2:]
        else:
            principal = draw(st.sampled_from(ins))
            left_ins, right_ins = draw(_split(tuple(n for n in ins if n != principal)))
        y = fresh_name(NameKind.IN, "y")
        left = draw(_linear_x_term(depth - 1, left_ins, a))
        right = draw(_linear_x_term(depth - 1, right_ins + (y,), out))
        return Importer(left, a, principal, y, right)
    x = fresh_name(NameKind.IN, "x")
    left_ins, right_ins = draw(_split(ins))
    left = draw(_linear_x_term(depth - 1, left_ins, a))
    right = draw(_linear_x_term(depth - 1, right_ins + (x,), out))
    return draw(st.sampled_from(CUTS))(left, a, x, right)


def linear_x_terms(max_depth: int = 3) -> st.SearchStrategy[Term]:
    """X terms without sharing or vacuous binders; all of them are typable *X terms too."""
    return st.tuples(
        st.integers(min_value=0, max_value=max_depth),
        st.lists(st.sampled_from(FREE_IN), unique=True, max_size=len(FREE_IN)),
    ).flatmap(lambda args: _linear_x_term(args[0], tuple(args[1]), FREE_OUT[0]))


@st.composite
def _walk(
    draw,
    t: Term,
    redexes_of: Callable[[Term], Sequence[Redex]],
    step_at: Callable[[Term, tuple[int, ...], str], Term],
    max_steps: int,
) -> Term:
    for _ in range(draw(st.integers(min_value=0, max_value=max_steps))):
        redexes = redexes_of(t)
        if not redexes:
            break
        redex = draw(st.sampled_from(redexes))
        t = step_at(t, redex.position, redex.rule)
    return t


def star_walks(t: Term, max_steps: int = 4) -> st.SearchStrategy[Term]:
    """Terms reached from ``t`` by random *X steps, without simplifying in between."""
    return _walk(t, star_redexes, star_step, max_steps)


def x_walks(t: Term, max_steps: int = 3) -> st.SearchStrategy[Term]:
    return _walk(t, x_redexes, x_step, max_steps)


def reduced_star_terms(max_depth: int = 2, max_steps: int = 4) -> st.SearchStrategy[Term]:
    return star_terms(max_depth).flatmap(lambda q: star_walks(q, max_steps))


def reduced_x_terms(max_depth: int = 2, max_steps: int = 3) -> st.SearchStrategy[Term]:
    return x_terms(max_depth).flatmap(lambda p: x_walks(p, max_steps))
