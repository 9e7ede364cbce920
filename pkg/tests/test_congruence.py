from starx.services.congruence import (
    alpha_equivalent,
    alpha_normalize,
    canonicalize,
    congruent,
    float_structure,
    occurrence_order,
    split_chain,
)
from starx.syntax import format_term, parse
from starx.terms import EraserL, inname

SHARED = "imp(cap(y1,'a),'a,y2,w,imp(cap(w,'b),'b,x2,z,cap(z,'c)))"


def test_alpha_variants_normalize_identically() -> None:
    first = parse("exp(x,cap(x,'b),'b,'a)")
    second = parse("exp(y,cap(y,'g),'g,'a)")
    assert alpha_equivalent(first, second)
    assert alpha_normalize(first) == alpha_normalize(second)
    assert not alpha_equivalent(first, parse("exp(y,cap(y,'g),'g,'c)"))


def test_duplicator_trees_with_the_same_leaves_are_congruent() -> None:
    left_nested = parse(f"dupL(dupL({SHARED},y1,y2,x1),x1,x2,x)")
    right_nested = parse(f"dupL(dupL({SHARED},y2,x2,k),y1,k,x)")
    assert congruent(left_nested, right_nested)
    assert canonicalize(left_nested) == canonicalize(right_nested)


def test_independent_erasers_commute() -> None:
    assert congruent(parse("eraL(u,eraR(cap(x,'a),'b))"), parse("eraR(eraL(u,cap(x,'a)),'b)"))
    assert not congruent(parse("cap(u,'a)"), parse("cap(v,'a)"))


def test_canonical_form_is_stable() -> None:
    t = parse(f"dupL(dupL({SHARED},y2,x2,k),y1,k,x)")
    once = canonicalize(t)
    assert canonicalize(once) == once
    assert format_term(once).startswith("dupL(dupL(")


def test_split_chain_and_occurrence_order() -> None:
    chain, base = split_chain(parse("eraL(u,eraR(cap(x,'a),'b))"))
    assert len(chain) == 2
    assert isinstance(chain[0], EraserL)
    assert base == parse("cap(x,'a)")
    order = occurrence_order(parse(SHARED))
    assert order[inname("y2")] < order[inname("y1")] < order[inname("x2")]


def test_float_structure_lifts_erasers_out_of_binders_that_ignore_them() -> None:
    floated = float_structure(parse("exp(x,eraL(u,cap(x,'b)),'b,'a)"))
    assert alpha_equivalent(floated, parse("eraL(u,exp(x,cap(x,'b),'b,'a))"))


def test_float_structure_keeps_structure_on_bound_names() -> None:
    t = parse("exp(x,eraR(cap(x,'c),'b),'b,'a)")
    assert float_structure(t) == t
