from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from starx.services.congruence import alpha_equivalent, canonicalize
from starx.services.encode import SimulationOptions, simulate_star_in_x, simulate_x_in_star, star_to_x, x_to_star
from starx.services.graph import explore_graph
from starx.services.reduction import star_redexes, star_step
from starx.services.simplification import simp_redexes, simp_step, simplify
from starx.services.typecheck import TypeCheckError, infer_star, typecheck_star, typecheck_x, witness_reduction_check
from starx.services.xcalc import x_redexes, x_step
from starx.syntax import format_term, parse
from starx.terms import (
    Position,
    Term,
    binders,
    children,
    is_linear,
    is_x_term,
    logical_outnames,
    names_of,
    own_names,
    positions,
    size,
    subterm_at,
    subterm_with_principal,
)
from strategies import (
    linear_x_terms,
    reduced_star_terms,
    reduced_x_terms,
    star_terms,
    star_walks,
    x_terms,
)

WITH_CLOSURE = SimulationOptions(admin_closure=True)


def _typed(q: Term):
    try:
        return infer_star(q)
    except TypeCheckError:
        assume(False)


def _introduced_at(t: Term, name) -> list[Position]:
    found = []
    for pos in positions(t):
        node, captured = t, False
        for i in pos:
            captured = captured or name in binders(node)[i]
            node = children(node)[i]
        if not captured and name in own_names(node):
            found.append(pos)
    return found


@settings(max_examples=200, deadline=None)
@given(x_terms())
def test_encoding_is_linear_and_keeps_free_names(p) -> None:
    q = x_to_star(p)
    assert is_linear(q)
    assert names_of(q) == names_of(p)
    assert is_x_term(star_to_x(q))


@settings(max_examples=500, deadline=None)
@given(x_terms())
def test_erasing_an_encoding_gives_the_term_back(p) -> None:
    assert alpha_equivalent(star_to_x(x_to_star(p)), p)


@settings(max_examples=100, deadline=None)
@given(star_terms())
def test_star_steps_keep_free_names_and_linearity(q) -> None:
    for redex in star_redexes(q):
        nxt = star_step(q, redex.position, redex.rule)
        assert names_of(nxt) == names_of(q), redex
        assert is_linear(nxt), redex


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(st.one_of(linear_x_terms(), x_terms(max_depth=2)).map(x_to_star), st.integers(min_value=0, max_value=2**16))
def test_inferred_sequents_survive_random_reduction(q, seed) -> None:
    s = _typed(q)
    report = witness_reduction_check(q, s, steps=20, seed=seed)
    assert report.ok, report.violation


@settings(max_examples=200, deadline=None)
@given(linear_x_terms())
def test_linear_x_terms_are_typable(p) -> None:
    s = infer_star(x_to_star(p))
    typecheck_star(x_to_star(p), s)
    typecheck_x(p, s)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(x_terms())
def test_x_term_has_the_type_of_its_encoding(p) -> None:
    s = _typed(x_to_star(p))
    typecheck_x(p, s)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(star_terms(max_depth=2), st.data())
def test_erasure_keeps_the_type_of_reduced_terms(q, data) -> None:
    s = _typed(q)
    reduced = data.draw(star_walks(q))
    typecheck_star(reduced, s)
    typecheck_x(star_to_x(reduced), s)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(star_terms(max_depth=2), st.data())
def test_simplification_keeps_names_and_types(q, data) -> None:
    s = _typed(q)
    reduced = data.draw(star_walks(q, max_steps=6))
    simplified = simplify(reduced)
    assert names_of(simplified) == names_of(reduced)
    assert not simp_redexes(simplified)
    typecheck_star(simplified, s)


@settings(max_examples=100, deadline=None)
@given(linear_x_terms(max_depth=2).filter(lambda p: size(p) <= 10))
def test_typed_terms_have_finite_acyclic_graphs(p) -> None:
    for calculus, start in (("star", x_to_star(p)), ("x", p)):
        summary = explore_graph(start, max_nodes=50000, fuel=10000, calculus=calculus).summary()
        assert summary.acyclic, (calculus, format_term(p))
        assert not summary.truncated_by_nodes and not summary.truncated_by_fuel


@settings(max_examples=200, deadline=None)
@given(reduced_x_terms())
def test_every_x_step_is_simulated(p) -> None:
    for redex in x_redexes(p):
        result = simulate_x_in_star(p, x_step(p, redex.position, redex.rule), simulation=WITH_CLOSURE)
        assert result.success, (format_term(p), str(redex), result.message)


@settings(max_examples=200, deadline=None)
@given(reduced_star_terms())
def test_every_star_step_is_simulated(q) -> None:
    for redex in star_redexes(q):
        result = simulate_star_in_x(q, star_step(q, redex.position, redex.rule), simulation=WITH_CLOSURE)
        assert result.success, (format_term(q), str(redex), result.message)


@settings(max_examples=200, deadline=None)
@given(reduced_star_terms(max_steps=6), st.data())
def test_simplification_order_does_not_matter(q, data) -> None:
    t = q
    while redexes := simp_redexes(t):
        pos, _ = data.draw(st.sampled_from(redexes))
        t = simp_step(t, pos)
    assert canonicalize(t) == canonicalize(simplify(q))


@settings(max_examples=300, deadline=None)
@given(reduced_star_terms())
def test_terms_have_a_logical_outname(q) -> None:
    assert logical_outnames(q)
    assert logical_outnames(q) <= names_of(q)


@settings(max_examples=300, deadline=None)
@given(reduced_star_terms())
def test_principal_subterm_matches_a_full_scan(q) -> None:
    for name in names_of(q):
        (expected,) = _introduced_at(q, name)
        assert subterm_with_principal(q, name) == (expected, subterm_at(q, expected))


@settings(max_examples=300, deadline=None)
@given(reduced_star_terms())
def test_printed_terms_parse_back(q) -> None:
    assert alpha_equivalent(parse(format_term(q)), q)


@settings(max_examples=300, deadline=None)
@given(reduced_star_terms())
def test_canonicalize_is_idempotent(q) -> None:
    once = canonicalize(q)
    assert canonicalize(once) == once
