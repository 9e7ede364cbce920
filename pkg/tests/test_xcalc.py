import pytest

from starx.services.congruence import alpha_equivalent
from starx.services.reduction import NormalForm, RuleOptions
from starx.services.strategy import Strategy, StrategyKind
from starx.services.xcalc import (
    XCalculusError,
    XRule,
    freshly_introduces,
    x_contract,
    x_normalize,
    x_redexes,
)
from starx.syntax import parse
from starx.terms import Cut, CutL, Exporter, inname, is_l_principal, names_of, outname, subterms


def _x(text: str):
    return parse(text, allow_structural=False)


def _rules(t) -> set[str]:
    return {r.rule for r in x_redexes(t)}


def _root_rules(redexes) -> set[str]:
    return {r.rule for r in redexes if r.position == ()}


def test_cap_ren() -> None:
    t = _x("cut(cap(y,'a),'a,x,cap(x,'b))")
    assert _rules(t) == {"cap-ren"}
    assert x_contract(t, XRule.CAP_REN) == _x("cap(y,'b)")


def test_vacuous_cut_names_activate_on_both_sides() -> None:
    t = _x("cut(cap(u,'b),'a,x,cap(v,'c))")
    assert _rules(t) == {"act-L", "act-R"}
    left = x_normalize(t, Strategy(StrategyKind.LEFT_PRIORITY), 10)
    right = x_normalize(t, Strategy(StrategyKind.RIGHT_PRIORITY), 10)
    assert left.term == _x("cap(u,'b)")
    assert right.term == _x("cap(v,'c)")
    assert [s.rule for s in left.trace] == ["act-L", "eras-L"]


def test_freshly_introduces() -> None:
    exporter = _x("exp(x,cap(x,'b),'b,'a)")
    assert freshly_introduces(exporter, outname("a"))
    shared = _x("exp(x,cap(x,'a),'b,'a)")
    assert not freshly_introduces(shared, outname("a"))
    importer = _x("imp(cap(u,'a),'a,x,y,cap(y,'b))")
    assert freshly_introduces(importer, inname("x"))
    reused = _x("imp(cap(x,'a),'a,x,y,cap(y,'b))")
    assert not freshly_introduces(reused, inname("x"))


def test_fresh_introduction_matches_l_principality_on_linear_terms() -> None:
    for text in (
        "exp(x,cap(x,'b),'b,'a)",
        "imp(cap(u,'a),'a,x,y,cap(y,'b))",
        "cap(x,'a)",
        "cut(cap(u,'a),'a,x,cap(x,'b))",
    ):
        t = _x(text)
        for name in names_of(t):
            assert freshly_introduces(t, name) == is_l_principal(t, name), (text, name)


def test_gc_drops_a_module_whose_name_is_absent() -> None:
    t = _x("cutL(imp(cap(u,'g),'g,w,y,cap(y,'c)),'a,x,cap(x,'d))")
    assert _rules(t) == {"gc-L"}
    assert x_contract(t, XRule.GC_L) == t.left


def test_prop_dupl_copies_the_module_into_both_subterms() -> None:
    t = _x("cutL(imp(cap(u,'a),'g,w,y,cap(y,'a)),'a,x,cap(x,'d))")
    assert _rules(t) == {"prop-dupl-L"}
    result = x_contract(t, XRule.PROP_DUPL_L)
    copies = [s for s in subterms(result) if isinstance(s, CutL)]
    assert len(copies) == 2
    assert copies[0].x != copies[1].x
    assert names_of(result) == names_of(t)


def test_prop_dupl_deact_keeps_the_exported_name_available() -> None:
    t = _x("cutL(exp(y,cap(y,'a),'b,'a),'a,x,cap(x,'d))")
    assert _rules(t) == {"prop-dupl-deact-L"}
    result = x_contract(t, XRule.PROP_DUPL_DEACT_L)
    assert isinstance(result, Cut)
    assert isinstance(result.left, Exporter)
    assert isinstance(result.left.body, CutL)


def test_cutc_switch() -> None:
    t = _x("cutL(cut(cap(u,'a),'a,x,cap(x,'b)),'b,y,cap(y,'c))")
    assert _root_rules(x_redexes(t)) == {"cutc-prop-L"}
    assert _root_rules(x_redexes(t, RuleOptions(cutc=False))) == {"prop-dupl-L"}
    assert alpha_equivalent(x_contract(t, XRule.CUTC_PROP_L), _x("cut(cap(u,'a),'a,y,cap(y,'c))"))


def test_exporter_importer_insertion_normalizes() -> None:
    t = _x("cut(exp(y,cap(y,'b),'b,'a),'a,x,imp(cap(u,'g),'g,x,z,cap(z,'c)))")
    assert _rules(t) == {"exp-imp-ins"}
    outcome = x_normalize(t, Strategy(), 100)
    assert isinstance(outcome, NormalForm)
    assert outcome.term == _x("cap(u,'c)")


def test_structural_nodes_are_rejected() -> None:
    with pytest.raises(XCalculusError):
        x_redexes(parse("eraL(u,cap(x,'a))"))
    with pytest.raises(XCalculusError):
        x_contract(_x("cap(x,'a)"), XRule.CAP_REN)
