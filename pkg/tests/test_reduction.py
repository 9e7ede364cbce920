import pytest

from starx.catalog import load_term
from starx.services.congruence import alpha_equivalent
from starx.services.reduction import (
    FuelExhausted,
    NormalForm,
    RuleNotApplicableError,
    RuleOptions,
    StarRule,
    contract,
    star_normalize,
    star_redexes,
    star_step,
)
from starx.services.strategy import Strategy, StrategyError, StrategyKind
from starx.syntax import parse
from starx.terms import Cut, CutL, DuplR, is_linear, names_of, subterms

APPLIED_PEIRCE = (
    "cut(exp(z,dupR(imp(exp(x,eraR(cap(x,'a1),'b),'b,'g),'g,z,y,cap(y,'a2)),'a1,'a2,'a),'a,'d),"
    "'d,w,imp(exp(v,eraR(cap(v,'e),'f),'f,'e0),'e0,w,r,cap(r,'h)))"
)


def _rules(t) -> set[str]:
    return {r.rule for r in star_redexes(t)}


def _root_rules(redexes) -> set[str]:
    return {r.rule for r in redexes if r.position == ()}


def test_renaming_cut_offers_both_renamings_and_no_activation() -> None:
    t = parse("cut(cap(y,'a),'a,x,cap(x,'b))")
    assert _rules(t) == {"ren-L", "ren-R"}
    expected = parse("cap(y,'b)")
    assert contract(t, StarRule.REN_L) == expected
    assert contract(t, StarRule.REN_R) == expected


def test_lafont_pair_depends_on_the_strategy() -> None:
    t = load_term("lafont")
    assert _rules(t) == {"act-L", "act-R"}
    left = star_normalize(t, Strategy(StrategyKind.LEFT_PRIORITY), 100)
    right = star_normalize(t, Strategy(StrategyKind.RIGHT_PRIORITY), 100)
    assert isinstance(left, NormalForm) and isinstance(right, NormalForm)
    assert left.term == parse("eraR(eraL(v,cap(u,'b)),'c)")
    assert right.term == parse("eraR(eraL(u,cap(v,'c)),'b)")
    assert [s.rule for s in left.trace] == ["act-L", "eras-L"]
    assert [s.rule for s in right.trace] == ["act-R", "eras-R"]


def test_insertion_association_switch() -> None:
    t = parse("cut(exp(y,cap(y,'b),'b,'a),'a,x,imp(cap(u,'g),'g,x,z,cap(z,'c)))")
    assert "ei-insert" in _rules(t)
    left = contract(t, StarRule.EI_INSERT, RuleOptions(insert_assoc="left"))
    right = contract(t, StarRule.EI_INSERT, RuleOptions(insert_assoc="right"))
    assert isinstance(left, Cut) and isinstance(left.left, Cut)
    assert isinstance(right, Cut) and isinstance(right.right, Cut)
    assert names_of(left) == names_of(right) == names_of(t)


def test_cutc_rules_replace_propagation() -> None:
    t = parse("cutL(cut(cap(u,'a),'a,x,cap(x,'b)),'b,y,cap(y,'c))")
    assert _root_rules(star_redexes(t)) == {"cutc-prop-L"}
    assert _root_rules(star_redexes(t, RuleOptions(cutc=False))) == {"prop-L"}
    assert alpha_equivalent(contract(t, StarRule.CUTC_PROP_L), parse("cut(cap(u,'a),'a,y,cap(y,'c))"))


def test_duplicating_action_keeps_the_interface() -> None:
    t = parse("cutL(dupR(imp(eraR(cap(u,'a1),'c),'c,v,y,cap(y,'a2)),'a1,'a2,'a),'a,x,imp(cap(w,'d),'d,x,z,cap(z,'e)))")
    assert _rules(t) == {"dupl-L"}
    result = contract(t, StarRule.DUPL_L)
    assert is_linear(result)
    assert names_of(result) == names_of(t)
    assert isinstance(result, DuplR)
    assert sum(isinstance(s, CutL) for s in subterms(result)) == 2


def test_simplification_steps_are_traced_without_fuel() -> None:
    t = parse("cut(cap(u,'a),'a,x,dupL(eraL(x2,cap(x1,'b)),x1,x2,x))")
    outcome = star_normalize(t, Strategy(), 10)
    assert isinstance(outcome, NormalForm)
    assert outcome.term == parse("cap(u,'b)")
    assert outcome.steps == 1
    assert [s.rule for s in outcome.trace] == ["simp-L", "ren-L"]


def test_fuel_exhaustion_is_reported() -> None:
    outcome = star_normalize(load_term("loop"), Strategy(), 1, options=RuleOptions(cutc=False))
    assert isinstance(outcome, FuelExhausted)
    assert outcome.steps == 1
    with pytest.raises(ValueError):
        star_normalize(load_term("loop"), Strategy(), 0)


def test_every_step_preserves_free_names_and_linearity() -> None:
    for t in (parse(APPLIED_PEIRCE), load_term("lafont"), load_term("loop")):
        for redex in star_redexes(t):
            nxt = star_step(t, redex.position, redex.rule)
            assert names_of(nxt) == names_of(t), redex
            assert is_linear(nxt), redex


def test_applied_peirce_normalizes_under_both_priorities() -> None:
    t = parse(APPLIED_PEIRCE)
    for kind in (StrategyKind.LEFT_PRIORITY, StrategyKind.RIGHT_PRIORITY):
        outcome = star_normalize(t, Strategy(kind), 10000)
        assert isinstance(outcome, NormalForm)
        assert not star_redexes(outcome.term)
        assert names_of(outcome.term) == names_of(t)


def test_contracting_an_inapplicable_rule_fails() -> None:
    t = parse("cut(cap(y,'a),'a,x,cap(x,'b))")
    with pytest.raises(RuleNotApplicableError):
        contract(t, StarRule.ACT_L)


def test_strategy_parsing() -> None:
    assert Strategy.parse("random:42") == Strategy(StrategyKind.RANDOM, 42)
    assert str(Strategy.parse("right-priority")) == "right-priority"
    with pytest.raises(StrategyError):
        Strategy.parse("sideways")
    with pytest.raises(StrategyError):
        Strategy.parse("left-priority:3")


def test_random_strategy_is_reproducible() -> None:
    t = parse(APPLIED_PEIRCE)
    first = star_normalize(t, Strategy.parse("random:42"), 500)
    second = star_normalize(t, Strategy.parse("random:42"), 500)
    assert [s.rule for s in first.trace] == [s.rule for s in second.trace]
