import random

import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from obfusbench.fol import (
    CATALOG, And, BudgetExceeded, Const, CounterModel, EquivalentUpTo, Exists,
    FOLObfuscator, ForAll, Implies, InvalidPosition, Not, ObfuscationStalled, Or, Pred,
    Problem, PropositionallyEquivalent, RewriteRule, RuleId, RuleNotApplicable,
    SignatureMismatch, Var, apply_rewrite, check_equivalence, enumerate_applicable,
    evaluate, is_equivalent, obfuscate_formula, obfuscate_premises, parse_formula,
    verdict_to_dict,
)
from obfusbench.fol.syntax import replace_at, subformula
from oracles import SIGNATURE, brute_equivalent, holds, interpretations, random_formula

x = Var("x")


def P(name, *args):
    return Pred(name, args)


HUMANS = ForAll("x", Implies(P("Human", x), P("Mammal", x)))


# rules

def test_quantifier_duality_example():
    f = ForAll("x", P("P", x))
    assert apply_rewrite(RewriteRule(RuleId.QUANTIFIER_DUALITY), f) == Not(Exists("x", Not(P("P", x))))


def test_double_negation_introduction():
    assert apply_rewrite(RewriteRule("DoubleNegation", "backward"), P("P")) == Not(Not(P("P")))


def test_contraposition_under_quantifier():
    got = apply_rewrite(RewriteRule(RuleId.CONTRAPOSITION), HUMANS, (0,))
    assert got == ForAll("x", Implies(Not(P("Mammal", x)), Not(P("Human", x))))


def test_rule_not_applicable():
    with pytest.raises(RuleNotApplicable):
        apply_rewrite(RewriteRule(RuleId.CONTRAPOSITION), P("P"))


def test_invalid_position():
    with pytest.raises(InvalidPosition):
        apply_rewrite(RewriteRule("DoubleNegation", "backward"), P("P"), (0, 1))


def test_rule_directions_validated():
    with pytest.raises(ValueError):
        RewriteRule(RuleId.ABSORB, "sideways")
    assert str(RewriteRule(RuleId.ABSORB)) == "Absorb/forward"


def test_catalog_covers_every_rule_id():
    assert {r.id for r in CATALOG} == set(RuleId)


def _sites(f):
    return {(str(r), pos) for r, pos in enumerate_applicable(f)}


def test_enumerate_de_morgan_and():
    assert ("DeMorganAnd/forward", ()) in _sites(Not(And(P("P"), P("Q"))))


def test_enumerate_atom():
    sites = _sites(P("P"))
    assert ("DoubleNegation/backward", ()) in sites
    assert ("TautologyInject/forward", ()) in sites
    assert not any(r.startswith("Contraposition") for r, _ in sites)


def test_enumerate_implication():
    sites = _sites(Implies(P("P"), P("Q")))
    for rule in ("ImplToDisj/forward", "Contraposition/forward", "ImplAsConj/forward"):
        assert (rule, ()) in sites


def test_enumerate_is_preorder_then_catalog_order():
    sites = enumerate_applicable(Implies(P("P"), P("Q")))
    positions = [pos for _, pos in sites]
    assert positions == sorted(positions, key=lambda p: (len(p) > 0, p))
    order = {r: i for i, r in enumerate(CATALOG)}
    root = [order[r] for r, pos in sites if pos == ()]
    assert root == sorted(root)


def test_tautology_witness_stays_closed():
    # under no quantifier, an atom with x would leave x free
    f = And(P("R"), ForAll("x", P("P", x)))
    pool = [P("P", x), P("R")]
    g = apply_rewrite(RewriteRule(RuleId.TAUTOLOGY_INJECT), f, (0,), pool=pool)
    assert g.left == And(P("R"), Or(P("R"), Not(P("R"))))
    with pytest.raises(RuleNotApplicable):
        apply_rewrite(RewriteRule(RuleId.TAUTOLOGY_INJECT), f, (0,), witness=P("P", x))


seeds = st.integers(0, 2 ** 32)


@settings(max_examples=150)
@given(seeds, st.integers(0, 10 ** 6))
def test_every_site_is_sound_against_brute_force(seed, pick):
    f = random_formula(random.Random(seed), 4)
    sites = enumerate_applicable(f)
    rule, pos = sites[pick % len(sites)]
    g = apply_rewrite(rule, f, pos)
    assert brute_equivalent(f, g, max_domain=2)


@settings(max_examples=150)
@given(seeds, st.integers(0, 10 ** 6))
def test_rewrite_changes_only_the_site(seed, pick):
    f = random_formula(random.Random(seed), 4)
    sites = enumerate_applicable(f)
    rule, pos = sites[pick % len(sites)]
    g = apply_rewrite(rule, f, pos)
    assert subformula(g, pos) != subformula(f, pos)
    # everything outside the site is untouched
    assert replace_at(g, pos, subformula(f, pos)) == f


# equivalence checker

def test_material_implication_propositional():
    v = check_equivalence(parse_formula("P() -> Q()"), parse_formula("~P() | Q()"))
    assert isinstance(v, PropositionallyEquivalent)


def test_converse_counter_model():
    v = check_equivalence(parse_formula("P() -> Q()"), parse_formula("Q() -> P()"))
    assert isinstance(v, CounterModel)
    assert v.assignment == {"P": True, "Q": False}


def test_quantifier_duality_up_to_three():
    v = check_equivalence(ForAll("x", P("P", x)), Not(Exists("x", Not(P("P", x)))), 3)
    assert v == EquivalentUpTo(3)


def test_counter_model_needs_domain_two():
    f = parse_formula("exists x. P(x)")
    g = parse_formula("forall x. P(x)")
    v = check_equivalence(f, g, 3)
    assert isinstance(v, CounterModel) and v.domain_size == 2
    assert evaluate(f, v.interpretation) != evaluate(g, v.interpretation)


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        check_equivalence(parse_formula("P(a)"), parse_formula("P(a, a)"))


def test_budget_exceeded_reports_progress():
    f = parse_formula("forall x. forall y. Q(x, y)")
    with pytest.raises(BudgetExceeded) as info:
        check_equivalence(f, f, 3, budget=100, engine="enumerate")
    assert info.value.largest_completed == 2


def test_open_formulas_rejected():
    with pytest.raises(ValueError):
        check_equivalence(parse_formula("P(x)", ["x"]), parse_formula("P(a)"))


def test_verdict_to_dict():
    v = check_equivalence(parse_formula("P(a)"), parse_formula("~P(a)"), 1)
    d = verdict_to_dict(v)
    assert d["kind"] == "counter_model" and d["domain_size"] == 1


@settings(max_examples=120)
@given(seeds, seeds)
def test_engines_agree_with_brute_force(s1, s2):
    f = random_formula(random.Random(s1), 3)
    g = random_formula(random.Random(s2), 3)
    want = brute_equivalent(f, g, max_domain=2)
    for engine in ("enumerate", "sat"):
        v = check_equivalence(f, g, 2, engine=engine)
        assert is_equivalent(v) == want
        if isinstance(v, CounterModel):
            i = v.interpretation
            preds = {k: frozenset(i.predicates.get(k, ())) for k in SIGNATURE}
            consts = {"a": i.constants.get("a", 0)}
            assert holds(f, preds, consts, i.domain_size) != holds(g, preds, consts, i.domain_size)


@settings(max_examples=60)
@given(seeds, seeds)
def test_symmetric(s1, s2):
    f = random_formula(random.Random(s1), 3)
    g = random_formula(random.Random(s2), 3)
    assert type(check_equivalence(f, g, 2)) is type(check_equivalence(g, f, 2))


def test_oracle_enumerates_all_interpretations():
    # P/1, Q/2, R/0 and one constant over a 2-element domain
    assert sum(1 for _ in interpretations(2)) == 4 * 16 * 2 * 2


# obfuscation

BASE = Problem((HUMANS, P("Human", Const("bonnie"))), P("Mammal", Const("bonnie")))


def test_obfuscate_premises_example():
    obf, traces = obfuscate_premises(Problem((HUMANS,), P("Mammal", Const("a"))), 42, 4)
    assert len(traces[0]) >= 4
    assert is_equivalent(check_equivalence(HUMANS, obf.premises[0], 3))


def test_conclusion_and_label_untouched():
    prob = Problem(BASE.premises, BASE.conclusion, label=False)
    obf, _ = obfuscate_premises(prob, 7)
    assert obf.conclusion == prob.conclusion and obf.label is False


def test_trace_replays_exactly():
    obf, traces = obfuscate_premises(BASE, 3, 5)
    for base, got, trace in zip(BASE.premises, obf.premises, traces):
        assert trace.replay(base) == got


def test_deterministic():
    assert obfuscate_premises(BASE, 11) == obfuscate_premises(BASE, 11)
    assert obfuscate_premises(BASE, 11)[0] != obfuscate_premises(BASE, 12)[0]


def test_forced_single_rule():
    g, trace = obfuscate_formula(P("P"), random.Random(0), 1,
                                 catalog=(RewriteRule("DoubleNegation", "backward"),))
    assert g == Not(Not(P("P"))) and len(trace) == 1


def test_stall_is_reported():
    with pytest.raises(ObfuscationStalled):
        obfuscate_formula(P("P"), random.Random(0), 4,
                          catalog=(RewriteRule(RuleId.CONTRAPOSITION),))


def test_min_rules_validated():
    with pytest.raises(ValueError):
        obfuscate_premises(BASE, 0, min_rules=0)


@settings(max_examples=60)
@given(seeds, seeds)
def test_obfuscation_sound_against_brute_force(fs, seed):
    f = random_formula(random.Random(fs), 3)
    obf, traces = obfuscate_premises(Problem((f,), P("R")), seed, 4)
    assert len(traces[0]) >= 4
    assert brute_equivalent(f, obf.premises[0], max_domain=2)
    assert traces[0].replay(f) == obf.premises[0]


# estimator

def test_estimator_contract():
    est = FOLObfuscator(seed=5, min_rules=4)
    assert clone(est).get_params() == est.get_params()
    with pytest.raises(AttributeError):
        est.transform([BASE])
    out = est.fit_transform([BASE, BASE])
    assert est.n_samples_seen_ == 2 and est.signature_["Human"] == 1
    assert all(r.verified for r in out)
    # sample streams are independent of batch position
    assert out[0].problem != out[1].problem
    assert FOLObfuscator(seed=5).fit([BASE]).transform([BASE])[0] == out[0]


def test_estimator_rejects_bad_samples():
    with pytest.raises(TypeError):
        FOLObfuscator().fit(["forall x. P(x)"])
    with pytest.raises(TypeError):
        FOLObfuscator(seed=True).fit([BASE])
