import pytest
from hypothesis import given, strategies as st

from obfusbench.fol import (
    And, ArityError, Bottom, Const, Exists, ForAll, Iff, Implies, Not, Or, ParseError,
    Pred, Problem, Top, Var, export_problem, free_vars, parse_formula, render_formula,
)
from oracles import random_formula

x, y = Var("x"), Var("y")


def P(name, *args):
    return Pred(name, args)


@pytest.mark.parametrize("text, expected", [
    ("forall x. (Human(x) -> Mammal(x))",
     ForAll("x", Implies(P("Human", x), P("Mammal", x)))),
    ("P() & ~P()", And(P("P"), Not(P("P")))),
    ("forall x. forall y. P(x,y)", ForAll("x", ForAll("y", P("P", x, y)))),
    ("Human(bonnie)", P("Human", Const("bonnie"))),
])
def test_parse_examples(text, expected):
    assert parse_formula(text) == expected


def test_precedence_and_right_associative_implication():
    f = parse_formula("~A() & B() | C() -> D() -> E() <-> F()")
    a, b, c, d, e, g = (P(n) for n in "ABCDEF")
    assert f == Iff(Implies(Or(And(Not(a), b), c), Implies(d, e)), g)


def test_whitespace_insensitive():
    assert parse_formula("forall x.(P(x)->Q(x,x))") == parse_formula(" forall  x . ( P( x ) -> Q(x , x) ) ")


def test_syntax_error_reports_offset_and_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse_formula("P(x")
    assert info.value.byte_offset == 3
    assert info.value.expected
    assert isinstance(info.value, SyntaxError)


def test_arity_clash():
    with pytest.raises(ArityError):
        parse_formula("P(a) & P(a, b)")


def test_unbound_identifiers_are_constants_unless_declared():
    assert parse_formula("P(x)") == P("P", Const("x"))
    assert free_vars(parse_formula("P(x)")) == set()
    assert free_vars(parse_formula("P(x)", ["x"])) == {"x"}


@pytest.mark.parametrize("f, fv", [
    (P("P", x), {"x"}),
    (ForAll("x", P("P", x)), set()),
    (And(ForAll("x", P("P", x)), P("Q", y)), {"y"}),
])
def test_free_vars(f, fv):
    assert free_vars(f) == fv


def test_render_examples():
    assert render_formula(Not(Not(P("P"))), "ascii") == "~~P()"
    assert render_formula(ForAll("x", Implies(P("Human", x), P("Mammal", x))), "prover9") \
        == "all x (Human(x) -> Mammal(x))."
    assert render_formula(Not(Exists("x", Not(P("P", x)))), "nl-template") == (
        "it is not the case that there exists an entity x such that "
        "it is not the case that P holds of x")


def test_top_bottom_prover9():
    assert render_formula(Implies(Not(P("P")), Bottom()), "prover9") == "-P -> $F."
    assert render_formula(Top(), "prover9") == "$T."


def test_unknown_style():
    with pytest.raises(ValueError):
        render_formula(P("P"), "latex")


formulas = st.integers(0, 2 ** 32).map(lambda s: random_formula(__import__("random").Random(s), 6))


@given(formulas)
def test_ascii_round_trip(f):
    assert parse_formula(render_formula(f, "ascii")) == f


@given(formulas)
def test_unicode_round_trip(f):
    assert parse_formula(render_formula(f, "unicode")) == f


@given(formulas, formulas)
def test_nl_template_injective(f, g):
    if f != g:
        assert render_formula(f, "nl-template") != render_formula(g, "nl-template")


@given(formulas)
def test_render_deterministic(f):
    for style in ("ascii", "unicode", "prover9", "nl-template"):
        assert render_formula(f, style) == render_formula(f, style)


def test_problem_needs_a_premise():
    with pytest.raises(ValueError):
        Problem((), P("P"))


def test_problem_signature_conflict():
    with pytest.raises(ArityError):
        Problem((P("P", Const("a")),), P("P", Const("a"), Const("b")))


def test_export_problem_blocks():
    prob = Problem((parse_formula("forall x. (Human(x) -> Mammal(x))"),), parse_formula("Mammal(a)"))
    text = export_problem(prob)
    assert text.startswith("formulas(assumptions).\n")
    assert "formulas(goals).\nMammal(a).\nend_of_list.\n" in text
