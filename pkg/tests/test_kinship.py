import json

import pytest
from hypothesis import given, strategies as st
from sklearn.base import clone

from obfusbench.kinship import (
    DEFINITIONS, Ambiguous, CanonicalRelation, ChainAssumptions, FamilyGraph, Inconsistent,
    KinshipObfuscator, MalformedPossessive, NoSubstitutableWord, UnknownRelationWord,
    VocabularyGap, apply_entry, default_table, find_sites, load_table, parse_chain,
    parse_puzzle, resolve_chain, resolve_puzzle, substitute_once, verify_entry, verify_kinship,
)
from obfusbench.kinship.vocabulary import MALE, canonical_word, is_a

TABLE = default_table()


def words(chain):
    return [(s.word, s.only) for s in chain.steps]


def name(text, **kw):
    return resolve_chain(parse_chain(text), **kw).name


# parsing

def test_parse_possessive_chain():
    c = parse_chain("sister-in-law's husband of B")
    assert words(c) == [("sister-in-law", False), ("husband", False)]
    assert (c.anchor.kind, c.anchor.name) == ("person", "B")


def test_parse_single_step():
    assert words(parse_chain("father of B")) == [("father", False)]


def test_parse_only_qualifier_and_squashed_spelling():
    c = parse_chain("greatgrandfather's only grandson of B")
    assert words(c) == [("great-grandfather", False), ("grandson", True)]


def test_parse_of_chain_applies_innermost_first():
    c = parse_chain("son of only son of my grandfather")
    assert words(c) == [("grandfather", False), ("son", True), ("son", False)]
    assert c.anchor.kind == "speaker"


def test_step_spans_point_into_the_text():
    text = "sister-in-law's husband of B"
    assert [text[slice(*s.span)] for s in parse_chain(text).steps] == ["sister-in-law", "husband"]


@pytest.mark.parametrize("bad, err", [
    ("xyzzy of B", UnknownRelationWord),
    ("father's of B", MalformedPossessive),
    ("'s father of B", MalformedPossessive),
])
def test_parse_errors(bad, err):
    with pytest.raises(err):
        parse_chain(bad)


@pytest.mark.parametrize("spelling, canon", [
    ("Grand Father", "grandfather"), ("daughterinlaw", "daughter-in-law"),
    ("Sister inlaw", "sister-in-law"), ("greatgrandfather", "great-grandfather"),
])
def test_spelling_normalization(spelling, canon):
    assert canonical_word(spelling) == canon


# resolution

def test_only_son_of_grandfather_is_brother():
    p = "Pointing towards a boy V said He is the son of only son of my grandfather, How is that boy related to V?"
    assert resolve_puzzle(p) == (CanonicalRelation("brother"),)


def test_wife_of_grandfathers_only_son_is_mother():
    base = "D is the wife of C, C is the father of F. How is D related to F?"
    obf = "D is the wife of C, C is the grandfather's only son of F. How is D related to F?"
    assert resolve_puzzle(base) == resolve_puzzle(obf) == (CanonicalRelation("mother"),)


def test_l2_grandfather_entry_in_the_pointing_puzzle():
    p = ("Pointing towards a boy V said He is the son of only son of my greatgrandfather's "
         "only son, How is that boy related to V?")
    assert resolve_puzzle(p)[0].name == "brother"


def test_father_in_context_graph():
    g = FamilyGraph()
    x, y = g.person("X"), g.add_person(MALE)
    g.add_parent_edge(y, x)
    assert resolve_chain(parse_chain("father of X"), g).name == "father"


@pytest.mark.parametrize("text, expected", [
    ("parent's parent of B", "grandparent"),
    ("spouse's spouse of B", "self"),
    ("mother's husband of B", "father"),
    ("father's brother of B", "paternal-uncle"),
    ("uncle of B", "uncle"),
    ("son's son's son of B", "great-grandson"),
])
def test_compositions(text, expected):
    assert name(text) == expected


def test_relation_gender():
    assert CanonicalRelation("aunt").gender == "female"
    assert CanonicalRelation("cousin").gender is None


def test_errors():
    with pytest.raises(Ambiguous):
        name("child's father of B")
    with pytest.raises(Inconsistent):
        name("only son of B")
    with pytest.raises(VocabularyGap):
        name("father's father's father's father of B")


def test_resolution_is_deterministic():
    assert name("son of only son of my grandfather") == name("son of only son of my grandfather")


def test_every_definition_resolves_to_itself_or_a_generalization():
    for word in DEFINITIONS:
        got = name(f"{word} of B")
        assert is_a(word, got), (word, got)


# table data

def test_table_shape():
    assert TABLE.version == 1
    assert len(TABLE.level("L1")) and len(TABLE.level("L2"))
    assert len({e.id for e in TABLE.entries}) == len(TABLE.entries)


@pytest.mark.parametrize("entry", TABLE.entries, ids=lambda e: e.id)
def test_entry_sound_under_its_assumptions(entry):
    v = verify_entry(entry)
    assert v.equivalent, v.reason


@pytest.mark.parametrize("entry", [e for e in TABLE.entries if e.assumptions], ids=lambda e: e.id)
def test_declared_assumptions_are_needed(entry):
    bare = type(entry)(entry.id, entry.level, entry.word, entry.relation, entry.substitution)
    assert not verify_entry(bare).equivalent


def test_load_table_rejects_mismatched_word(tmp_path):
    data = {"version": 1, "entries": [{
        "id": "x", "level": "L1", "word": "Father", "relation": "mother",
        "substitution": "father's wife", "assumptions": {}, "flagged": False, "note": ""}]}
    path = tmp_path / "t.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ValueError):
        load_table(path)


# substitution

def test_l1_brother_substitution():
    text, prov = substitute_once("A is the brother of B", "L1", 0)
    assert text == "A is the sister-in-law's husband of B"
    assert prov["entry_id"] == "L1-brother-1"


def test_l2_brother_substitution():
    text, _ = substitute_once("A is the brother of B", "L2", 0)
    assert text == "A is the greatgrandfather's only grandson's daughterinlaw's husband of B"


def test_father_substitution_text():
    entry = next(e for e in TABLE.level("L1") if e.substitution == "grandfather's only son")
    text, _ = apply_entry("C is the father of F", entry, (9, 15))
    assert text == "C is the grandfather's only son of F"


def test_case_preserved_on_first_letter():
    entry = TABLE.by_id("L1-father-1")
    text, _ = apply_entry("Father of B", entry, (0, 6))
    assert text == "Mother's husband of B"


def test_no_substitutable_word():
    with pytest.raises(NoSubstitutableWord):
        substitute_once("A walks to the market", "L1", 0)


def test_longest_match_first():
    sites = find_sites("A is the sister-in-law of B", "L1")
    assert [s[2] for s in sites] == ["sister-in-law"]


PUZZLES = [
    "A is the brother of B",
    "D is the wife of C, C is the father of F. How is D related to F?",
    "X is the mother of Y and Y is the sister of Z. How is X related to Z?",
]


@given(st.sampled_from(PUZZLES), st.sampled_from(["L1", "L2"]), st.integers(0, 2 ** 63))
def test_single_contiguous_edit(puzzle, level, seed):
    text, prov = substitute_once(puzzle, level, seed)
    a, b = prov["base_span"]
    c, d = prov["obf_span"]
    assert text[:c] == puzzle[:a] and text[d:] == puzzle[b:]
    assert substitute_once(puzzle, level, seed) == (text, prov)


@given(st.sampled_from(PUZZLES), st.sampled_from(["L1", "L2"]), st.integers(0, 2 ** 32))
def test_substitution_verifies(puzzle, level, seed):
    text, prov = substitute_once(puzzle, level, seed)
    v = verify_kinship(puzzle, text, prov)
    assert v.equivalent, (text, v.reason)


def test_verify_negative_control():
    v = verify_kinship("A is the brother of B", "A is the sister of B")
    assert v.status == "divergent"


def test_verify_father_mothers_husband():
    assert verify_kinship("A is the father of B", "A is the mother's husband of B").equivalent


def test_puzzle_parse():
    p = parse_puzzle("D is the wife of C, C is the father of F. How is D related to F?")
    assert [s.subject for s in p.statements] == ["D", "C"]
    assert p.query == ("D", "F")


# estimator

def test_kinship_estimator():
    est = KinshipObfuscator(level="L1", seed=3, verify=True)
    assert clone(est).get_params() == est.get_params()
    out = est.fit(PUZZLES).transform(PUZZLES)
    assert all(prov["verdict"]["kind"] == "equivalent" for _, prov in out)
    assert est.transform(PUZZLES) == out
    with pytest.raises(ValueError):
        KinshipObfuscator(level="L3").fit(PUZZLES)
