"""Level-1/Level-2 relation-word substitution and equivalence verification."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from sklearn.base import BaseEstimator, TransformerMixin

from .._rng import derive_rng
from .._validation import check_choice, check_seed, check_sequence
from .chain import parse_chain, parse_puzzle
from .graph import Ambiguous, ChainAssumptions, KinshipError, readings_within
from .puzzle import resolve_puzzle
from .vocabulary import canonical_word, surface_pattern

LEVELS = ("L1", "L2")


class NoSubstitutableWord(ValueError):
    pass


@dataclass(frozen=True)
class SubstitutionEntry:
    id: str
    level: str
    word: str
    relation: str
    substitution: str
    assumptions: dict = field(default_factory=dict, compare=False, hash=False)
    flagged: bool = False
    note: str = ""


@dataclass(frozen=True)
class SubstitutionTable:
    version: int
    entries: tuple

    def level(self, level):
        return [e for e in self.entries if e.level == level]

    def by_id(self, entry_id):
        for e in self.entries:
            if e.id == entry_id:
                return e
        raise KeyError(entry_id)


def load_table(path=None):
    """The shipped substitution table, or one read from ``path``."""
    if path is None:
        text = resources.files(__package__).joinpath("data/substitutions.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    entries = []
    for raw in data["entries"]:
        if canonical_word(raw["word"]) != raw["relation"]:
            raise ValueError(f"entry {raw['id']}: {raw['word']!r} is not {raw['relation']!r}")
        parse_chain(raw["substitution"])  # fail early on a malformed phrase
        entries.append(SubstitutionEntry(**raw))
    return SubstitutionTable(data["version"], tuple(entries))


_DEFAULT_TABLE = None


def default_table():
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = load_table()
    return _DEFAULT_TABLE


def _word_regex(relations):
    pats = sorted({surface_pattern(r) for r in relations}, key=len, reverse=True)
    return re.compile(r"(?<![\w-])(?:" + "|".join(pats) + r")(?![\w-])", re.IGNORECASE)


def find_sites(text, level, table=None):
    """Non-overlapping relation-word occurrences with table entries, longest first."""
    entries = (table or default_table()).level(level)
    regex = _word_regex({e.relation for e in entries})
    return [(m.start(), m.end(), canonical_word(m.group())) for m in regex.finditer(text)]


def _match_case(replacement, original):
    first = replacement[:1].upper() if original[:1].isupper() else replacement[:1].lower()
    return first + replacement[1:]


def apply_entry(text, entry, span):
    """Replace ``text[span]`` with the entry's substitution; returns ``(text, provenance)``."""
    start, end = span
    matched = text[start:end]
    replacement = _match_case(entry.substitution, matched)
    out = text[:start] + replacement + text[end:]
    provenance = {
        "level": entry.level,
        "entry_id": entry.id,
        "word": entry.word,
        "matched": matched,
        "substitution": replacement,
        "base_span": [start, end],
        "obf_span": [start, start + len(replacement)],
        "assumptions": entry.assumptions,
        "flagged": entry.flagged,
    }
    return out, provenance


def substitute_once(puzzle, level, seed, *, table=None, stream=()):
    """Replace exactly one relation word of ``puzzle`` using the ``level`` table.

    The edit site and the alternative are both seeded choices. Returns the new
    text and a provenance dict recording the edit and its assumptions.
    """
    check_choice(level, LEVELS, "level")
    seed = check_seed(seed)
    table = table or default_table()
    sites = find_sites(puzzle, level, table)
    if not sites:
        raise NoSubstitutableWord(f"no {level} relation word in {puzzle!r}")
    rng = derive_rng(seed, "kinship", level, *stream)
    start, end, relation = sites[rng.randrange(len(sites))]
    options = [e for e in table.level(level) if e.relation == relation]
    entry = options[rng.randrange(len(options))]
    return apply_entry(puzzle, entry, (start, end))


def _edit_statement(puzzle, span):
    """(statement index, step indices in text order) of the steps inside ``span``."""
    lo, hi = span
    for i, st in enumerate(puzzle.statements):
        inside = [k for k, s in enumerate(st.chain.steps)
                  if s.span and lo <= s.span[0] and s.span[1] <= hi]
        if inside:
            return i, sorted(inside, key=lambda k: st.chain.steps[k].span[0])
    return None, []


def _chain_assumptions(raw, steps):
    readings = {steps[int(k)]: v for k, v in raw.get("readings", {}).items()}
    only = frozenset((steps[w], p) for w, p in raw.get("only", []))
    role = frozenset(steps[w] for w in raw.get("anchor_role", []))
    return ChainAssumptions(readings, only, role)


@dataclass(frozen=True)
class KinshipVerdict:
    status: str  # "equivalent", "divergent" or "ambiguous"
    reason: str = ""
    base: tuple = None
    obfuscated: tuple = None

    @property
    def equivalent(self):
        return self.status == "equivalent"

    def to_dict(self):
        names = lambda rs: None if rs is None else [r.name for r in rs]
        return {"kind": self.status, "reason": self.reason,
                "base": names(self.base), "obfuscated": names(self.obfuscated)}


def verify_kinship(base, obf, edit=None):
    """Check that ``obf`` resolves to the same relations as ``base``.

    ``edit`` is the provenance of :func:`substitute_once`; its declared
    assumptions are applied to the edited statement.
    """
    base_p = parse_puzzle(base) if isinstance(base, str) else base
    obf_p = parse_puzzle(obf) if isinstance(obf, str) else obf
    obf_assume, base_assume = {}, {}
    if edit:
        raw = edit.get("assumptions") or {}
        i, steps = _edit_statement(obf_p, edit["obf_span"])
        if i is not None and raw:
            obf_assume[i] = _chain_assumptions(raw, steps)
        if raw.get("base_reading"):
            j, steps = _edit_statement(base_p, edit["base_span"])
            if j is not None:
                word = base_p.statements[j].chain.steps[steps[0]].word
                labels = readings_within(word, raw["base_reading"])
                base_assume[j] = ChainAssumptions({steps[0]: labels})
    try:
        want = resolve_puzzle(base_p, base_assume)
    except Ambiguous as exc:
        return KinshipVerdict("ambiguous", f"base: {exc}")
    except KinshipError as exc:
        return KinshipVerdict("divergent", f"base: {exc}")
    try:
        got = resolve_puzzle(obf_p, obf_assume)
    except Ambiguous as exc:
        return KinshipVerdict("ambiguous", f"obfuscated: {exc}", want)
    except KinshipError as exc:
        return KinshipVerdict("divergent", f"obfuscated: {exc}", want)
    if want != got:
        return KinshipVerdict("divergent", f"{[r.name for r in want]} != {[r.name for r in got]}",
                              want, got)
    return KinshipVerdict("equivalent", "", want, got)


TEMPLATE = "A is the {} of B"


def verify_entry(entry):
    """Verify a table entry on the template sentence under its assumptions."""
    base = TEMPLATE.format(entry.word)
    start = base.index(entry.word)
    obf, edit = apply_entry(base, entry, (start, start + len(entry.word)))
    return verify_kinship(base, obf, edit)


class KinshipObfuscator(TransformerMixin, BaseEstimator):
    """Estimator wrapper: puzzle texts in, ``(text, provenance)`` pairs out.

    With ``verify=True`` each provenance dict gains a ``verdict`` entry.
    """

    def __init__(self, level="L1", seed=0, verify=False, table_path=None):
        self.level = level
        self.seed = seed
        self.verify = verify
        self.table_path = table_path

    def fit(self, X, y=None):
        check_choice(self.level, LEVELS, "level")
        check_seed(self.seed)
        check_sequence(X)
        self.table_ = load_table(self.table_path) if self.table_path else default_table()
        return self

    def transform(self, X):
        if not hasattr(self, "table_"):
            raise AttributeError("KinshipObfuscator is not fitted; call fit first")
        out = []
        for i, text in enumerate(check_sequence(X)):
            obf, prov = substitute_once(text, self.level, self.seed, table=self.table_, stream=(i,))
            if self.verify:
                prov = {**prov, "verdict": verify_kinship(text, obf, prov).to_dict()}
            out.append((obf, prov))
        return out
