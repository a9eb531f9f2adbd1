"""Parsing relation phrases and puzzle sentences.

``"son of only son of my grandfather"`` reads inside out: the grandfather of
the speaker, then his only son, then that person's son. Possessives read left
to right: ``"sister-in-law's husband"`` is the husband of the sister-in-law.
Steps are stored in application order, nearest the anchor first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .vocabulary import FEMALE, MALE, canonical_word


class UnknownRelationWord(ValueError):
    def __init__(self, word):
        super().__init__(f"unknown relation word {word!r}")
        self.word = word


class MalformedPossessive(ValueError):
    pass


class UnsupportedSentence(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    word: str
    only: bool = False
    # character span of the word (without "only") in the parsed text
    span: tuple = None


@dataclass(frozen=True)
class Anchor:
    kind: str  # "speaker" or "person"
    name: str = None


@dataclass(frozen=True)
class RelationChain:
    steps: tuple
    anchor: Anchor = None

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a relation chain needs at least one step")

    @property
    def words(self):
        return [s.word for s in self.steps]


_APOS = re.compile(r"['’]s\b")
_NAME = re.compile(r"[A-Z][A-Za-z]*$")


def _segment_steps(text, start):
    """Steps of one possessive segment such as ``"greatgrandfather's only grandson"``."""
    steps = []
    pos = 0
    pieces = []
    for m in _APOS.finditer(text):
        pieces.append((pos, text[pos:m.start()]))
        pos = m.end()
    pieces.append((pos, text[pos:]))
    for off, piece in pieces:
        stripped = piece.strip()
        if not stripped:
            raise MalformedPossessive(f"empty possessive segment in {text!r}")
        lead = off + len(piece) - len(piece.lstrip())
        only = False
        m = re.match(r"only\s+", stripped, re.IGNORECASE)
        if m:
            only = True
            lead += m.end()
            stripped = stripped[m.end():]
        word = canonical_word(stripped)
        if word is None:
            raise UnknownRelationWord(stripped)
        steps.append(Step(word, only, (start + lead, start + lead + len(stripped))))
    return steps


def parse_chain(text, offset=0):
    """Parse a relation phrase into a :class:`RelationChain`.

    A trailing ``"of B"`` names the anchor; ``"... of my grandfather"`` anchors
    at the speaker. Without either the chain has no anchor.
    """
    if not text or not text.strip():
        raise MalformedPossessive("empty relation phrase")
    segments = []
    pos = 0
    for m in re.finditer(r"\s+of\s+", text):
        segments.append((pos, text[pos:m.start()]))
        pos = m.end()
    segments.append((pos, text[pos:]))

    anchor = None
    last_off, last = segments[-1]
    if len(segments) > 1:
        lstrip = last.strip()
        m = re.match(r"(?:my|our)\s+", lstrip, re.IGNORECASE)
        if m:
            anchor = Anchor("speaker")
            lead = len(last) - len(last.lstrip()) + m.end()
            segments[-1] = (last_off + lead, lstrip[m.end():])
        elif lstrip.lower() in ("me", "us"):
            anchor = Anchor("speaker")
            segments.pop()
        elif _NAME.match(lstrip) and canonical_word(lstrip) is None:
            anchor = Anchor("person", lstrip)
            segments.pop()
    else:
        m = re.match(r"\s*(?:my|our)\s+", last, re.IGNORECASE)
        if m:
            anchor = Anchor("speaker")
            segments[-1] = (last_off + m.end(), last[m.end():])

    steps = []
    for off, seg in reversed(segments):
        steps += _segment_steps(seg, offset + off)
    return RelationChain(tuple(steps), anchor)


@dataclass(frozen=True)
class Statement:
    subject: str
    chain: RelationChain
    gender: str = None


@dataclass(frozen=True)
class Puzzle:
    text: str
    statements: tuple
    query: tuple = None  # (subject, anchor) or None
    speaker: str = None


_PRONOUN_GENDER = {"he": MALE, "she": FEMALE, "boy": MALE, "girl": FEMALE,
                   "man": MALE, "woman": FEMALE, "lady": FEMALE, "gentleman": MALE}

_POINTING = re.compile(
    r"^(?:pointing|pointing out)\s+(?:towards|to|at)\s+(?:a|an|the)\s+"
    r"(?P<kind>boy|girl|man|woman|lady|gentleman|person)\s*,?\s+"
    r"(?P<speaker>[A-Z]\w*)\s+said,?\s+(?:that\s+)?[\"']?"
    r"(?P<pron>he|she|this person)\s+is\s+(?:the\s+)?(?P<chain>.+)$",
    re.IGNORECASE)
_STATEMENT = re.compile(r"^(?P<subject>[A-Z]\w*)\s+is\s+(?:the\s+)?(?P<chain>.+)$")
_QUERY = re.compile(
    r"^(?:how\s+is\s+(?:that\s+|the\s+)?(?P<s1>\w+)\s+related\s+to\s+(?P<a1>\w+)"
    r"|what\s+is\s+(?P<s2>\w+)\s+to\s+(?P<a2>\w+))\s*\??$",
    re.IGNORECASE)
_SPLIT = re.compile(r"\s*(?:[,;.?]|\band\b)\s*(?=\S)")


def parse_puzzle(text):
    """Parse the supported puzzle sentence templates.

    ``"X is the <chain> of Y"`` statements separated by commas or full stops,
    the ``"Pointing towards a boy, V said he is ..."`` form, and an optional
    ``"How is X related to Y?"`` question.
    """
    statements, query, speaker = [], None, None
    # split into clauses while keeping offsets for each
    clauses = []
    pos = 0
    body = text.rstrip()
    for m in _SPLIT.finditer(body):
        clauses.append((pos, body[pos:m.start()]))
        pos = m.end()
    clauses.append((pos, body[pos:]))
    merged = []
    for off, clause in clauses:
        # "Pointing towards a boy, V said ..." must stay one clause
        if merged and re.match(r"\s*pointing\b", merged[-1][1], re.IGNORECASE) \
                and " said" not in merged[-1][1]:
            prev_off, prev = merged.pop()
            clause = prev + text[prev_off + len(prev):off] + clause
            off = prev_off
        merged.append((off, clause))
    for off, clause in merged:
        stripped = clause.strip().rstrip(".?")
        if not stripped:
            continue
        off += len(clause) - len(clause.lstrip())
        m = _QUERY.match(stripped)
        if m:
            subj = m.group("s1") or m.group("s2")
            query = (subj.lower() if subj.lower() in _PRONOUN_GENDER else subj,
                     m.group("a1") or m.group("a2"))
            continue
        m = _POINTING.match(stripped)
        if m:
            speaker = m.group("speaker")
            kind = m.group("kind").lower()
            chain = parse_chain(m.group("chain"), off + m.start("chain"))
            gender = _PRONOUN_GENDER.get(kind) or _PRONOUN_GENDER.get(m.group("pron").lower())
            statements.append(Statement(kind, chain, gender))
            continue
        m = _STATEMENT.match(stripped)
        if m:
            chain = parse_chain(m.group("chain"), off + m.start("chain"))
            statements.append(Statement(m.group("subject"), chain))
            continue
        raise UnsupportedSentence(f"cannot parse clause {stripped!r}")
    if not statements:
        raise UnsupportedSentence("no relation statement found")
    return Puzzle(text, tuple(statements), query, speaker)
