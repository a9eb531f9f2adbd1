"""Reversible encodings of number series: planet names, codepoint sums, MD5."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_choice, check_positive_int, check_sequence

PLANETS = ("Sun", "Mercury", "Venus", "Earth", "Mars",
           "Jupiter", "Saturn", "Uranus", "Neptune", "Pluto")
PLANET_OF = {str(d): name for d, name in enumerate(PLANETS)}
DIGIT_OF = {name: str(d) for d, name in enumerate(PLANETS)}

HIDDEN = "?"
SEPARATOR = ", "
KINDS = (1, 2, 3)
CHAINS = {1: "planet", 2: "planet>codepoint-sum", 3: "md5"}
KIND_OF_CHAIN = {v: k for k, v in CHAINS.items()}


class NegativeTerm(ValueError):
    pass


class UnrecognizedToken(ValueError):
    pass


class DigestNotInTable(KeyError):
    pass


def codepoint_sum(token):
    return sum(map(ord, token))


SUM_OF = {name: codepoint_sum(name) for name in PLANETS}
PLANET_OF_SUM = {s: name for name, s in SUM_OF.items()}
assert len(PLANET_OF_SUM) == len(PLANETS), "planet codepoint sums collide"


def md5_hex(text):
    return hashlib.md5(text.encode("ascii")).hexdigest()


@dataclass(frozen=True)
class SeriesInstance:
    """A series with ``None`` marking the hidden term, and the base answer."""

    terms: tuple
    answer: int = None
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class LogEntry:
    original: int
    intermediate: tuple
    surface: str
    chain: str


@dataclass(frozen=True)
class MappingLog:
    entries: tuple
    chain: str
    answer: int = None
    note: str = ""

    def to_dict(self):
        return {
            "chain": self.chain,
            "answer": self.answer,
            "note": self.note,
            "entries": [[e.original, list(e.intermediate), e.surface, e.chain] for e in self.entries],
        }

    @classmethod
    def from_dict(cls, d):
        entries = tuple(LogEntry(o, tuple(i), s, c) for o, i, s, c in d["entries"])
        return cls(entries, d["chain"], d.get("answer"), d.get("note", ""))


@dataclass(frozen=True)
class Encoded:
    surface: str
    log: MappingLog = field(repr=False)

    @property
    def kind(self):
        return KIND_OF_CHAIN[self.log.chain]


def _check_terms(s):
    for t in s.terms:
        if t is None:
            continue
        if isinstance(t, bool) or not isinstance(t, int):
            raise TypeError(f"series terms must be integers, got {t!r}")
        if t < 0:
            raise NegativeTerm(f"negative term {t}")


def _encode_term(t, kind):
    digits = str(t)
    if kind == 1:
        planets = tuple(PLANET_OF[d] for d in digits)
        return planets, " ".join(planets)
    if kind == 2:
        planets = tuple(PLANET_OF[d] for d in digits)
        return planets, " ".join(str(SUM_OF[p]) for p in planets)
    return (digits,), md5_hex(digits)


def encode(s, kind):
    """Encode every visible term of ``s``; the hidden slot stays ``?``."""
    check_choice(kind, KINDS, "kind")
    _check_terms(s)
    chain = CHAINS[kind]
    parts, entries = [], []
    for t in s.terms:
        if t is None:
            parts.append(HIDDEN)
            continue
        intermediate, surface = _encode_term(t, kind)
        parts.append(surface)
        entries.append(LogEntry(t, intermediate, surface, chain))
    return Encoded(SEPARATOR.join(parts), MappingLog(tuple(entries), chain, s.answer, s.note))


def encode_type1(s):
    """Planet names, digit by digit: 516 becomes ``Jupiter Mercury Saturn``."""
    return encode(s, 1)


def encode_type2(s):
    """Codepoint sums of the planet names, digit by digit: 4 becomes ``403``."""
    return encode(s, 2)


def encode_type3(s):
    """Lowercase hex MD5 of each term's decimal string."""
    return encode(s, 3)


def digest_table(universe=range(10000)):
    return {md5_hex(str(n)): n for n in universe}


def _decode_term(surface, kind, reverse, table):
    if kind == 1:
        try:
            return int("".join(DIGIT_OF[tok] for tok in surface.split()))
        except KeyError as exc:
            raise UnrecognizedToken(f"unknown planet token {exc.args[0]!r}") from None
    if kind == 2:
        try:
            return int("".join(DIGIT_OF[PLANET_OF_SUM[int(tok)]] for tok in surface.split()))
        except (KeyError, ValueError):
            raise UnrecognizedToken(f"unknown codepoint sum in {surface!r}") from None
    if surface in reverse:
        return reverse[surface]
    if table is not None and surface in table:
        return table[surface]
    raise DigestNotInTable(surface)


def decode(surface, log=None, *, kind=None, table=None):
    """Invert an encoded series.

    ``log`` supplies the encoding chain, the answer and, for MD5, the exact
    reverse mapping. Without a log give ``kind``; MD5 digests are then looked
    up in ``table`` (see :func:`digest_table`).
    """
    if log is None and kind is None:
        raise ValueError("decode needs a MappingLog or an explicit kind")
    if log is not None:
        kind = KIND_OF_CHAIN[log.chain]
    check_choice(kind, KINDS, "kind")
    reverse = {e.surface: e.original for e in log.entries} if log else {}
    if kind == 3 and log is None and table is None:
        table = digest_table()
    terms = []
    for part in surface.split(SEPARATOR):
        part = part.strip()
        terms.append(None if part == HIDDEN else _decode_term(part, kind, reverse, table))
    if log is not None:
        visible = [t for t in terms if t is not None]
        if visible != [e.original for e in log.entries]:
            raise UnrecognizedToken("surface does not match its mapping log")
        return SeriesInstance(tuple(terms), log.answer, log.note)
    return SeriesInstance(tuple(terms))


class SeriesEncoder(TransformerMixin, BaseEstimator):
    """Estimator wrapper: ``transform`` encodes, ``inverse_transform`` decodes.

    ``fit`` builds the MD5 digest table over ``range(universe)`` so type-3
    surfaces can be decoded without their logs.
    """

    def __init__(self, kind=1, universe=10000):
        self.kind = kind
        self.universe = universe

    def fit(self, X=None, y=None):
        check_choice(self.kind, KINDS, "kind")
        check_positive_int(self.universe, "universe")
        self.digest_table_ = digest_table(range(self.universe)) if self.kind == 3 else None
        return self

    def transform(self, X):
        if not hasattr(self, "digest_table_"):
            raise AttributeError("SeriesEncoder is not fitted; call fit first")
        out = []
        for s in check_sequence(X):
            if not isinstance(s, SeriesInstance):
                s = SeriesInstance(tuple(s))
            out.append(encode(s, self.kind))
        return out

    def inverse_transform(self, X):
        if not hasattr(self, "digest_table_"):
            raise AttributeError("SeriesEncoder is not fitted; call fit first")
        out = []
        for e in check_sequence(X):
            if isinstance(e, Encoded):
                out.append(decode(e.surface, e.log))
            else:
                out.append(decode(e, kind=self.kind, table=self.digest_table_))
        return out
