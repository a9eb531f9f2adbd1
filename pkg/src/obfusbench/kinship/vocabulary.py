"""Kinship vocabulary: primitive steps, word definitions and the name hierarchy.

Every relation word expands to one or more labelled alternative paths over
primitive steps. ``uncle`` for instance is either a parent's brother or a
parent's sister's husband; resolution explores all alternatives and reports
the most specific name they agree on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

MALE, FEMALE = "male", "female"

# primitive step -> (kind, required gender of the target)
PRIMITIVES = {
    "F": ("parent", MALE), "M": ("parent", FEMALE), "P": ("parent", None),
    "S": ("child", MALE), "D": ("child", FEMALE), "C": ("child", None),
    "H": ("spouse", MALE), "W": ("spouse", FEMALE), "SP": ("spouse", None),
    "B": ("sibling", MALE), "Z": ("sibling", FEMALE), "SB": ("sibling", None),
}


def opposite(gender):
    return {MALE: FEMALE, FEMALE: MALE}.get(gender)


def _alts(*pairs):
    return tuple((label, tuple(path.split())) for label, path in pairs)


def _one(path):
    return _alts(("", path))


DEFINITIONS = {
    "father": _one("F"), "mother": _one("M"), "parent": _one("P"),
    "son": _one("S"), "daughter": _one("D"), "child": _one("C"),
    "brother": _one("B"), "sister": _one("Z"), "sibling": _one("SB"),
    "husband": _one("H"), "wife": _one("W"), "spouse": _one("SP"),
    "grandfather": _alts(("paternal", "F F"), ("maternal", "M F")),
    "grandmother": _alts(("paternal", "F M"), ("maternal", "M M")),
    "grandparent": _one("P P"),
    "paternal-grandfather": _one("F F"), "maternal-grandfather": _one("M F"),
    "paternal-grandmother": _one("F M"), "maternal-grandmother": _one("M M"),
    "great-grandfather": _alts(
        ("father's father's father", "F F F"), ("father's mother's father", "F M F"),
        ("mother's father's father", "M F F"), ("mother's mother's father", "M M F")),
    "great-grandmother": _alts(
        ("father's father's mother", "F F M"), ("father's mother's mother", "F M M"),
        ("mother's father's mother", "M F M"), ("mother's mother's mother", "M M M")),
    "grandson": _one("C S"), "granddaughter": _one("C D"), "grandchild": _one("C C"),
    "uncle": _alts(
        ("father's brother", "F B"), ("mother's brother", "M B"),
        ("father's sister's husband", "F Z H"), ("mother's sister's husband", "M Z H")),
    "aunt": _alts(
        ("father's sister", "F Z"), ("mother's sister", "M Z"),
        ("father's brother's wife", "F B W"), ("mother's brother's wife", "M B W")),
    "paternal-uncle": _one("F B"), "maternal-uncle": _one("M B"),
    "paternal-aunt": _one("F Z"), "maternal-aunt": _one("M Z"),
    "nephew": _alts(("brother's son", "B S"), ("sister's son", "Z S"),
                    ("spouse's sibling's son", "SP SB S")),
    "niece": _alts(("brother's daughter", "B D"), ("sister's daughter", "Z D"),
                   ("spouse's sibling's daughter", "SP SB D")),
    "cousin": _alts(
        ("father's brother's child", "F B C"), ("father's sister's child", "F Z C"),
        ("mother's brother's child", "M B C"), ("mother's sister's child", "M Z C")),
    "cousin-brother": _alts(
        ("father's brother's son", "F B S"), ("father's sister's son", "F Z S"),
        ("mother's brother's son", "M B S"), ("mother's sister's son", "M Z S")),
    "cousin-sister": _alts(
        ("father's brother's daughter", "F B D"), ("father's sister's daughter", "F Z D"),
        ("mother's brother's daughter", "M B D"), ("mother's sister's daughter", "M Z D")),
    "father-in-law": _one("SP F"), "mother-in-law": _one("SP M"),
    "son-in-law": _one("D H"), "daughter-in-law": _one("S W"),
    "brother-in-law": _alts(("spouse's brother", "SP B"), ("sister's husband", "Z H")),
    "sister-in-law": _alts(("spouse's sister", "SP Z"), ("brother's wife", "B W")),
    "grandson-in-law": _one("C D H"), "granddaughter-in-law": _one("C S W"),
}

# name -> more general name; the roots are the gender-neutral relations
HIERARCHY = {
    "father": "parent", "mother": "parent",
    "son": "child", "daughter": "child",
    "brother": "sibling", "sister": "sibling",
    "husband": "spouse", "wife": "spouse",
    "paternal-grandfather": "grandfather", "maternal-grandfather": "grandfather",
    "paternal-grandmother": "grandmother", "maternal-grandmother": "grandmother",
    "grandfather": "grandparent", "grandmother": "grandparent",
    "great-grandfather": "great-grandparent", "great-grandmother": "great-grandparent",
    "grandson": "grandchild", "granddaughter": "grandchild",
    "great-grandson": "great-grandchild", "great-granddaughter": "great-grandchild",
    "paternal-uncle": "uncle", "maternal-uncle": "uncle",
    "paternal-aunt": "aunt", "maternal-aunt": "aunt",
    "uncle": "uncle-or-aunt", "aunt": "uncle-or-aunt",
    "nephew": "nephew-or-niece", "niece": "nephew-or-niece",
    "cousin-brother": "cousin", "cousin-sister": "cousin",
    "father-in-law": "parent-in-law", "mother-in-law": "parent-in-law",
    "son-in-law": "child-in-law", "daughter-in-law": "child-in-law",
    "brother-in-law": "sibling-in-law", "sister-in-law": "sibling-in-law",
    "grandson-in-law": "grandchild-in-law", "granddaughter-in-law": "grandchild-in-law",
}

_NEUTRAL = {
    "self", "parent", "child", "sibling", "spouse", "grandparent", "grandchild",
    "great-grandparent", "great-grandchild", "uncle-or-aunt", "nephew-or-niece",
    "cousin", "parent-in-law", "child-in-law", "sibling-in-law", "grandchild-in-law",
}

_FEMALE_WORDS = re.compile(
    r"(mother|daughter|sister|wife|aunt|niece)(-in-law)?$")


def gender_of(name):
    if name in _NEUTRAL:
        return None
    return FEMALE if _FEMALE_WORDS.search(name) else MALE


def lineage(name):
    """``name`` followed by every more general name."""
    out = [name]
    while out[-1] in HIERARCHY:
        out.append(HIERARCHY[out[-1]])
    return out


def is_a(name, general):
    return general in lineage(name)


def common_name(names):
    """Most specific name every one of ``names`` specializes, or None."""
    names = list(names)
    if not names:
        return None
    common = set(lineage(names[0]))
    for n in names[1:]:
        common &= set(lineage(n))
    for n in lineage(names[0]):
        if n in common:
            return n
    return None


@dataclass(frozen=True)
class CanonicalRelation:
    name: str

    @property
    def gender(self):
        return gender_of(self.name)

    def __str__(self):
        return self.name


# surface spelling normalization: lowercase, drop spaces and hyphens
_SQUASHED = {name.replace("-", ""): name for name in DEFINITIONS}


def squash(text):
    return re.sub(r"[\s\-]+", "", text.strip().lower())


def canonical_word(text):
    """Canonical name for a surface spelling ("Grand Father", "daughterinlaw")."""
    return _SQUASHED.get(squash(text))


def _morphemes(name):
    parts = []
    for part in name.split("-"):
        if part.startswith("grand") and len(part) > 5:
            parts += ["grand", part[5:]]
        else:
            parts.append(part)
    return parts


def surface_pattern(name):
    """Regex matching the common spellings of ``name`` ("sister in law", ...)."""
    return r"[\s-]?".join(map(re.escape, _morphemes(name)))
