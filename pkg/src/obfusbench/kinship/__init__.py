"""Kinship chains: parsing, resolution over family graphs, and substitution."""

from .chain import (
    Anchor, MalformedPossessive, Puzzle, RelationChain, Statement, Step,
    UnknownRelationWord, UnsupportedSentence, parse_chain, parse_puzzle,
)
from .graph import (
    Ambiguous, ChainAssumptions, FamilyGraph, Inconsistent, KinshipError,
    VocabularyGap, relation_name, resolve_chain, walk_chain,
)
from .puzzle import resolve_puzzle
from .substitute import (
    LEVELS, KinshipObfuscator, KinshipVerdict, NoSubstitutableWord, SubstitutionEntry,
    SubstitutionTable, apply_entry, default_table, find_sites, load_table,
    substitute_once, verify_entry, verify_kinship,
)
from .vocabulary import DEFINITIONS, CanonicalRelation, canonical_word
