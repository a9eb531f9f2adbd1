"""Abstract syntax for function-free first-order logic.

Formulas are immutable, hashable dataclasses, so structural equality is plain
``==`` and subformulas can be used as dictionary keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Pred, Top, Bottom, Not, And, Or, Implies, Iff, ForAll, Exists]

BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (ForAll, Exists)
ATOMS = (Pred, Top, Bottom)

# A position is a path of child indices from the root.
Position = tuple


class ArityError(ValueError):
    """A predicate name was used with two different arities."""

    def __init__(self, name, first, second):
        super().__init__(f"predicate {name!r} used with arity {first} and {second}")
        self.name = name
        self.arities = (first, second)


class InvalidPosition(IndexError):
    pass


@dataclass(frozen=True)
class Problem:
    """Premises, a conclusion and the entailment label carried as metadata."""

    premises: tuple
    conclusion: Formula
    label: bool = True
    # predicate arities, filled in by ``__post_init__``
    signature: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.premises, tuple):
            object.__setattr__(self, "premises", tuple(self.premises))
        if not self.premises:
            raise ValueError("a problem needs at least one premise")
        sig = {}
        for f in (*self.premises, self.conclusion):
            predicate_signature(f, sig)
        object.__setattr__(self, "signature", sig)


def children(f):
    if isinstance(f, Not) or isinstance(f, QUANTIFIERS):
        return (f.body,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def replace_children(f, new):
    if isinstance(f, Not):
        return Not(new[0])
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, new[0])
    if isinstance(f, BINARY):
        return type(f)(new[0], new[1])
    return f


def subformula(f, position):
    for i in position:
        kids = children(f)
        if not 0 <= i < len(kids):
            raise InvalidPosition(f"position {tuple(position)} leaves the tree")
        f = kids[i]
    return f


def replace_at(f, position, new):
    if not position:
        return new
    kids = list(children(f))
    i = position[0]
    if not 0 <= i < len(kids):
        raise InvalidPosition(f"position {tuple(position)} leaves the tree")
    kids[i] = replace_at(kids[i], position[1:], new)
    return replace_children(f, kids)


def walk(f, position=()) -> Iterator[tuple]:
    """Pre-order traversal yielding ``(position, subformula)``."""
    yield position, f
    for i, child in enumerate(children(f)):
        yield from walk(child, position + (i,))


def bound_at(f, position):
    """Variables bound by quantifiers strictly above ``position``."""
    bound = set()
    for i in position:
        if isinstance(f, QUANTIFIERS):
            bound.add(f.var)
        f = children(f)[i]
    return bound


def size(f):
    return 1 + sum(size(c) for c in children(f))


def depth(f):
    kids = children(f)
    return 1 + (max(depth(c) for c in kids) if kids else 0)


def free_vars(f):
    """Return the set of variable names occurring unbound in ``f``."""
    if isinstance(f, Pred):
        return {t.name for t in f.args if isinstance(t, Var)}
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    out = set()
    for c in children(f):
        out |= free_vars(c)
    return out


def atoms(f):
    """Distinct predicate applications of ``f`` in pre-order."""
    seen = {}
    for _, g in walk(f):
        if isinstance(g, Pred):
            seen.setdefault(g, None)
    return list(seen)


def constants(f):
    out = {}
    for a in atoms(f):
        for t in a.args:
            if isinstance(t, Const):
                out.setdefault(t.name, None)
    return list(out)


def predicate_signature(f, sig=None):
    """Map predicate name to arity, raising ArityError on a clash."""
    sig = {} if sig is None else sig
    for _, g in walk(f):
        if isinstance(g, Pred):
            known = sig.setdefault(g.name, len(g.args))
            if known != len(g.args):
                raise ArityError(g.name, known, len(g.args))
    return sig


def is_quantifier_free(f):
    return not any(isinstance(g, QUANTIFIERS) for _, g in walk(f))
