"""Equivalence-preserving rewrite rules and their application sites."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .syntax import (
    And, Exists, ForAll, Iff, Implies, Not, Or, Pred, atoms, bound_at,
    free_vars, replace_at, subformula, walk,
)


class RuleId(str, enum.Enum):
    CONTRAPOSITION = "Contraposition"
    DOUBLE_NEGATION = "DoubleNegation"
    DE_MORGAN_AND = "DeMorganAnd"
    DE_MORGAN_OR = "DeMorganOr"
    IMPL_TO_DISJ = "ImplToDisj"
    QUANTIFIER_DUALITY = "QuantifierDuality"
    BICONDITIONAL_EXPAND = "BiconditionalExpand"
    DISTRIBUTE = "Distribute"
    ABSORB = "Absorb"
    IMPL_AS_CONJ = "ImplAsConj"
    NNF_NEGATED_IMPL = "NnfNegatedImpl"
    QUANTIFIER_COMMUTE = "QuantifierCommute"
    TAUTOLOGY_INJECT = "TautologyInject"


class RuleNotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    id: RuleId
    direction: str = "forward"

    def __post_init__(self):
        object.__setattr__(self, "id", RuleId(self.id))
        if self.direction not in ("forward", "backward"):
            raise ValueError(f"bad direction {self.direction!r}")

    def __str__(self):
        return f"{self.id.value}/{self.direction}"


def _contraposition(g):
    if isinstance(g, Implies):
        return Implies(Not(g.right), Not(g.left))


def _dn_eliminate(g):
    if isinstance(g, Not) and isinstance(g.body, Not):
        return g.body.body


def _dn_introduce(g):
    return Not(Not(g))


def _de_morgan_and(g):
    # ~(A & B)  =>  ~A | ~B
    if isinstance(g, Not) and isinstance(g.body, And):
        return Or(Not(g.body.left), Not(g.body.right))


def _de_morgan_and_back(g):
    if isinstance(g, Or) and isinstance(g.left, Not) and isinstance(g.right, Not):
        return Not(And(g.left.body, g.right.body))


def _de_morgan_or(g):
    # A | B  =>  ~(~A & ~B)
    if isinstance(g, Or):
        return Not(And(Not(g.left), Not(g.right)))


def _de_morgan_or_back(g):
    if (isinstance(g, Not) and isinstance(g.body, And)
            and isinstance(g.body.left, Not) and isinstance(g.body.right, Not)):
        return Or(g.body.left.body, g.body.right.body)


def _impl_to_disj(g):
    if isinstance(g, Implies):
        return Or(Not(g.left), g.right)


def _impl_to_disj_back(g):
    if isinstance(g, Or) and isinstance(g.left, Not):
        return Implies(g.left.body, g.right)


def _quantifier_duality(g):
    if isinstance(g, ForAll):
        return Not(Exists(g.var, Not(g.body)))
    if isinstance(g, Exists):
        return Not(ForAll(g.var, Not(g.body)))


def _quantifier_duality_back(g):
    if isinstance(g, Not) and isinstance(g.body, (ForAll, Exists)) and isinstance(g.body.body, Not):
        dual = Exists if isinstance(g.body, ForAll) else ForAll
        return dual(g.body.var, g.body.body.body)


def _biconditional(g):
    if isinstance(g, Iff):
        return And(Implies(g.left, g.right), Implies(g.right, g.left))


def _biconditional_back(g):
    if (isinstance(g, And) and isinstance(g.left, Implies) and isinstance(g.right, Implies)
            and g.left.left == g.right.right and g.left.right == g.right.left):
        return Iff(g.left.left, g.left.right)


def _distribute(g):
    # A & (B | C)  =>  (A & B) | (A & C)
    if isinstance(g, And) and isinstance(g.right, Or):
        return Or(And(g.left, g.right.left), And(g.left, g.right.right))


def _absorb(g):
    # A | (A & B)  =>  A
    if isinstance(g, Or) and isinstance(g.right, And) and g.right.left == g.left:
        return g.left


def _impl_as_conj(g):
    if isinstance(g, Implies):
        return Not(And(g.left, Not(g.right)))


def _impl_as_conj_back(g):
    if isinstance(g, Not) and isinstance(g.body, And) and isinstance(g.body.right, Not):
        return Implies(g.body.left, g.body.right.body)


def _nnf_negated_impl(g):
    if isinstance(g, Not) and isinstance(g.body, Implies):
        return And(g.body.left, Not(g.body.right))


def _nnf_negated_impl_back(g):
    if isinstance(g, And) and isinstance(g.right, Not):
        return Not(Implies(g.left, g.right.body))


def _commute(g):
    if (isinstance(g, (ForAll, Exists)) and type(g.body) is type(g)
            and g.var != g.body.var):
        q = type(g)
        return q(g.body.var, q(g.var, g.body.body))


_TRANSFORMS = {
    (RuleId.CONTRAPOSITION, "forward"): _contraposition,
    (RuleId.DOUBLE_NEGATION, "forward"): _dn_eliminate,
    (RuleId.DOUBLE_NEGATION, "backward"): _dn_introduce,
    (RuleId.DE_MORGAN_AND, "forward"): _de_morgan_and,
    (RuleId.DE_MORGAN_AND, "backward"): _de_morgan_and_back,
    (RuleId.DE_MORGAN_OR, "forward"): _de_morgan_or,
    (RuleId.DE_MORGAN_OR, "backward"): _de_morgan_or_back,
    (RuleId.IMPL_TO_DISJ, "forward"): _impl_to_disj,
    (RuleId.IMPL_TO_DISJ, "backward"): _impl_to_disj_back,
    (RuleId.QUANTIFIER_DUALITY, "forward"): _quantifier_duality,
    (RuleId.QUANTIFIER_DUALITY, "backward"): _quantifier_duality_back,
    (RuleId.BICONDITIONAL_EXPAND, "forward"): _biconditional,
    (RuleId.BICONDITIONAL_EXPAND, "backward"): _biconditional_back,
    (RuleId.DISTRIBUTE, "forward"): _distribute,
    (RuleId.ABSORB, "forward"): _absorb,
    (RuleId.IMPL_AS_CONJ, "forward"): _impl_as_conj,
    (RuleId.IMPL_AS_CONJ, "backward"): _impl_as_conj_back,
    (RuleId.NNF_NEGATED_IMPL, "forward"): _nnf_negated_impl,
    (RuleId.NNF_NEGATED_IMPL, "backward"): _nnf_negated_impl_back,
    (RuleId.QUANTIFIER_COMMUTE, "forward"): _commute,
    (RuleId.TAUTOLOGY_INJECT, "forward"): None,  # needs a witness atom
}

CATALOG = tuple(RewriteRule(rid, d) for rid, d in _TRANSFORMS)


def tautology_witnesses(f, position, pool=None):
    """Atoms usable in ``Q | ~Q`` at ``position`` without leaving a free variable."""
    bound = bound_at(f, position)
    pool = atoms(f) if pool is None else pool
    return [a for a in pool if isinstance(a, Pred) and free_vars(a) <= bound]


def _rewrite(rule, g, witness):
    if rule.id is RuleId.TAUTOLOGY_INJECT:
        return And(g, Or(witness, Not(witness)))
    try:
        transform = _TRANSFORMS[(rule.id, rule.direction)]
    except KeyError:
        raise RuleNotApplicable(f"{rule} is not part of the catalog") from None
    return transform(g)


def apply_rewrite(rule, f, position=(), witness=None, pool=None):
    """Rewrite the subformula of ``f`` at ``position`` with ``rule``.

    ``TautologyInject`` conjoins ``Q | ~Q``; ``witness`` picks ``Q``, otherwise
    the first admissible atom of ``pool`` (default: the atoms of ``f``).
    """
    position = tuple(position)
    g = subformula(f, position)
    if rule.id is RuleId.TAUTOLOGY_INJECT:
        admissible = tautology_witnesses(f, position, pool)
        if witness is None:
            if not admissible:
                raise RuleNotApplicable(f"no closed witness atom at {position}")
            witness = admissible[0]
        elif not (isinstance(witness, Pred) and free_vars(witness) <= bound_at(f, position)):
            raise RuleNotApplicable(f"witness {witness} would leave a free variable")
    new = _rewrite(rule, g, witness)
    if new is None:
        raise RuleNotApplicable(f"{rule} does not match at {position}")
    return replace_at(f, position, new)


def enumerate_applicable(f, catalog=CATALOG, pool=None):
    """All ``(rule, position)`` sites, pre-order over ``f`` then catalog order."""
    sites = []
    for position, g in walk(f):
        for rule in catalog:
            if rule.id is RuleId.TAUTOLOGY_INJECT:
                if tautology_witnesses(f, position, pool):
                    sites.append((rule, position))
            elif _rewrite(rule, g, None) is not None:
                sites.append((rule, position))
    return sites


@dataclass(frozen=True)
class RewriteStep:
    rule: RewriteRule
    position: tuple
    before: object
    after: object

    @property
    def witness(self):
        if self.rule.id is RuleId.TAUTOLOGY_INJECT:
            return self.after.right.left
        return None


@dataclass(frozen=True)
class RewriteTrace:
    steps: tuple = ()

    def replay(self, base):
        """Re-apply every step to ``base``; raises if a step does not line up."""
        f = base
        for step in self.steps:
            if subformula(f, step.position) != step.before:
                raise ValueError(f"trace diverges at {step.rule} {step.position}")
            f = apply_rewrite(step.rule, f, step.position, witness=step.witness)
            if subformula(f, step.position) != step.after:
                raise ValueError(f"trace diverges at {step.rule} {step.position}")
        return f

    def __len__(self):
        return len(self.steps)
