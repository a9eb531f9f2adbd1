"""Bounded finite-model equivalence checking.

Two closed formulas are compared on every interpretation over domains of size
``1..max_domain``. Quantifier-free, constant-free formulas get an exhaustive
truth table instead, which is a complete decision procedure.

Two engines cover the same interpretation space. ``"enumerate"`` walks every
interpretation explicitly and is capped by ``budget``. ``"sat"`` grounds both
formulas over the domain, Tseitin-encodes ``f xor g`` and asks a SAT solver;
an unsatisfiable instance means no interpretation of that size separates them.
``"auto"`` enumerates small spaces (at most ``AUTO_ENUMERATE_LIMIT``
interpretations per domain size) and grounds the rest; the budget only limits
explicit enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from pysat.solvers import Solver

from .syntax import (
    And, Bottom, Const, Exists, ForAll, Iff, Implies, Not, Or, Pred, Top,
    constants, free_vars, is_quantifier_free, predicate_signature,
)

DEFAULT_BUDGET = 2 ** 24
AUTO_ENUMERATE_LIMIT = 256


class SignatureMismatch(ValueError):
    """The formulas use one predicate name with different arities."""


class BudgetExceeded(RuntimeError):
    def __init__(self, count, budget, largest_completed):
        super().__init__(
            f"{count} interpretations exceed the budget of {budget}; "
            f"domains up to size {largest_completed} were checked"
        )
        self.count = count
        self.budget = budget
        self.largest_completed = largest_completed


@dataclass(frozen=True)
class Interpretation:
    domain_size: int
    predicates: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)

    def holds(self, name, args=()):
        return tuple(args) in self.predicates.get(name, frozenset())


def _is_nullary(ext):
    return all(t == () for t in ext)


@dataclass(frozen=True)
class PropositionallyEquivalent:
    kind = "propositionally_equivalent"


@dataclass(frozen=True)
class EquivalentUpTo:
    max_domain: int
    kind = "equivalent_up_to"


@dataclass(frozen=True)
class CounterModel:
    domain_size: int
    interpretation: Interpretation
    kind = "counter_model"

    @property
    def assignment(self):
        """Truth values of nullary predicates (propositional countermodels)."""
        return {
            name: () in ext
            for name, ext in sorted(self.interpretation.predicates.items())
            if _is_nullary(ext)
        }


def is_equivalent(verdict):
    return not isinstance(verdict, CounterModel)


def evaluate(f, interp, env=None):
    """Truth value of ``f`` under ``interp`` with variable assignment ``env``."""
    env = env or {}
    if isinstance(f, Pred):
        return interp.holds(f.name, tuple(
            interp.constants[t.name] if isinstance(t, Const) else env[t.name]
            for t in f.args
        ))
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(f.body, interp, env)
    if isinstance(f, And):
        return evaluate(f.left, interp, env) and evaluate(f.right, interp, env)
    if isinstance(f, Or):
        return evaluate(f.left, interp, env) or evaluate(f.right, interp, env)
    if isinstance(f, Implies):
        return (not evaluate(f.left, interp, env)) or evaluate(f.right, interp, env)
    if isinstance(f, Iff):
        return evaluate(f.left, interp, env) == evaluate(f.right, interp, env)
    quant = all if isinstance(f, ForAll) else any
    return quant(
        evaluate(f.body, interp, {**env, f.var: d}) for d in range(interp.domain_size)
    )


def _signature(f, g):
    sig = predicate_signature(f)
    try:
        predicate_signature(g, sig)
    except ValueError as exc:
        raise SignatureMismatch(str(exc)) from exc
    return sig


def _interpretation_count(sig, n_constants, n):
    return 2 ** sum(n ** a for a in sig.values()) * n ** n_constants


def check_equivalence(f, g, max_domain=3, *, budget=DEFAULT_BUDGET, engine="auto"):
    """Compare two closed formulas on all interpretations up to ``max_domain``.

    Returns :class:`PropositionallyEquivalent`, :class:`EquivalentUpTo` or the
    first :class:`CounterModel` found. Predicates absent from one formula are
    simply unconstrained by it; a predicate used at two arities raises
    :class:`SignatureMismatch`.
    """
    if engine not in ("auto", "enumerate", "sat"):
        raise ValueError(f"unknown engine {engine!r}")
    if max_domain < 1:
        raise ValueError("max_domain must be positive")
    if free_vars(f) or free_vars(g):
        raise ValueError("check_equivalence needs closed formulas")
    sig = _signature(f, g)
    consts = list(dict.fromkeys(constants(f) + constants(g)))

    if not consts and is_quantifier_free(f) and is_quantifier_free(g):
        return _truth_table(f, g, sig, budget)

    checked = 0
    for n in range(1, max_domain + 1):
        count = _interpretation_count(sig, len(consts), n)
        use_enum = engine == "enumerate" or (
            engine == "auto" and count <= min(budget, AUTO_ENUMERATE_LIMIT))
        if use_enum:
            if count > budget:
                raise BudgetExceeded(count, budget, checked)
            model = _enumerate(f, g, sig, consts, n)
        else:
            model = _ground_and_solve(f, g, sig, consts, n)
        if model is not None:
            return CounterModel(n, model)
        checked = n
    return EquivalentUpTo(max_domain)


def _truth_table(f, g, sig, budget):
    names = sorted(sig)
    if 2 ** len(names) > budget:
        raise BudgetExceeded(2 ** len(names), budget, 0)
    for values in itertools.product((True, False), repeat=len(names)):
        interp = Interpretation(1, {
            name: frozenset({()}) if v else frozenset() for name, v in zip(names, values)
        })
        if evaluate(f, interp) != evaluate(g, interp):
            return CounterModel(1, interp)
    return PropositionallyEquivalent()


def _enumerate(f, g, sig, consts, n):
    names = sorted(sig)
    tuples = {name: list(itertools.product(range(n), repeat=sig[name])) for name in names}
    extensions = [
        [frozenset(t for t, bit in zip(tuples[name], bits) if bit)
         for bits in itertools.product((False, True), repeat=len(tuples[name]))]
        for name in names
    ]
    for exts in itertools.product(*extensions):
        preds = dict(zip(names, exts))
        for values in itertools.product(range(n), repeat=len(consts)):
            interp = Interpretation(n, preds, dict(zip(consts, values)))
            if evaluate(f, interp) != evaluate(g, interp):
                return interp
    return None


class _Grounder:
    """Tseitin encoding of formulas grounded over ``range(n)``."""

    def __init__(self, n, consts):
        self.n = n
        self.clauses = []
        self.next_var = 1
        self.atoms = {}
        self.free = {}
        self.memo = {}
        self.true = self._fresh()
        self.clauses.append([self.true])
        # one-hot encoding of each constant's denotation
        self.const_vars = {}
        for c in consts:
            vs = [self._fresh() for _ in range(n)]
            self.const_vars[c] = vs
            self.clauses.append(list(vs))
            for a, b in itertools.combinations(vs, 2):
                self.clauses.append([-a, -b])

    def _fresh(self):
        v = self.next_var
        self.next_var += 1
        return v

    def _free(self, f):
        key = id(f)
        if key not in self.free:
            self.free[key] = tuple(sorted(free_vars(f)))
        return self.free[key]

    def _atom(self, name, args):
        key = (name, args)
        if key not in self.atoms:
            self.atoms[key] = self._fresh()
        return self.atoms[key]

    def _and(self, lits):
        lits = list(lits)
        if len(lits) == 1:
            return lits[0]
        z = self._fresh()
        for lit in lits:
            self.clauses.append([-z, lit])
        self.clauses.append([z] + [-lit for lit in lits])
        return z

    def _or(self, lits):
        return -self._and([-lit for lit in lits])

    def encode(self, f, env):
        key = (id(f), tuple(env[v] for v in self._free(f)))
        lit = self.memo.get(key)
        if lit is None:
            lit = self._encode(f, env)
            self.memo[key] = lit
        return lit

    def _encode(self, f, env):
        if isinstance(f, Pred):
            const_args = [t.name for t in f.args if isinstance(t, Const)]
            if not const_args:
                return self._atom(f.name, tuple(env[t.name] for t in f.args))
            cases = []
            for values in itertools.product(range(self.n), repeat=len(const_args)):
                denot = dict(zip(const_args, values))
                args = tuple(denot[t.name] if isinstance(t, Const) else env[t.name] for t in f.args)
                guard = [self.const_vars[c][v] for c, v in denot.items()]
                cases.append(self._and(guard + [self._atom(f.name, args)]))
            return self._or(cases)
        if isinstance(f, Top):
            return self.true
        if isinstance(f, Bottom):
            return -self.true
        if isinstance(f, Not):
            return -self.encode(f.body, env)
        if isinstance(f, And):
            return self._and([self.encode(f.left, env), self.encode(f.right, env)])
        if isinstance(f, Or):
            return self._or([self.encode(f.left, env), self.encode(f.right, env)])
        if isinstance(f, Implies):
            return self._or([-self.encode(f.left, env), self.encode(f.right, env)])
        if isinstance(f, Iff):
            a, b = self.encode(f.left, env), self.encode(f.right, env)
            return self._or([self._and([a, b]), self._and([-a, -b])])
        body = [self.encode(f.body, {**env, f.var: d}) for d in range(self.n)]
        return self._and(body) if isinstance(f, ForAll) else self._or(body)


def _ground_and_solve(f, g, sig, consts, n):
    gr = _Grounder(n, consts)
    a, b = gr.encode(f, {}), gr.encode(g, {})
    gr.clauses += [[a, b], [-a, -b]]
    with Solver(name="minisat22", bootstrap_with=gr.clauses) as solver:
        if not solver.solve():
            return None
        true_vars = {v for v in solver.get_model() if v > 0}
    preds = {name: frozenset() for name in sig}
    for (name, args), v in gr.atoms.items():
        if v in true_vars:
            preds[name] = preds[name] | {args}
    const_values = {
        c: next(i for i, v in enumerate(vs) if v in true_vars)
        for c, vs in gr.const_vars.items()
    }
    interp = Interpretation(n, preds, const_values)
    # the countermodel must separate the formulas under direct evaluation
    assert evaluate(f, interp) != evaluate(g, interp)
    return interp


def verdict_to_dict(verdict):
    """JSON-friendly form used in record provenance."""
    if isinstance(verdict, CounterModel):
        interp = verdict.interpretation
        return {
            "kind": verdict.kind,
            "domain_size": verdict.domain_size,
            "predicates": {k: sorted(list(t) for t in v) for k, v in sorted(interp.predicates.items())},
            "constants": dict(sorted(interp.constants.items())),
        }
    if isinstance(verdict, EquivalentUpTo):
        return {"kind": verdict.kind, "max_domain": verdict.max_domain}
    return {"kind": verdict.kind}

