"""Seeded chaining of rewrite rules over the premises of a problem."""

from __future__ import annotations

from dataclasses import dataclass

from sklearn.base import BaseEstimator, TransformerMixin

from .._rng import derive_rng
from .._validation import check_positive_int, check_seed, check_sequence
from .equivalence import check_equivalence, is_equivalent
from .rewrite import (
    CATALOG, RewriteStep, RewriteTrace, RuleId, apply_rewrite, enumerate_applicable,
    tautology_witnesses,
)
from .syntax import Problem, atoms, size, subformula

DEFAULT_MAX_GROWTH = 12


class ObfuscationStalled(RuntimeError):
    pass


def problem_atoms(problem):
    """Distinct atoms of premises and conclusion, in reading order."""
    seen = {}
    for f in (*problem.premises, problem.conclusion):
        for a in atoms(f):
            seen.setdefault(a, None)
    return list(seen)


def obfuscate_formula(f, rng, min_rules=4, catalog=CATALOG, pool=None,
                      max_growth=DEFAULT_MAX_GROWTH):
    """Apply ``min_rules`` seeded rewrite steps to ``f``; returns ``(g, trace)``.

    Each step is a uniform draw over the applicable sites. A draw that would
    push the formula past ``max_growth`` times its original size is rejected;
    if a partial chain can no longer be extended within the cap, the search
    backs up and redraws, so only a formula with no admissible chain stalls.
    """
    pool = atoms(f) if pool is None else pool
    cap = max_growth * size(f)

    def extend(f, steps):
        if len(steps) == min_rules:
            return f, steps
        sites = enumerate_applicable(f, catalog, pool)
        while sites:
            rule, position = sites.pop(rng.randrange(len(sites)))
            witness = None
            if rule.id is RuleId.TAUTOLOGY_INJECT:
                choices = tautology_witnesses(f, position, pool)
                witness = choices[rng.randrange(len(choices))]
            g = apply_rewrite(rule, f, position, witness=witness)
            if size(g) > cap:
                continue
            step = RewriteStep(rule, position, subformula(f, position), subformula(g, position))
            found = extend(g, steps + [step])
            if found is not None:
                return found
        return None

    found = extend(f, [])
    if found is None:
        raise ObfuscationStalled(
            f"no chain of {min_rules} rewrites stays within {cap} nodes")
    g, steps = found
    return g, RewriteTrace(tuple(steps))


def obfuscate_premises(problem, seed, min_rules=4, catalog=CATALOG, *,
                       max_growth=DEFAULT_MAX_GROWTH, stream=()):
    """Rewrite every premise with ``min_rules`` steps; the conclusion is untouched.

    ``stream`` namespaces the random stream, e.g. by record id, so a batch
    gives the same result per record regardless of processing order.
    """
    seed = check_seed(seed)
    min_rules = check_positive_int(min_rules, "min_rules")
    pool = problem_atoms(problem)
    premises, traces = [], []
    for i, premise in enumerate(problem.premises):
        rng = derive_rng(seed, *stream, "premise", i)
        g, trace = obfuscate_formula(premise, rng, min_rules, catalog, pool, max_growth)
        premises.append(g)
        traces.append(trace)
    return Problem(tuple(premises), problem.conclusion, problem.label), traces


def verify_premises(base, obfuscated, max_domain=3, **kwargs):
    """Equivalence verdict for each (base, obfuscated) premise pair."""
    if len(base.premises) != len(obfuscated.premises):
        raise ValueError("problems have different numbers of premises")
    return [check_equivalence(f, g, max_domain, **kwargs)
            for f, g in zip(base.premises, obfuscated.premises)]


@dataclass(frozen=True)
class ObfuscationResult:
    problem: Problem
    traces: tuple
    verdicts: tuple = None

    @property
    def verified(self):
        return self.verdicts is not None and all(map(is_equivalent, self.verdicts))


class FOLObfuscator(TransformerMixin, BaseEstimator):
    """Estimator wrapper around :func:`obfuscate_premises`.

    ``transform`` maps a list of :class:`Problem` to :class:`ObfuscationResult`
    objects. Sample ``i`` draws from the stream ``(seed, i)``.
    """

    def __init__(self, seed=0, min_rules=4, catalog=None, max_growth=DEFAULT_MAX_GROWTH,
                 verify=True, max_domain=3):
        self.seed = seed
        self.min_rules = min_rules
        self.catalog = catalog
        self.max_growth = max_growth
        self.verify = verify
        self.max_domain = max_domain

    def _validate(self, X):
        check_seed(self.seed)
        check_positive_int(self.min_rules, "min_rules")
        check_positive_int(self.max_growth, "max_growth")
        check_positive_int(self.max_domain, "max_domain")
        X = check_sequence(X)
        for i, p in enumerate(X):
            if not isinstance(p, Problem):
                raise TypeError(f"sample {i} is {type(p).__name__}, expected Problem")
        return X

    def fit(self, X, y=None):
        X = self._validate(X)
        self.catalog_ = tuple(CATALOG if self.catalog is None else self.catalog)
        sig = {}
        for p in X:
            sig.update(p.signature)
        self.signature_ = sig
        self.n_samples_seen_ = len(X)
        return self

    def transform(self, X):
        if not hasattr(self, "catalog_"):
            raise AttributeError("FOLObfuscator is not fitted; call fit first")
        X = self._validate(X)
        out = []
        for i, p in enumerate(X):
            obf, traces = obfuscate_premises(
                p, self.seed, self.min_rules, self.catalog_,
                max_growth=self.max_growth, stream=(i,))
            verdicts = tuple(verify_premises(p, obf, self.max_domain)) if self.verify else None
            out.append(ObfuscationResult(obf, tuple(traces), verdicts))
        return out
