"""First-order logic: syntax, parsing, rendering, rewriting and verification."""

from .equivalence import (
    BudgetExceeded, CounterModel, EquivalentUpTo, Interpretation,
    PropositionallyEquivalent, SignatureMismatch, check_equivalence, evaluate,
    is_equivalent, verdict_to_dict,
)
from .obfuscate import (
    FOLObfuscator, ObfuscationResult, ObfuscationStalled, obfuscate_formula,
    obfuscate_premises, verify_premises,
)
from .parser import ParseError, parse_formula
from .render import STYLES, export_equivalence, export_problem, render_formula, to_prover9
from .rewrite import (
    CATALOG, RewriteRule, RewriteStep, RewriteTrace, RuleId, RuleNotApplicable,
    apply_rewrite, enumerate_applicable,
)
from .syntax import (
    And, ArityError, Bottom, Const, Exists, ForAll, Iff, Implies, InvalidPosition,
    Not, Or, Pred, Problem, Top, Var, free_vars,
)
