"""Formula renderers: ascii, unicode, prover9 and an English template style."""

from __future__ import annotations

from .syntax import (
    ATOMS, BINARY, QUANTIFIERS, And, Bottom, Exists, ForAll, Iff, Implies,
    Not, Or, Pred, Top, constants,
)

STYLES = ("ascii", "unicode", "prover9", "nl-template")

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_RIGHT_ASSOC = {Implies}

_SYMBOLS = {
    "ascii": {
        Not: "~", And: " & ", Or: " | ", Implies: " -> ", Iff: " <-> ",
        ForAll: "forall {}. ", Exists: "exists {}. ", Top: "true", Bottom: "false",
    },
    "unicode": {
        Not: "¬", And: " ∧ ", Or: " ∨ ", Implies: " → ", Iff: " ↔ ",
        ForAll: "∀{}. ", Exists: "∃{}. ", Top: "⊤", Bottom: "⊥",
    },
}


def _pred(f):
    return f"{f.name}({','.join(t.name for t in f.args)})"


def _infix(f, sym):
    if isinstance(f, Pred):
        return _pred(f)
    if isinstance(f, (Top, Bottom)):
        return sym[type(f)]
    if isinstance(f, Not):
        inner = _infix(f.body, sym)
        if isinstance(f.body, BINARY + QUANTIFIERS):
            inner = f"({inner})"
        return sym[Not] + inner
    if isinstance(f, QUANTIFIERS):
        body = _infix(f.body, sym)
        if isinstance(f.body, BINARY):
            body = f"({body})"
        return sym[type(f)].format(f.var) + body
    p = _PREC[type(f)]
    left, right = _infix(f.left, sym), _infix(f.right, sym)
    if _needs_parens(f.left, p, type(f) in _RIGHT_ASSOC):
        left = f"({left})"
    if _needs_parens(f.right, p, type(f) not in _RIGHT_ASSOC):
        right = f"({right})"
    return left + sym[type(f)] + right


def _needs_parens(child, prec, tie):
    if isinstance(child, QUANTIFIERS):
        return True
    if isinstance(child, BINARY):
        cp = _PREC[type(child)]
        return cp < prec or (cp == prec and tie)
    return False


_P9 = {And: " & ", Or: " | ", Implies: " -> ", Iff: " <-> "}


def _prover9(f):
    if isinstance(f, Pred):
        return _pred(f) if f.args else f.name
    if isinstance(f, Top):
        return "$T"
    if isinstance(f, Bottom):
        return "$F"
    if isinstance(f, Not):
        inner = _prover9(f.body)
        return "-" + (inner if isinstance(f.body, ATOMS) else f"({inner})")
    if isinstance(f, QUANTIFIERS):
        word = "all" if isinstance(f, ForAll) else "exists"
        body = _prover9(f.body)
        if isinstance(f.body, BINARY):
            body = f"({body})"
        return f"{word} {f.var} {body}"
    parts = []
    for child in (f.left, f.right):
        s = _prover9(child)
        parts.append(f"({s})" if isinstance(child, BINARY + QUANTIFIERS) else s)
    return parts[0] + _P9[type(f)] + parts[1]


def _nl(f):
    if isinstance(f, Pred):
        if not f.args:
            return f"{f.name} holds"
        return f"{f.name} holds of {', '.join(t.name for t in f.args)}"
    if isinstance(f, Top):
        return "a tautology holds"
    if isinstance(f, Bottom):
        return "a contradiction arises"
    if isinstance(f, Not):
        return f"it is not the case that {_nl(f.body)}"
    if isinstance(f, ForAll):
        return f"for every entity {f.var}, {_nl(f.body)}"
    if isinstance(f, Exists):
        return f"there exists an entity {f.var} such that {_nl(f.body)}"
    a, b = _nl(f.left), _nl(f.right)
    if isinstance(f, And):
        return f"both {a} and {b}"
    if isinstance(f, Or):
        return f"either {a} or {b}"
    if isinstance(f, Implies):
        return f"if {a} then {b}"
    return f"it holds that {a} if and only if {b}"


def render_formula(f, style="ascii"):
    """Render ``f`` in one of :data:`STYLES`.

    The prover9 style renders a single formula terminated by ``.``.
    """
    if style in _SYMBOLS:
        return _infix(f, _SYMBOLS[style])
    if style == "prover9":
        return _prover9(f) + "."
    if style == "nl-template":
        return _nl(f)
    raise ValueError(f"unknown style {style!r}; expected one of {STYLES}")


def _needs_prolog_style(formulas):
    # Prover9 reads free symbols starting with u-z as variables.
    return any(c[0] in "uvwxyz" for f in formulas for c in constants(f))


def to_prover9(premises, goals):
    """Prover9 input text with an assumptions block and a goals block."""
    premises, goals = list(premises), list(goals)
    lines = []
    if _needs_prolog_style(premises + goals):
        lines += ["set(prolog_style_variables).", ""]
    lines.append("formulas(assumptions).")
    lines += [render_formula(p, "prover9") for p in premises]
    lines += ["end_of_list.", "", "formulas(goals)."]
    lines += [render_formula(g, "prover9") for g in goals]
    lines.append("end_of_list.")
    return "\n".join(lines) + "\n"


def export_problem(problem):
    """Prover9 input for ``premises |- conclusion``."""
    return to_prover9(problem.premises, [problem.conclusion])


def export_equivalence(f, g):
    """Prover9 input whose goal is ``f <-> g`` with no assumptions."""
    return to_prover9([], [Iff(f, g)])
