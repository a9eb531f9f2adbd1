"""Answer normalization, exact-match accuracy, degradation and Cohen's kappa."""

from __future__ import annotations

import re
import string
import unicodedata
from collections import Counter
from fractions import Fraction


class EmptyInput(ValueError):
    pass


class ZeroBaseAccuracy(ZeroDivisionError):
    pass


class LengthMismatch(ValueError):
    pass


class DegenerateMarginals(ZeroDivisionError):
    pass


_PUNCT = re.compile("[" + re.escape(string.punctuation) + "]")
_SPACE = re.compile(r"\s+")


def normalize(text):
    """NFC, lowercase, punctuation to a space, whitespace collapsed and trimmed.

    Punctuation becomes a space rather than vanishing so that "Sister-in-law"
    and "sister in law" compare equal. Unicode punctuation (category P*) is
    treated like ASCII punctuation.
    """
    text = unicodedata.normalize("NFC", text).lower()
    text = _PUNCT.sub(" ", text)
    text = "".join(" " if unicodedata.category(c).startswith("P") else c for c in text)
    return _SPACE.sub(" ", text).strip()


def exact_match(prediction, gold):
    return normalize(prediction) == normalize(gold)


def em_accuracy(pairs):
    """Fraction of ``(prediction, gold)`` pairs matching after normalization."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyInput("em_accuracy needs at least one pair")
    return Fraction(sum(exact_match(p, g) for p, g in pairs), len(pairs))


def relative_drop(base, obf):
    """Percent change from ``base`` to ``obf`` accuracy; negative is a drop."""
    if base <= 0:
        raise ZeroBaseAccuracy("base accuracy must be positive")
    return (obf - base) / base * 100


def degradation(report):
    """Per-task and headline degradation in percent.

    ``report`` maps task -> {"base": acc, <obfuscated variant>: acc, ...}. A
    task's drop is the mean relative drop over its obfuscated variants (so
    the two blood-relation levels are averaged); the headline figure is the
    unweighted mean over tasks.
    """
    per_task = {}
    for task, cells in report.items():
        obf = [v for k, v in cells.items() if k != "base"]
        if "base" not in cells or not obf:
            continue
        drops = [relative_drop(cells["base"], v) for v in obf]
        per_task[task] = sum(drops) / len(drops)
    if not per_task:
        raise EmptyInput("no task has both base and obfuscated accuracies")
    return {"per_task": per_task, "mean": sum(per_task.values()) / len(per_task)}


def cohen_kappa(a, b):
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e) between two labelings."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} labels vs {len(b)}")
    if not a:
        raise EmptyInput("cohen_kappa needs at least one label pair")
    n = len(a)
    p_o = Fraction(sum(x == y for x, y in zip(a, b)), n)
    ca, cb = Counter(a), Counter(b)
    p_e = sum(Fraction(ca[k] * cb[k], n * n) for k in ca.keys() & cb.keys())
    if p_e == 1:
        if p_o == 1:
            return 1.0
        raise DegenerateMarginals("expected agreement is 1")
    return float((p_o - p_e) / (1 - p_e))
