"""Per-task record generation and re-verification.

Each generator takes a base :class:`Record` and returns the obfuscated
record. Its provenance carries the base payload, so :func:`verify_record`
can recheck it without regenerating anything.
"""

from __future__ import annotations

from dataclasses import replace

from . import series, spatial
from .evaluation.records import Record
from .fol import (
    Problem, RewriteRule, apply_rewrite, is_equivalent, obfuscate_premises,
    parse_formula, render_formula, verdict_to_dict, verify_premises,
)
from .fol.syntax import bound_at
from .kinship import substitute_once, verify_kinship

FOL_PROMPT = "Does the conclusion follow from the premises? Answer True or False."
DIRECTION_PROMPT = "Relative to the starting point, what is the final distance and direction?"
CODEPOINT_NOTE = ("codepoint sums are computed from the planet spellings; published "
                  "figures that disagree (e.g. 541 for Venus) are not used")


class RecordError(ValueError):
    """A record whose payload or provenance does not fit its task."""


# FOL

def problem_from_payload(payload):
    try:
        return Problem(tuple(parse_formula(p) for p in payload["premises"]),
                       parse_formula(payload["conclusion"]), bool(payload.get("label", True)))
    except (KeyError, TypeError) as exc:
        raise RecordError(f"bad fol payload: {exc}") from None


def problem_to_payload(problem):
    return {"premises": [render_formula(p) for p in problem.premises],
            "conclusion": render_formula(problem.conclusion),
            "label": problem.label}


def fol_question(problem):
    lines = ["Premises:"]
    lines += [f"{i}. {render_formula(p)}" for i, p in enumerate(problem.premises, 1)]
    lines += [f"Conclusion: {render_formula(problem.conclusion)}", FOL_PROMPT]
    return "\n".join(lines)


def _trace_to_list(trace):
    return [{"rule": str(s.rule), "position": list(s.position),
             "witness": None if s.witness is None else render_formula(s.witness)}
            for s in trace.steps]


def _replay(base, steps):
    f = base
    for s in steps:
        rid, direction = s["rule"].split("/")
        position = tuple(s["position"])
        witness = None
        if s["witness"] is not None:
            witness = parse_formula(s["witness"], sorted(bound_at(f, position)))
        f = apply_rewrite(RewriteRule(rid, direction), f, position, witness=witness)
    return f


def obfuscate_fol(record, seed, *, min_rules=4, verify=True, max_domain=3):
    base = problem_from_payload(record.payload)
    obf, traces = obfuscate_premises(base, seed, min_rules, stream=(record.id,))
    prov = {"seed": seed, "min_rules": min_rules, "base": record.payload,
            "traces": [_trace_to_list(t) for t in traces]}
    if verify:
        verdicts = verify_premises(base, obf, max_domain)
        prov["verdicts"] = [verdict_to_dict(v) for v in verdicts]
        prov["verified"] = all(map(is_equivalent, verdicts))
    return Record(record.id, "fol", "obf", fol_question(obf), problem_to_payload(obf),
                  record.answer, prov)


def verify_fol(record, max_domain=3):
    base = problem_from_payload(record.provenance["base"])
    obf = problem_from_payload(record.payload)
    if base.conclusion != obf.conclusion:
        return False, "conclusion changed"
    for i, v in enumerate(verify_premises(base, obf, max_domain)):
        if not is_equivalent(v):
            return False, f"premise {i}: counter-model of size {v.domain_size}"
    # the recorded traces must also rebuild the premises exactly
    for i, steps in enumerate(record.provenance.get("traces", ())):
        if _replay(base.premises[i], steps) != obf.premises[i]:
            return False, f"premise {i}: trace does not replay"
    return True, ""


# Kinship

def obfuscate_kinship(record, seed, *, level="L1", verify=False):
    text = record.payload["puzzle"]
    obf, edit = substitute_once(text, level, seed, stream=(record.id,))
    prov = {"seed": seed, "level": level, "base": record.payload, "edit": edit}
    if verify:
        prov["verdict"] = verify_kinship(text, obf, edit).to_dict()
        prov["verified"] = prov["verdict"]["kind"] == "equivalent"
    question = record.question_text.replace(text, obf) if text in record.question_text else obf
    return Record(record.id, "blood_relation", "obf_" + level.lower(), question,
                  {"puzzle": obf}, record.answer, prov)


def verify_blood_relation(record):
    v = verify_kinship(record.provenance["base"]["puzzle"], record.payload["puzzle"],
                       record.provenance.get("edit"))
    return v.equivalent, v.reason


# Number series

def series_from_payload(payload, answer=None):
    try:
        return series.SeriesInstance(tuple(payload["terms"]), answer)
    except (KeyError, TypeError) as exc:
        raise RecordError(f"bad number_series payload: {exc}") from None


def encode_series(record, seed=None, *, kind=1):
    s = series_from_payload(record.payload)
    enc = series.encode(s, kind)
    prov = {"seed": seed, "type": kind, "base": record.payload, "mapping_log": enc.log.to_dict()}
    if kind == 2:
        prov["note"] = CODEPOINT_NOTE
    question = f"Find the missing term: {enc.surface}"
    return Record(record.id, "number_series", f"type{kind}", question,
                  {"surface": enc.surface}, record.answer, prov)


def verify_number_series(record):
    log = series.MappingLog.from_dict(record.provenance["mapping_log"])
    try:
        got = series.decode(record.payload["surface"], log)
    except (ValueError, KeyError) as exc:
        return False, f"decode failed: {exc}"
    want = series_from_payload(record.provenance["base"])
    if got.terms != want.terms:
        return False, f"decoded {list(got.terms)} != {list(want.terms)}"
    return True, ""


# Direction

def path_from_payload(payload):
    try:
        p = spatial.path_from_list(payload["moves"], payload.get("unit", "km"))
    except (KeyError, TypeError) as exc:
        raise RecordError(f"bad direction payload: {exc}") from None
    return spatial.MovementPath(p.moves, spatial.notes_from_list(payload.get("notes", ())), p.unit)


def path_to_payload(p):
    out = {"moves": spatial.path_to_list(p), "unit": p.unit}
    if p.notes:
        out["notes"] = spatial.notes_to_list(p)
    return out


def obfuscate_direction(record, seed, *, pairs=2, magnitude_range=(1, 9), distractors=0,
                        verify=True):
    base = path_from_payload(record.payload)
    obf = spatial.insert_detours(base, pairs, seed, magnitude_range, stream=(record.id,))
    if distractors:
        obf = spatial.add_distractors(obf, distractors, seed, stream=(record.id,))
    text, segments = spatial.substitute_surface(obf)
    prov = {"seed": seed, "pairs": pairs, "base": record.payload, "segments": segments}
    if verify:
        v = spatial.verify_invariance(base, obf)
        prov["verdict"] = v.to_dict()
        prov["verified"] = v.invariant
    return Record(record.id, "direction", "obf", f"{text} {DIRECTION_PROMPT}",
                  path_to_payload(obf), record.answer, prov)


def verify_direction(record):
    v = spatial.verify_invariance(path_from_payload(record.provenance["base"]),
                                  path_from_payload(record.payload))
    if v.invariant:
        return True, ""
    return False, f"drift east {v.delta.east}, north {v.delta.north}"


_VERIFIERS = {
    "fol": verify_fol,
    "blood_relation": verify_blood_relation,
    "number_series": verify_number_series,
    "direction": verify_direction,
}


def verify_record(record):
    """``(ok, reason)`` for an obfuscated record; base records trivially pass."""
    if record.variant == "base":
        return True, ""
    if "base" not in record.provenance:
        return False, "provenance has no base payload"
    try:
        return _VERIFIERS[record.task](record)
    except (RecordError, KeyError, ValueError, TypeError) as exc:
        return False, f"{type(exc).__name__}: {exc}"


def with_provenance(record, **extra):
    return replace(record, provenance={**record.provenance, **extra})
