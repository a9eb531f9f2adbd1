"""Benchmark records and their JSONL form."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

TASKS = ("fol", "blood_relation", "number_series", "direction")
VARIANTS = ("base", "obf", "obf_l1", "obf_l2", "type1", "type2", "type3")
FIELDS = ("id", "task", "variant", "question_text", "payload", "answer", "provenance")


class SchemaViolation(ValueError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class AnswerMismatch(ValueError):
    """Two variants of the same item disagree on the answer."""


@dataclass(frozen=True)
class Record:
    id: str
    task: str
    variant: str
    question_text: str
    payload: object
    answer: str
    provenance: dict = field(default_factory=dict)

    @property
    def key(self):
        return (self.id, self.variant)

    def to_dict(self):
        return {k: getattr(self, k) for k in FIELDS}

    @classmethod
    def from_dict(cls, d, line=None):
        if not isinstance(d, dict):
            raise SchemaViolation(line, "record must be a JSON object")
        missing = [k for k in FIELDS if k not in d and k != "provenance"]
        if missing:
            raise SchemaViolation(line, f"missing field(s) {', '.join(missing)}")
        extra = sorted(set(d) - set(FIELDS))
        if extra:
            raise SchemaViolation(line, f"unknown field(s) {', '.join(extra)}")
        for k in ("id", "question_text", "answer"):
            if not isinstance(d[k], str):
                raise SchemaViolation(line, f"{k} must be a string")
        if d["task"] not in TASKS:
            raise SchemaViolation(line, f"unknown task {d['task']!r}")
        if d["variant"] not in VARIANTS:
            raise SchemaViolation(line, f"unknown variant {d['variant']!r}")
        prov = d.get("provenance", {})
        if not isinstance(prov, dict):
            raise SchemaViolation(line, "provenance must be an object")
        return cls(d["id"], d["task"], d["variant"], d["question_text"], d["payload"],
                   d["answer"], prov)


def check_answer_invariance(records):
    """Records sharing an id must carry the same answer."""
    seen = {}
    for r in records:
        if r.id in seen and seen[r.id] != r.answer:
            raise AnswerMismatch(f"id {r.id!r}: answer {r.answer!r} != {seen[r.id]!r}")
        seen.setdefault(r.id, r.answer)


def dumps_record(r):
    return json.dumps(r.to_dict(), ensure_ascii=False, separators=(", ", ": "))


def write_records(path, records):
    """Write JSONL atomically, refusing answer-inconsistent variants."""
    records = list(records)
    check_answer_invariance(records)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".records-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            for r in records:
                fh.write(dumps_record(r) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def iter_jsonl(path):
    """``(line number, object)`` for every non-blank line."""
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield n, json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaViolation(n, f"invalid JSON: {exc.msg}") from None


def read_records(path):
    return [Record.from_dict(obj, n) for n, obj in iter_jsonl(path)]
