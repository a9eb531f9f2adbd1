"""Scoring predictions against records, with a pluggable model client."""

from __future__ import annotations

import json
import os
import time
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .metrics import degradation, exact_match
from .records import SchemaViolation, iter_jsonl

WORKERS_ENV = "OBFUSBENCH_WORKERS"


class MissingPrediction(KeyError):
    pass


class ClientFailure(RuntimeError):
    def __init__(self, record_id, attempts, cause):
        super().__init__(f"record {record_id!r}: client failed after {attempts} attempt(s): {cause}")
        self.record_id = record_id
        self.attempts = attempts


def default_workers():
    """Worker count from the environment, else 4."""
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 4
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


class MockClient:
    """Deterministic client answering from a question -> answer mapping.

    ``fail`` lists questions to answer with ``wrong`` instead, which is handy
    for sign-convention checks.
    """

    def __init__(self, answers, fail=(), wrong="<wrong>"):
        self.answers = dict(answers)
        self.fail = set(fail)
        self.wrong = wrong

    @classmethod
    def echo_gold(cls, records, fail=lambda r: False):
        return cls({r.question_text: r.answer for r in records},
                   {r.question_text for r in records if fail(r)})

    def complete(self, question):
        if question in self.fail:
            return self.wrong
        return self.answers.get(question, "")


class HTTPClient:
    """POSTs ``{"prompt": ..., **params}`` as JSON; reads ``response_field`` back.

    Built from a JSON config file: ``{"url": ..., "headers": {...},
    "params": {"temperature": 0.0}, "response_field": "answer"}``.
    """

    def __init__(self, url, headers=None, params=None, response_field="answer", timeout=60):
        self.url = url
        self.headers = dict(headers or {})
        self.params = dict(params or {"temperature": 0.0})
        self.response_field = response_field
        self.timeout = timeout

    @classmethod
    def from_config(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))

    def complete(self, question):
        body = json.dumps({"prompt": question, **self.params}).encode()
        req = urllib.request.Request(self.url, body, {"Content-Type": "application/json", **self.headers})
        with urllib.request.urlopen(req, timeout=self.timeout) as resp:
            return str(json.load(resp)[self.response_field])


def _ask(client, record, retries, backoff):
    last = None
    for attempt in range(retries + 1):
        try:
            return client.complete(record.question_text)
        except Exception as exc:  # any client error is retried
            last = exc
            if attempt < retries:
                time.sleep(backoff * 2 ** attempt)
    raise ClientFailure(record.id, retries + 1, last)


def collect_predictions(records, client, *, max_workers=None, retries=2, backoff=0.5):
    """Ask ``client`` every question; returns predictions keyed by ``(id, variant)``.

    At most ``max_workers`` requests are in flight. Results are joined by key,
    so completion order does not matter.
    """
    records = list(records)
    max_workers = max_workers or default_workers()
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        answers = list(pool.map(lambda r: _ask(client, r, retries, backoff), records))
    return {r.key: a for r, a in zip(records, answers)}


def read_predictions(path):
    """Predictions JSONL: ``{"id", "prediction"}`` with an optional ``"variant"``."""
    preds = {}
    for n, obj in iter_jsonl(path):
        if not isinstance(obj, dict) or not isinstance(obj.get("id"), str) \
                or not isinstance(obj.get("prediction"), str):
            raise SchemaViolation(n, "prediction lines need string 'id' and 'prediction'")
        preds[(obj["id"], obj.get("variant"))] = obj["prediction"]
    return preds


def _lookup(preds, record):
    for key in (record.key, (record.id, None)):
        if key in preds:
            return preds[key]
    raise MissingPrediction(record.id)


@dataclass(frozen=True)
class ScoreReport:
    counts: dict                # task -> variant -> (correct, total)
    degradation: dict = field(default_factory=dict)

    def accuracy(self, task, variant):
        c, n = self.counts[task][variant]
        return Fraction(c, n)

    @property
    def accuracies(self):
        return {t: {v: self.accuracy(t, v) for v in vs} for t, vs in self.counts.items()}

    def to_dict(self):
        return {
            "accuracy": {t: {v: float(a) for v, a in vs.items()} for t, vs in self.accuracies.items()},
            "counts": {t: {v: {"correct": c, "total": n} for v, (c, n) in vs.items()}
                       for t, vs in self.counts.items()},
            "degradation": self.degradation,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self):
        per_task = self.degradation.get("per_task", {})
        rows = [("task", "variant", "correct", "total", "accuracy", "degradation %")]
        for t, vs in self.counts.items():
            for v, (c, n) in vs.items():
                deg = f"{per_task[t]:+.2f}" if v == "base" and t in per_task else ""
                rows.append((t, v, str(c), str(n), f"{c / n:.4f}", deg))
        if "mean" in self.degradation:
            rows.append(("mean", "", "", "", "", f"{self.degradation['mean']:+.2f}"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
                         for r in rows) + "\n"


def score_predictions(records, predictions=None, *, client=None, **client_kw):
    """EM accuracy per task and variant, plus degradation when computable.

    ``predictions`` maps ``(id, variant)`` (or ``(id, None)`` for every
    variant of an id) to a prediction string; alternatively pass ``client``.
    """
    records = list(records)
    if client is not None:
        predictions = collect_predictions(records, client, **client_kw)
    if predictions is None:
        raise ValueError("score_predictions needs predictions or a client")
    tally = {}
    for r in sorted(records, key=lambda r: (r.task, r.variant, r.id)):
        ok = exact_match(_lookup(predictions, r), r.answer)
        c, n = tally.setdefault(r.task, {}).get(r.variant, (0, 0))
        tally[r.task][r.variant] = (c + ok, n + 1)
    counts = {t: dict(sorted(vs.items(), key=lambda kv: (kv[0] != "base", kv[0])))
              for t, vs in sorted(tally.items())}
    cells = {t: {v: c / n for v, (c, n) in vs.items()} for t, vs in counts.items()}
    try:
        deg = degradation(cells)
    except (ValueError, ZeroDivisionError):
        deg = {}
    return ScoreReport(counts, deg)
