"""``obfusbench`` command line: generate, verify and score benchmark records.

Exit status is 0 on success, 1 when a record fails verification (or cannot
be generated) and 2 on usage errors, including unreadable input.
"""

from __future__ import annotations

import argparse
import functools
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__, tasks
from .evaluation import (
    AnswerMismatch, ClientFailure, HTTPClient, MissingPrediction, SchemaViolation,
    check_answer_invariance, collect_predictions, default_workers, read_predictions,
    read_records, score_predictions, write_records,
)
from .fol import export_equivalence, export_problem

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
SEED_HELP = "generator seed (64-bit integer)"


class UsageError(Exception):
    pass


def _seed(text):
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        n = 0
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _add_io(p, out=True):
    p.add_argument("--in", dest="input", required=True, metavar="PATH", help="input records (JSONL)")
    if out:
        p.add_argument("--out", required=True, metavar="PATH", help="output records (JSONL)")
    p.add_argument("--workers", type=_positive, default=None, metavar="N",
                   help="worker processes (default: $OBFUSBENCH_WORKERS or 4)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="obfusbench",
        description="Generate, verify and score logically obfuscated reasoning problems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    fol = sub.add_parser("fol", help="first-order logic problems")
    fol_sub = fol.add_subparsers(dest="action", metavar="ACTION", required=True)
    p = fol_sub.add_parser("obfuscate", help="rewrite every premise with equivalence-preserving rules")
    _add_io(p)
    p.add_argument("--seed", type=_seed, required=True, help=SEED_HELP)
    p.add_argument("--min-rules", type=_positive, default=4, metavar="N",
                   help="rewrite steps per premise (default: 4)")
    p.add_argument("--verify", dest="verify", action="store_true", default=True,
                   help="check each premise pair on finite models (default)")
    p.add_argument("--no-verify", dest="verify", action="store_false", help="skip verification")
    p.add_argument("--max-domain", type=_positive, default=3, metavar="N",
                   help="largest domain size checked (default: 3)")
    p = fol_sub.add_parser("export-prover9", help="write Prover9 input files")
    p.add_argument("--in", dest="input", required=True, metavar="PATH", help="fol records (JSONL)")
    p.add_argument("--out-dir", required=True, metavar="DIR", help="directory for the .in files")

    kin = sub.add_parser("kinship", help="blood-relation puzzles")
    kin_sub = kin.add_subparsers(dest="action", metavar="ACTION", required=True)
    p = kin_sub.add_parser("obfuscate", help="substitute one relation word")
    _add_io(p)
    p.add_argument("--level", type=str.lower, choices=("l1", "l2"), required=True,
                   help="substitution table level")
    p.add_argument("--seed", type=_seed, required=True, help=SEED_HELP)
    p.add_argument("--verify", action="store_true", help="resolve both puzzles and compare")

    ser = sub.add_parser("series", help="number series")
    ser_sub = ser.add_subparsers(dest="action", metavar="ACTION", required=True)
    p = ser_sub.add_parser("encode", help="encode the visible terms")
    _add_io(p)
    p.add_argument("--type", dest="kind", type=int, choices=(1, 2, 3), required=True,
                   help="1 planets, 2 codepoint sums, 3 MD5")
    p.add_argument("--seed", type=_seed, default=None, help="recorded in provenance")

    dire = sub.add_parser("direction", help="direction-sense paths")
    dir_sub = dire.add_subparsers(dest="action", metavar="ACTION", required=True)
    p = dir_sub.add_parser("obfuscate", help="insert self-canceling detours")
    _add_io(p)
    p.add_argument("--pairs", type=_positive, required=True, metavar="K",
                   help="self-canceling move pairs to insert")
    p.add_argument("--seed", type=_seed, required=True, help=SEED_HELP)
    p.add_argument("--min-magnitude", type=_positive, default=1, metavar="N",
                   help="shortest detour leg (default: 1)")
    p.add_argument("--max-magnitude", type=_positive, default=9, metavar="N",
                   help="longest detour leg (default: 9)")
    p.add_argument("--distractors", type=int, default=0, metavar="N",
                   help="zero-distance narrative sentences per record")
    p.add_argument("--verify", dest="verify", action="store_true", default=True,
                   help="check net displacement (default)")
    p.add_argument("--no-verify", dest="verify", action="store_false", help="skip verification")

    p = sub.add_parser("verify", help="re-verify obfuscated records from their provenance")
    _add_io(p, out=False)

    p = sub.add_parser("score", help="exact-match accuracy and degradation")
    p.add_argument("--records", required=True, metavar="PATH", help="gold records (JSONL)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preds", metavar="PATH", help="predictions JSONL: {id, prediction[, variant]}")
    src.add_argument("--client-config", metavar="PATH", help="JSON config of an HTTP model client")
    p.add_argument("--report", required=True, metavar="PATH", help="JSON report")
    p.add_argument("--workers", type=_positive, default=None, metavar="N",
                   help="concurrent client requests")
    return parser


def _same_file(a, b):
    if os.path.exists(a) and os.path.exists(b):
        return os.path.samefile(a, b)
    return os.path.abspath(a) == os.path.abspath(b)


def _guard_output(out, *inputs):
    for i in inputs:
        if i and _same_file(out, i):
            raise UsageError(f"refusing to overwrite input {i}")


def _read(path):
    try:
        return read_records(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except SchemaViolation as exc:
        raise UsageError(f"{path}: {exc}") from None


def _pmap(fn, items, workers):
    """Ordered map over a process pool; output order is input order."""
    workers = workers or default_workers()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _safe_call(fn, record):
    try:
        return fn(record), None
    except Exception as exc:  # reported per record, never silently dropped
        return None, f"{type(exc).__name__}: {exc}"


def _generate(args, task, fn):
    _guard_output(args.out, args.input)
    records = _read(args.input)
    todo = [r for r in records if r.task == task and r.variant == "base"]
    skipped = len(records) - len(todo)
    if skipped:
        print(f"skipping {skipped} record(s) that are not {task} base records", file=sys.stderr)
    results = _pmap(functools.partial(_safe_call, fn), todo, args.workers)
    errors = [(r.id, err) for r, (_, err) in zip(todo, results) if err]
    for rid, err in errors:
        print(f"error: record {rid}: {err}", file=sys.stderr)
    if errors:
        return EXIT_FAILED
    out = [rec for rec, _ in results]
    write_records(args.out, out)
    failed = [r.id for r in out if r.provenance.get("verified") is False]
    for rid in failed:
        print(f"verification failed: {rid}", file=sys.stderr)
    print(f"wrote {len(out)} record(s) to {args.out}", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


def _export_prover9(args):
    records = _read(args.input)
    os.makedirs(args.out_dir, exist_ok=True)
    written = 0
    for r in records:
        if r.task != "fol":
            continue
        stem = re.sub(r"[^A-Za-z0-9_.-]", "_", f"{r.id}-{r.variant}")
        files = {f"{stem}.in": export_problem(tasks.problem_from_payload(r.payload))}
        if "base" in r.provenance:
            base = tasks.problem_from_payload(r.provenance["base"])
            obf = tasks.problem_from_payload(r.payload)
            for i, (f, g) in enumerate(zip(base.premises, obf.premises)):
                files[f"{stem}.premise{i}.equiv.in"] = export_equivalence(f, g)
        for name, text in files.items():
            path = os.path.join(args.out_dir, name)
            _guard_output(path, args.input)
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written += 1
    print(f"wrote {written} file(s) to {args.out_dir}", file=sys.stderr)
    return EXIT_OK


def _verify(args):
    records = _read(args.input)
    status = EXIT_OK
    try:
        check_answer_invariance(records)
    except AnswerMismatch as exc:
        print(f"FAILED {exc}", file=sys.stderr)
        status = EXIT_FAILED
    results = _pmap(tasks.verify_record, records, args.workers)
    for r, (ok, reason) in zip(records, results):
        if not ok:
            print(f"FAILED {r.id} ({r.task}/{r.variant}): {reason}", file=sys.stderr)
            status = EXIT_FAILED
    checked = sum(r.variant != "base" for r in records)
    print(f"verified {checked} obfuscated record(s); "
          f"{'all passed' if status == EXIT_OK else 'failures above'}")
    return status


def _score(args):
    _guard_output(args.report, args.records, args.preds, args.client_config)
    records = _read(args.records)
    try:
        if args.preds:
            preds = read_predictions(args.preds)
        else:
            client = HTTPClient.from_config(args.client_config)
            preds = collect_predictions(records, client, max_workers=args.workers)
        report = score_predictions(records, preds)
    except OSError as exc:
        raise UsageError(f"cannot read input: {exc}") from None
    except SchemaViolation as exc:
        raise UsageError(str(exc)) from None
    except (MissingPrediction, ClientFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.to_json())
    sys.stdout.write(report.to_table())
    return EXIT_OK


def run(args):
    if args.command == "fol" and args.action == "obfuscate":
        fn = functools.partial(tasks.obfuscate_fol, seed=args.seed, min_rules=args.min_rules,
                               verify=args.verify, max_domain=args.max_domain)
        return _generate(args, "fol", fn)
    if args.command == "fol":
        return _export_prover9(args)
    if args.command == "kinship":
        fn = functools.partial(tasks.obfuscate_kinship, seed=args.seed,
                               level=args.level.upper(), verify=args.verify)
        return _generate(args, "blood_relation", fn)
    if args.command == "series":
        fn = functools.partial(tasks.encode_series, seed=args.seed, kind=args.kind)
        return _generate(args, "number_series", fn)
    if args.command == "direction":
        if args.max_magnitude < args.min_magnitude or args.distractors < 0:
            raise UsageError("need --min-magnitude <= --max-magnitude and --distractors >= 0")
        fn = functools.partial(tasks.obfuscate_direction, seed=args.seed, pairs=args.pairs,
                               magnitude_range=(args.min_magnitude, args.max_magnitude),
                               distractors=args.distractors, verify=args.verify)
        return _generate(args, "direction", fn)
    if args.command == "verify":
        return _verify(args)
    return _score(args)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    try:
        return run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
