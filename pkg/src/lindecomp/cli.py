"""Command-line front end: run protocols, attack transcripts, verify, benchmark.

Exit codes: 0 success, 1 cryptographic failure (attack failed, key mismatch,
bound violated), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import attacks, bench, kernels, linalg, protocols
from .platform import FixtureError, make_block_fixture, make_polynomial_fixture

log = logging.getLogger("lindecomp")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _pair(text: str, name: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{name} must look like 'A,B', got {text!r}") from None
    return a, b


def parse_message(text: str, p: int) -> np.ndarray:
    """Comma-separated integers, decimal or 0x-prefixed hex."""
    try:
        vals = [int(tok.strip(), 0) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad message vector {text!r}") from None
    if any(v < 0 or v >= p for v in vals):
        raise UsageError(f"message entries must lie in [0, {p})")
    return linalg.as_array(vals, p)


def payload_json(m: np.ndarray) -> str:
    return json.dumps(protocols.payload_to_json(m))


def build_fixture(args, rng):
    p = linalg.check_modulus(args.modulus)
    family = args.fixture or ("polynomial" if args.protocol == "harley" else "block")
    if family == "block":
        if args.blocks:
            n1, n2 = _pair(args.blocks, "--blocks")
        else:
            n1 = (args.dim + 1) // 2
            n2 = args.dim - n1
        if min(n1, n2) < 1:
            raise UsageError("block fixtures need both blocks >= 1 (use --dim >= 2 or --blocks)")
        return make_block_fixture(n1, n2, args.gens, args.gens, p, rng, seed=args.seed)
    if args.dim < 2:
        raise UsageError("polynomial fixtures need --dim >= 2")
    return make_polynomial_fixture(args.dim, p, rng, args.gens, args.gens, seed=args.seed)


def cmd_run(args) -> int:
    if args.seed is None:
        raise UsageError("--seed is required")
    if args.gens < 1:
        raise UsageError("--gens must be >= 1")
    word_len = _pair(args.word_len, "--word-len")
    if word_len[0] < 0 or word_len[1] < word_len[0]:
        raise UsageError("--word-len needs 0 <= min <= max")
    rng = np.random.default_rng(args.seed)
    fixture = build_fixture(args, rng)
    if args.protocol == "wang":
        result = protocols.run_wang(fixture, rng, word_len)
    elif args.protocol == "kolee":
        result = protocols.run_kolee(fixture, rng, word_len)
    elif args.protocol == "harley":
        if args.message is not None:
            x = parse_message(args.message, fixture.modulus)
            if x.shape != (fixture.dimension,):
                raise UsageError(f"message needs {fixture.dimension} entries, got {x.size}")
        else:
            x = linalg.random_matrix((fixture.dimension,), fixture.modulus, rng)
        result = protocols.run_harley(fixture, x, rng, word_len)
    else:
        schedule = protocols.wang_schedule()
        if args.schedule:
            schedule = protocols.Schedule.from_json(json.loads(Path(args.schedule).read_text()))
        result = protocols.run_generic(fixture, schedule, rng, word_len)
    if not np.array_equal(result.key_alice, result.key_bob):
        log.error("honest parties disagree on the key")
        return EXIT_FAIL
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "transcript.json").write_text(result.transcript.dumps() + "\n")
    key = {"protocol_id": result.transcript.protocol_id, "modulus": fixture.modulus,
           **protocols.payload_to_json(result.key)}
    (out / "key.json").write_text(json.dumps(key) + "\n")
    print(f"{args.protocol}: n={fixture.dimension} p={fixture.modulus} seed={args.seed} "
          f"messages={len(result.transcript.messages)} -> {out / 'transcript.json'}, {out / 'key.json'}")
    return EXIT_OK


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _recover(transcript_path: str, plan_path: str | None) -> tuple[protocols.Transcript, np.ndarray]:
    t = protocols.Transcript.from_json(_load_json(transcript_path))
    plan = attacks.AttackPlan.from_json(_load_json(plan_path)) if plan_path else None
    return t, attacks.attack(t, plan)


def cmd_attack(args) -> int:
    _, recovered = _recover(args.transcript, args.plan)
    print(payload_json(recovered))
    return EXIT_OK


def cmd_verify(args) -> int:
    key_data = _load_json(args.key)
    t, recovered = _recover(args.transcript, args.plan)
    try:
        stored = protocols.payload_from_json(key_data, t.modulus, t.fixture_public.dimension)
    except (protocols.TranscriptError, TypeError) as exc:
        raise UsageError(f"malformed key file: {exc}") from None
    if np.array_equal(stored, recovered):
        print("match")
        return EXIT_OK
    print("MISMATCH")
    return EXIT_FAIL


def parse_grid(text: str) -> list[tuple[int, int, int]]:
    """``n=2,3,4,5;k=1,2,3;p=1009`` -> cartesian product in n, k, p order."""
    fields = {"n": [], "k": [], "p": [linalg.DEFAULT_MODULUS]}
    try:
        for part in filter(None, (s.strip() for s in text.split(";"))):
            key, vals = part.split("=")
            key = key.strip()
            if key not in fields:
                raise ValueError(key)
            fields[key] = [int(v) for v in vals.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid spec {text!r}") from None
    grid = [(n, k, p) for n in fields["n"] for k in fields["k"] for p in fields["p"]]
    if not grid:
        raise UsageError("empty grid")
    for n, k, p in grid:
        if n < 2 or k < 1:
            raise UsageError(f"invalid grid cell n={n}, k={k}")
        linalg.check_modulus(p)
    return grid


def cmd_bench(args) -> int:
    grid = parse_grid(args.grid)
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    records = bench.bench_span_closure(grid, args.seeds, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bench.write_csv(records, out / "bench.csv")
    summary = bench.summarize(records)
    if args.compare_backends:
        summary["backend_micros"] = bench.compare_backends(grid, args.seeds, args.seed)
    (out / "bench_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(f"{len(records)} records ({kernels.active()} kernels) -> {out / 'bench.csv'}")
    for k, slope in summary["loglog_slope_time_vs_r"].items():
        if slope is not None:
            print(f"  k={k}: time ~ r^{slope:.2f}")
    if summary["violations"] or summary["errors"]:
        print(f"bound violations: {len(summary['violations'])}, errors: {len(summary['errors'])}")
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lindecomp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a protocol; write transcript.json and key.json")
    run.add_argument("--protocol", choices=protocols.PROTOCOLS, required=True)
    run.add_argument("--modulus", type=int, default=linalg.DEFAULT_MODULUS)
    run.add_argument("--dim", type=int, default=4, help="matrix size")
    run.add_argument("--blocks", help="block sizes 'n1,n2' (block fixtures; overrides --dim)")
    run.add_argument("--fixture", choices=("block", "polynomial"))
    run.add_argument("--gens", type=int, default=2, help="generators per side")
    run.add_argument("--word-len", default="3,8", help="private word length range 'min,max'")
    run.add_argument("--seed", type=int)
    run.add_argument("--message", help="Harley plaintext: comma-separated ints (0x.. hex allowed)")
    run.add_argument("--schedule", help="generic protocol schedule JSON (default: Wang message flow)")
    run.add_argument("--out", default=".", help="output directory")
    run.set_defaults(func=cmd_run)

    att = sub.add_parser("attack", help="recover the key from a transcript")
    att.add_argument("transcript")
    att.add_argument("--plan", help="attack plan JSON (required for generic transcripts)")
    att.set_defaults(func=cmd_attack)

    ver = sub.add_parser("verify", help="attack a transcript and compare with a key file")
    ver.add_argument("transcript")
    ver.add_argument("key")
    ver.add_argument("--plan")
    ver.set_defaults(func=cmd_verify)

    bn = sub.add_parser("bench", help="span-closure scaling benchmark")
    bn.add_argument("--grid", default="n=2,3,4,5;k=1,2,3;p=1009")
    bn.add_argument("--seeds", type=int, default=3)
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--compare-backends", action="store_true")
    bn.add_argument("--out", default=".")
    bn.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except attacks.AttackFailure as exc:
        print(f"attack failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, protocols.TranscriptError, protocols.ScheduleError, attacks.PlanError,
            FixtureError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
