"""End-to-end acceptance checks; each prints one PASS/FAIL line in the terminal summary."""
import inspect

import numpy as np
import pytest

from lindecomp import attacks, linalg
from lindecomp.attacks import AttackFailure, attack, attack_harley, attack_kolee, attack_wang
from lindecomp.bench import DEFAULT_GRID, bench_span_closure
from lindecomp.decompose import apply_operator, derive_operator
from lindecomp.linalg import sandwich
from lindecomp.platform import GeneratorSet, ProtocolFixture, make_block_fixture, make_polynomial_fixture, random_word
from lindecomp.protocols import (
    Transcript,
    kolee_exchange,
    run_generic,
    run_harley,
    run_kolee,
    run_wang,
    wang_schedule,
)
from lindecomp.span import closure_violations, span_closure

P = 1009
RUNS = 100


def block(seed):
    return make_block_fixture(2, 2, 2, 2, P, np.random.default_rng(seed), seed=seed)


@pytest.fixture(scope="module")
def honest_runs():
    """100 seeded runs of every protocol, each on its own freshly sampled fixture."""
    runs = {"wang": [], "kolee": [], "harley": [], "generic": []}
    for seed in range(RUNS):
        rng = np.random.default_rng([1, seed])
        runs["wang"].append(run_wang(block(seed), rng))
        runs["kolee"].append(run_kolee(block(seed), rng))
        runs["generic"].append(run_generic(block(seed), wang_schedule(), rng))
        poly = make_polynomial_fixture(4, P, np.random.default_rng([2, seed]), seed=seed)
        runs["harley"].append(run_harley(poly, linalg.random_matrix((4,), P, rng), rng))
    return runs


def test_operator_transport(acceptance_report):
    ok = 0
    for seed in range(RUNS):
        rng = np.random.default_rng([3, seed])
        fx = block(seed)
        u = fx.h
        a, b = (random_word(fx.a_side, rng) for _ in range(2))
        c, d = (random_word(fx.b_side, rng) for _ in range(2))
        op = derive_operator(span_closure(fx.a_side, u), sandwich(a, u, b, P))
        got = apply_operator(op, sandwich(c, u, d, P))
        ok += np.array_equal(got, sandwich(linalg.mat_mul(a, c, P), u, linalg.mat_mul(d, b, P), P))
    acceptance_report("1 operator transport", ok == RUNS, f"{ok}/{RUNS} exact")
    assert ok == RUNS


def _recovered(results, fn):
    return sum(np.array_equal(fn(r.transcript), r.key) for r in results)


def test_wang_attack(honest_runs, acceptance_report):
    ok = _recovered(honest_runs["wang"], attack_wang)
    acceptance_report("2 Wang attack", ok == RUNS, f"{ok}/{RUNS} keys recovered")
    assert ok == RUNS


def test_kolee_attack(honest_runs, acceptance_report):
    ok = _recovered(honest_runs["kolee"], attack_kolee)
    a_side = GeneratorSet.from_gens([[[2, 0], [0, 1]]], 5, "A")
    b_side = GeneratorSet.from_gens([[[1, 0], [0, 2]]], 5, "B")
    fx = ProtocolFixture(5, 2, a_side, b_side, h=linalg.as_array([[1, 1], [1, 0]], 5))
    small = kolee_exchange(fx, linalg.as_array([[2, 0], [0, 1]], 5), linalg.as_array([[1, 0], [0, 4]], 5))
    gf5 = attack_kolee(small.transcript).tolist()
    passed = ok == RUNS and gf5 == [[1, 3], [2, 0]]
    acceptance_report("3 Ko-Lee attack", passed, f"{ok}/{RUNS} keys recovered, GF(5) instance gives {gf5}")
    assert passed


def test_harley_attack(honest_runs, acceptance_report):
    ok = _recovered(honest_runs["harley"], attack_harley)
    acceptance_report("4 Harley attack", ok == RUNS, f"{ok}/{RUNS} messages recovered")
    assert ok == RUNS


def test_structural_bounds(honest_runs, acceptance_report):
    problems = []
    records = bench_span_closure(DEFAULT_GRID, seeds_per_cell=3)
    for rec in records:
        if rec.error or rec.violations:
            problems.append((rec.n, rec.k, rec.seed, rec.error or rec.violations))
    spans = 0
    for protocol, plan in (("wang", attacks.WANG_PLAN), ("kolee", attacks.KOLEE_PLAN)):
        for res in honest_runs[protocol]:
            t = res.transcript
            for step in plan.steps:
                side = t.fixture_public.side(step.owner)
                basis = span_closure(side, t[step.center])
                spans += 1
                if basis.productive_list_count > t.fixture_public.dimension ** 2 or closure_violations(basis, side):
                    problems.append((protocol, step.name))
    acceptance_report("5 span-closure structural bounds", not problems,
                      f"{len(records)} bench records and {spans} attack spans, {len(problems)} violations")
    assert not problems


def test_honest_correctness(honest_runs, acceptance_report):
    total = sum(len(v) for v in honest_runs.values())
    agree = sum(np.array_equal(r.key_alice, r.key_bob) for v in honest_runs.values() for r in v)
    acceptance_report("6 honest key agreement", agree == total, f"{agree}/{total} runs")
    assert agree == total


def test_threat_model(honest_runs, acceptance_report):
    for fn in (attack_wang, attack_kolee, attack_harley, attack, attacks.execute_plan):
        first = next(iter(inspect.signature(fn).parameters.values()))
        assert first.annotation in (Transcript, "Transcript"), fn.__name__
    assert not any(f == "private_log" for f in Transcript.__dataclass_fields__)
    ok = total = 0
    for protocol, runs in honest_runs.items():
        plan = attacks.WANG_PLAN if protocol == "generic" else None
        for res in runs:
            rebuilt = Transcript.loads(res.transcript.dumps())
            ok += np.array_equal(attack(rebuilt, plan), res.key)
            total += 1
    acceptance_report("7 threat-model audit", ok == total, f"{ok}/{total} keys recovered from JSON-only transcripts")
    assert ok == total


def test_fault_injection(honest_runs, acceptance_report):
    detected = {}
    for i, (protocol, runs) in enumerate(honest_runs.items()):
        plan = attacks.WANG_PLAN if protocol == "generic" else None
        rng = np.random.default_rng([4, i])
        caught = 0
        for res in runs:
            t = res.transcript
            label = t.labels[rng.integers(len(t.labels))]
            fake = linalg.random_matrix(t[label].shape, P, rng)
            try:
                caught += not np.array_equal(attack(t.replace(label, fake), plan), res.key)
            except AttackFailure:
                caught += 1
        detected[protocol] = caught
    passed = all(v >= 95 for v in detected.values())
    detail = ", ".join(f"{k} {v}/{RUNS}" for k, v in detected.items())
    acceptance_report("8 fault injection", passed, detail)
    assert passed
