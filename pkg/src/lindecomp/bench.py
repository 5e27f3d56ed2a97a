"""Span-closure cost measurements and structural bound checks.

Counters per record:

* ``productive_lists`` - candidate lists that added at least one basis element;
  must not exceed r = n^2.
* ``candidates`` - distinct candidates sent to the rank test, summed over lists.
* ``max_list_candidates`` - the largest per-list count of distinct candidates,
  checked against 4 k^2 r with k the generator count of the closing side.
  Raw products (``max_list_generated``) include repeats and identity factors and
  are reported but not bounded.
"""
from __future__ import annotations

import csv
import json
import math
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .linalg import DEFAULT_MODULUS
from .platform import make_block_fixture
from .span import closure_violations, span_closure

CSV_FIELDS = ("n", "k", "p", "seed", "basis_dim", "productive_lists", "candidates", "micros")
DEFAULT_GRID = tuple((n, k, DEFAULT_MODULUS) for n in (2, 3, 4, 5) for k in (1, 2, 3))


@dataclass
class BenchRecord:
    n: int
    k: int
    p: int
    seed: int
    basis_dim: int = 0
    productive_lists: int = 0
    candidates: int = 0
    max_list_candidates: int = 0
    max_list_generated: int = 0
    closure_ok: bool = True
    micros: int = 0
    error: str | None = None
    violations: list[str] = field(default_factory=list)

    @property
    def r(self) -> int:
        return self.n * self.n


def check_bounds(rec: BenchRecord) -> list[str]:
    out = []
    if rec.productive_lists > rec.r:
        out.append(f"productive_lists {rec.productive_lists} > r={rec.r}")
    if rec.basis_dim > rec.r:
        out.append(f"basis_dim {rec.basis_dim} > r={rec.r}")
    if rec.max_list_candidates > 4 * rec.k**2 * rec.r:
        out.append(f"list of {rec.max_list_candidates} candidates > 4k^2r={4 * rec.k**2 * rec.r}")
    if not rec.closure_ok:
        out.append("closure certificate failed")
    return out


def measure(n: int, k: int, p: int, seed: int) -> BenchRecord:
    rec = BenchRecord(n, k, p, seed)
    try:
        rng = np.random.default_rng([seed, n, k, p])
        n1 = (n + 1) // 2
        fixture = make_block_fixture(n1, n - n1, k, k, p, rng)
        start = time.perf_counter()
        basis = span_closure(fixture.a_side, fixture.h)
        rec.micros = int((time.perf_counter() - start) * 1e6)
        rec.basis_dim = len(basis)
        rec.productive_lists = basis.productive_list_count
        rec.candidates = basis.total_candidates_examined
        rec.max_list_candidates = max(s.examined for s in basis.lists)
        rec.max_list_generated = max(s.generated for s in basis.lists)
        rec.closure_ok = not closure_violations(basis, fixture.a_side)
    except Exception as exc:  # recorded, not fatal
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    rec.violations = check_bounds(rec)
    return rec


def bench_span_closure(grid: Iterable[tuple[int, int, int]], seeds_per_cell: int = 3, seed: int = 0) -> list[BenchRecord]:
    grid = list(grid)
    for n, k, p in grid:
        if n < 2 or k < 1:
            raise ValueError(f"invalid grid cell n={n}, k={k}")
    return [measure(n, k, p, seed + i) for n, k, p in grid for i in range(seeds_per_cell)]


def write_csv(records: list[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_FIELDS)
        for rec in records:
            w.writerow([getattr(rec, f) for f in CSV_FIELDS])


def loglog_slope(rs: list[int], times: list[float]) -> float | None:
    pts = [(math.log(r), math.log(t)) for r, t in zip(rs, times) if t > 0]
    if len({x for x, _ in pts}) < 2:
        return None
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


def summarize(records: list[BenchRecord]) -> dict:
    cells: dict[tuple[int, int, int], list[BenchRecord]] = {}
    for rec in records:
        cells.setdefault((rec.n, rec.k, rec.p), []).append(rec)
    out_cells = []
    for (n, k, p), recs in cells.items():
        good = [r for r in recs if r.error is None]
        out_cells.append({
            "n": n, "k": k, "p": p, "r": n * n, "runs": len(recs), "errors": len(recs) - len(good),
            "basis_dim": statistics.median(r.basis_dim for r in good) if good else None,
            "productive_lists": statistics.median(r.productive_lists for r in good) if good else None,
            "candidates": statistics.median(r.candidates for r in good) if good else None,
            "max_list_candidates": max((r.max_list_candidates for r in good), default=None),
            "list_bound": 4 * k * k * n * n,
            "micros": statistics.median(r.micros for r in good) if good else None,
        })
    slopes = {}
    for k in sorted({c["k"] for c in out_cells}):
        pts = [(c["r"], c["micros"]) for c in out_cells if c["k"] == k and c["micros"]]
        if pts:
            slopes[str(k)] = loglog_slope(*map(list, zip(*pts)))
    return {
        "backend": kernels.active(),
        "cells": out_cells,
        # time ~ r^slope; informational only, the O(k^2 r^5) envelope is an upper bound
        "loglog_slope_time_vs_r": slopes,
        "violations": [
            {"n": r.n, "k": r.k, "seed": r.seed, "problems": r.violations} for r in records if r.violations
        ],
        "errors": [{"n": r.n, "k": r.k, "seed": r.seed, "error": r.error} for r in records if r.error],
    }


def compare_backends(grid: Iterable[tuple[int, int, int]] = DEFAULT_GRID, seeds_per_cell: int = 2, seed: int = 0) -> dict:
    """Median span-closure time per cell under each available kernel backend."""
    grid = list(grid)
    result = {}
    for name in kernels.available():
        with kernels.backend(name):
            recs = bench_span_closure(grid, seeds_per_cell, seed)
        result[name] = {f"{n},{k},{p}": statistics.median(r.micros for r in recs if (r.n, r.k, r.p) == (n, k, p))
                        for n, k, p in grid}
    return result


def records_to_json(records: list[BenchRecord]) -> list[dict]:
    return [asdict(r) for r in records]


def dump_summary(records: list[BenchRecord], path) -> None:
    with open(path, "w") as fh:
        json.dump(summarize(records), fh, indent=2)
