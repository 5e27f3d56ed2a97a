"""Bases of Lin(AhA) and Lin(vG) by saturating candidate lists.

``span_closure`` starts from ``e_1 = h`` and processes lists of candidates
``x·e·y`` with ``x, y`` in ``X = {I, g_i, g_i^-1}``. The first list expands
``h``; each later list expands only the basis entries accepted during the
previous list. Construction stops at the first list that adds nothing. Every
accepted entry remembers the multipliers that produced it, so
``value == left @ center @ right`` holds exactly.

Candidate order is fixed: seeds in acceptance order, then the left factor over
X, then the right factor over X (right varies fastest), where X lists the
identity first and then each generator followed by its inverse.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels, linalg
from .linalg import IncrementalSpan, identity, mat_mul
from .platform import GeneratorSet


@dataclass(frozen=True, eq=False)
class BasisEntry:
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray


@dataclass(frozen=True, eq=False)
class OrbitEntry:
    right: np.ndarray
    value: np.ndarray


@dataclass
class ListStats:
    """Counters for one candidate list."""

    seeds: int
    generated: int = 0  # products formed, duplicates included
    examined: int = 0  # distinct candidates sent to the rank test
    added: int = 0


@dataclass(eq=False)
class SandwichBasis:
    center: np.ndarray
    entries: list[BasisEntry]
    span: IncrementalSpan
    modulus: int
    lists: list[ListStats] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @property
    def productive_list_count(self) -> int:
        return sum(1 for s in self.lists if s.added)

    @property
    def total_candidates_examined(self) -> int:
        return sum(s.examined for s in self.lists)

    def to_json(self) -> dict:
        return {
            "center": self.center.tolist(),
            "entries": [
                {"left": e.left.tolist(), "right": e.right.tolist(), "value": e.value.tolist()}
                for e in self.entries
            ],
            "productive_list_count": self.productive_list_count,
            "total_candidates_examined": self.total_candidates_examined,
            "lists": [vars(s) for s in self.lists],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(eq=False)
class OrbitBasis:
    center: np.ndarray
    entries: list[OrbitEntry]
    span: IncrementalSpan
    modulus: int
    lists: list[ListStats] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @property
    def productive_list_count(self) -> int:
        return sum(1 for s in self.lists if s.added)

    @property
    def total_candidates_examined(self) -> int:
        return sum(s.examined for s in self.lists)


def span_closure(side: GeneratorSet, h: np.ndarray) -> SandwichBasis:
    """Basis of Lin(AhA) for A = gp(side), each element stored with its multipliers."""
    p = side.modulus
    h = linalg.as_array(h, p)
    n = h.shape[0]
    if h.shape != (n, n) or n != side.dimension:
        raise ValueError(f"center of shape {h.shape} does not match generators of size {side.dimension}")
    if not h.any():
        raise ValueError("center must be nonzero")
    span = IncrementalSpan(n * n, p, (n, n))
    eye = identity(n)
    span.insert(h)
    basis = SandwichBasis(h, [BasisEntry(eye, eye, h)], span, p)
    _saturate(basis, side.symmetric(), [0])
    return basis


def _saturate(basis: SandwichBasis, xs: list[np.ndarray], seeds: list[int]) -> None:
    p = basis.modulus
    n = basis.center.shape[0]
    stack = np.stack(xs)
    m = len(xs)
    while seeds:
        stats = ListStats(seeds=len(seeds))
        basis.lists.append(stats)
        seen: set[bytes] = set()
        fresh: list[int] = []
        for j in seeds:
            e = basis.entries[j]
            prods = kernels.sandwich_all(stack, e.value, p)
            stats.generated += len(prods)
            keep = []
            for c, row in enumerate(prods):
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    keep.append(c)
            stats.examined += len(keep)
            for pos in basis.span.absorb(prods[keep].reshape(-1, n, n)):
                x, y = divmod(keep[pos], m)
                value = basis.span.stored_elements[len(basis.entries)]
                basis.entries.append(BasisEntry(mat_mul(xs[x], e.left, p), mat_mul(e.right, xs[y], p), value))
                fresh.append(len(basis.entries) - 1)
        stats.added = len(fresh)
        seeds = fresh


def resaturate(basis: SandwichBasis, side: GeneratorSet) -> int:
    """Expand every entry once more; returns how many entries were added (0 when closed)."""
    before = len(basis)
    _saturate(basis, side.symmetric(), list(range(before)))
    return len(basis) - before


def closure_violations(basis: SandwichBasis | OrbitBasis, side: GeneratorSet) -> list[tuple[int, int, str]]:
    """(entry, generator-set index, 'left'|'right') triples whose product leaves the span."""
    p = basis.modulus
    bad = []
    for i, e in enumerate(basis.entries):
        for k, x in enumerate(side.symmetric()):
            if isinstance(basis, SandwichBasis) and mat_mul(x, e.value, p) not in basis.span:
                bad.append((i, k, "left"))
            if mat_mul(e.value, x, p) not in basis.span:
                bad.append((i, k, "right"))
    return bad


def orbit_closure(side: GeneratorSet, v: np.ndarray) -> OrbitBasis:
    """Basis of Lin(vG) for G = gp(side), each element stored with its right multiplier."""
    p = side.modulus
    v = linalg.as_array(v, p)
    n = side.dimension
    if v.shape != (n,):
        raise ValueError(f"vector of shape {v.shape} does not match generators of size {n}")
    if not v.any():
        raise ValueError("center must be nonzero")
    span = IncrementalSpan(n, p, (n,))
    span.insert(v)
    basis = OrbitBasis(v, [OrbitEntry(identity(n), v)], span, p)
    xs = side.symmetric()
    stack = np.stack(xs)
    seeds = [0]
    while seeds:
        stats = ListStats(seeds=len(seeds))
        basis.lists.append(stats)
        seen: set[bytes] = set()
        fresh = []
        for j in seeds:
            e = basis.entries[j]
            prods = kernels.right_all(e.value, stack, p)
            stats.generated += len(prods)
            keep = []
            for c, row in enumerate(prods):
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    keep.append(c)
            stats.examined += len(keep)
            for pos in span.absorb(prods[keep]):
                value = span.stored_elements[len(basis.entries)]
                basis.entries.append(OrbitEntry(mat_mul(e.right, xs[keep[pos]], p), value))
                fresh.append(len(basis.entries) - 1)
        stats.added = len(fresh)
        seeds = fresh
    return basis
