"""Decomposition operators: transport a secret sandwich map to new arguments.

Given a basis ``{L_i u R_i}`` of Lin(AuA) and a known image ``v = a u b`` with
``a, b`` in A, the coordinates ``alpha`` of ``v`` in that basis define the
operator ``w -> sum_i alpha_i L_i w R_i``. When ``w = c u d`` with ``c, d`` in a
subgroup commuting elementwise with A, the operator returns ``a w b`` without
``a`` or ``b`` ever being known.

For arguments outside that double coset the output is only the linear
extension of the operator and carries no protocol meaning.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .linalg import freeze
from .span import OrbitBasis, SandwichBasis


@dataclass(frozen=True, eq=False)
class SandwichOperator:
    coeffs: np.ndarray
    lefts: np.ndarray  # (r, n, n)
    rights: np.ndarray  # (r, n, n)
    source_center: np.ndarray
    modulus: int

    @property
    def terms(self) -> list[tuple[int, np.ndarray, np.ndarray]]:
        return [(int(c), l, r) for c, l, r in zip(self.coeffs, self.lefts, self.rights)]

    def __call__(self, w: np.ndarray) -> np.ndarray:
        return apply_operator(self, w)


@dataclass(frozen=True, eq=False)
class RightOperator:
    coeffs: np.ndarray
    rights: np.ndarray  # (r, n, n)
    source_center: np.ndarray
    modulus: int

    @property
    def terms(self) -> list[tuple[int, np.ndarray]]:
        return [(int(c), r) for c, r in zip(self.coeffs, self.rights)]

    @cached_property
    def matrix(self) -> np.ndarray:
        """sum_i gamma_i R_i; the operator is right multiplication by this matrix."""
        r, n, _ = self.rights.shape
        flat = kernels.matmul(self.coeffs, self.rights.reshape(r, n * n), self.modulus)
        return freeze(flat.reshape(n, n))

    def __call__(self, w: np.ndarray) -> np.ndarray:
        return apply_right_operator(self, w)


def derive_operator(basis: SandwichBasis, v: np.ndarray) -> SandwichOperator:
    """Express ``v`` in ``basis``; raises NotInSpan when it is not a combination."""
    coeffs = basis.span.coordinates(v)
    lefts = np.stack([e.left for e in basis.entries])
    rights = np.stack([e.right for e in basis.entries])
    return SandwichOperator(coeffs, freeze(lefts), freeze(rights), basis.center, basis.modulus)


def apply_operator(op: SandwichOperator, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w)
    n = op.source_center.shape[0]
    if w.shape != (n, n):
        raise ValueError(f"argument of shape {w.shape}, operator acts on {n}x{n} matrices")
    return freeze(kernels.sandwich_sum(op.coeffs, op.lefts, w, op.rights, op.modulus))


def derive_right_operator(basis: OrbitBasis, v: np.ndarray) -> RightOperator:
    coeffs = basis.span.coordinates(v)
    rights = np.stack([e.right for e in basis.entries])
    return RightOperator(coeffs, freeze(rights), basis.center, basis.modulus)


def apply_right_operator(op: RightOperator, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w)
    if w.shape != op.source_center.shape:
        raise ValueError(f"argument of shape {w.shape}, operator acts on vectors of shape {op.source_center.shape}")
    return freeze(kernels.matmul(w, op.matrix, op.modulus))
