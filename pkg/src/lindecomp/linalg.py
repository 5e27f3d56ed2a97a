"""Exact linear algebra over a prime field GF(p).

Field elements are Python/numpy integers in ``[0, p)``. Matrices and vectors are
read-only ``int64`` numpy arrays; every operation returns a new array. Matrices
are flattened row-major whenever they are treated as vectors of ``M_n(GF(p))``.
"""
from __future__ import annotations

from typing import Sequence

import gmpy2
import numpy as np

from . import kernels

DEFAULT_MODULUS = 1009
# products of two reduced entries must fit in 63 bits
MAX_MODULUS = 1 << 31


class SingularMatrix(ArithmeticError):
    pass


class NotInSpan(ValueError):
    """The target is not a linear combination of the span's elements."""


def check_modulus(p: int) -> int:
    p = int(p)
    if p < 3 or p >= MAX_MODULUS or not gmpy2.is_prime(p):
        raise ValueError(f"modulus must be an odd prime below 2**31, got {p}")
    return p


def freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_array(data, p: int) -> np.ndarray:
    """Reduce integer data mod p into a frozen int64 array."""
    a = np.asarray(data)
    if a.dtype == object or a.dtype.kind not in "iu":
        a = np.array([int(x) % p for x in a.ravel()], dtype=np.int64).reshape(a.shape)
    else:
        a = np.mod(a.astype(np.int64), p)
    return freeze(a)


def identity(n: int) -> np.ndarray:
    return freeze(np.eye(n, dtype=np.int64))


def zeros(shape) -> np.ndarray:
    return freeze(np.zeros(shape, dtype=np.int64))


def inv_scalar(x: int, p: int) -> int:
    x = int(x) % p
    if x == 0:
        raise ZeroDivisionError("0 has no inverse")
    return pow(x, -1, p)


def _check_mul(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product ``a @ b`` mod p; ``a`` may be a row vector."""
    _check_mul(a, b)
    return freeze(kernels.matmul(a, b, p))


def sandwich(a: np.ndarray, f: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    _check_mul(a, f)
    _check_mul(f, b)
    return freeze(kernels.sandwich(a, f, b, p))


def add(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} + {b.shape}")
    return freeze((a + b) % p)


def sub(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} - {b.shape}")
    return freeze((a - b) % p)


def scale(c: int, a: np.ndarray, p: int) -> np.ndarray:
    return freeze((int(c) % p * a) % p)


def _row_reduce(m: np.ndarray, p: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    # Gauss-Jordan on a writable copy; pivots only searched in the first ncols columns
    m = np.array(m, dtype=np.int64) % p
    rows, cols = m.shape
    ncols = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = m[r] * inv_scalar(m[r, c], p) % p
        f = m[:, c].copy()
        f[r] = 0
        m = (m - np.outer(f, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(m: np.ndarray, p: int) -> int:
    return len(_row_reduce(np.atleast_2d(m), p)[1])


def mat_inv(m: np.ndarray, p: int) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"cannot invert a {m.shape} array")
    n = m.shape[0]
    red, pivots = _row_reduce(np.hstack([m, np.eye(n, dtype=np.int64)]), p, ncols=n)
    if len(pivots) < n:
        raise SingularMatrix(f"rank {len(pivots)} < {n}")
    return freeze(np.ascontiguousarray(red[:, n:]))


def random_matrix(shape, p: int, rng: np.random.Generator) -> np.ndarray:
    return freeze(rng.integers(0, p, size=shape, dtype=np.int64))


def random_invertible(n: int, p: int, rng: np.random.Generator, retries: int = 100) -> np.ndarray:
    for _ in range(retries):
        m = random_matrix((n, n), p, rng)
        if rank(m, p) == n:
            return m
    raise RuntimeError(f"no invertible {n}x{n} matrix over GF({p}) after {retries} tries")


def random_nonzero_vector(n: int, p: int, rng: np.random.Generator, retries: int = 100) -> np.ndarray:
    for _ in range(retries):
        v = random_matrix((n,), p, rng)
        if v.any():
            return v
    raise RuntimeError("could not sample a nonzero vector")


class IncrementalSpan:
    """A growing subspace of GF(p)^d with membership and coordinate queries.

    Elements (matrices or vectors of any fixed shape) are flattened row-major.
    The basis is kept in reduced row echelon form, sorted by pivot column, together
    with the change of basis back to the stored elements in insertion order.
    """

    def __init__(self, ambient_dim: int, p: int, shape: tuple[int, ...] | None = None):
        self.ambient_dim = ambient_dim
        self.p = p
        self.shape = shape if shape is not None else (ambient_dim,)
        if int(np.prod(self.shape)) != ambient_dim:
            raise ValueError(f"shape {self.shape} does not have {ambient_dim} entries")
        self._rows = np.zeros((ambient_dim, ambient_dim), dtype=np.int64)
        # echelon row i == sum_j _combos[i, j] * stored_elements[j]
        self._combos = np.zeros((ambient_dim, ambient_dim), dtype=np.int64)
        self._pivots = np.zeros(ambient_dim, dtype=np.int64)
        self.stored_elements: list[np.ndarray] = []

    def __len__(self) -> int:
        return len(self.stored_elements)

    @property
    def pivot_cols(self) -> list[int]:
        return [int(c) for c in self._pivots[: len(self)]]

    @property
    def basis_rows(self) -> np.ndarray:
        return freeze(self._rows[: len(self)].copy())

    def _flat(self, element) -> np.ndarray:
        t = np.asarray(element, dtype=np.int64)
        if t.size != self.ambient_dim:
            raise ValueError(f"element has {t.size} entries, span is over dimension {self.ambient_dim}")
        return np.ascontiguousarray(t.reshape(-1) % self.p)

    def _reduce(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        r = len(self)
        return kernels.reduce(self._rows[:r], self._pivots[:r], t, self.p)

    def insert(self, element) -> bool:
        """Add ``element`` if it is independent of the span; report whether it was added."""
        return bool(len(self.absorb([element])))

    def absorb(self, elements) -> list[int]:
        """Insert the independent elements in order; return the indices that were added."""
        elements = list(elements)
        if not elements:
            return []
        shape = np.shape(elements[0])
        cands = np.stack([self._flat(e) for e in elements])
        count, accepted = kernels.absorb(self._rows, self._combos, self._pivots, len(self), cands, self.p)
        accepted = [int(i) for i in accepted]
        for i in accepted:
            self.stored_elements.append(freeze(cands[i].reshape(shape).copy()))
        assert count == len(self.stored_elements)
        return accepted

    def coordinates(self, target) -> np.ndarray:
        """Coefficients over ``stored_elements`` reproducing ``target``; raises NotInSpan."""
        t = self._flat(target)
        residual, coeffs = self._reduce(t)
        if residual.any():
            raise NotInSpan("target is not in the span")
        r = len(self)
        if r == 0:
            return freeze(np.zeros(0, dtype=np.int64))
        return freeze(kernels.matmul(coeffs, self._combos[:r, :r], self.p))

    def __contains__(self, target) -> bool:
        residual, _ = self._reduce(self._flat(target))
        return not residual.any()

    def combination(self, coeffs: Sequence[int]) -> np.ndarray:
        """Evaluate sum_i coeffs[i] * stored_elements[i]."""
        if len(coeffs) != len(self):
            raise ValueError("one coefficient per stored element required")
        acc = np.zeros(self.shape, dtype=np.int64)
        for c, e in zip(coeffs, self.stored_elements):
            acc = (acc + int(c) * e) % self.p
        return freeze(acc)


def span_insert(span: IncrementalSpan, element) -> bool:
    return span.insert(element)


def span_coordinates(span: IncrementalSpan, target) -> np.ndarray:
    return span.coordinates(target)
