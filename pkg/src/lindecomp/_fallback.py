"""Numpy implementations of the GF(p) kernels.

Same signatures as the compiled ``_kernels`` module. All arrays are int64 with
entries in ``[0, p)`` and ``p < 2**31``.
"""
import numpy as np

_INT64_MAX = (1 << 63) - 1


def _dot(a, b, p):
    # a @ b over GF(p) without int64 overflow
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 <= _INT64_MAX:
        return (a @ b) % p
    lo = b & 0xFFFF
    hi = b >> 16
    return ((a @ lo) % p + ((a @ hi) % p << 16)) % p


def matmul(a, b, p):
    return _dot(a, b, p)


def sandwich(a, f, b, p):
    return _dot(_dot(a, f, p), b, p)


def sandwich_sum(coeffs, lefts, w, rights, p):
    """Return sum_i coeffs[i] * lefts[i] @ w @ rights[i] mod p."""
    if len(coeffs) == 0:
        return np.zeros_like(w)
    terms = _dot(_dot(lefts, w, p), rights, p)
    return _dot(coeffs, terms.reshape(len(coeffs), -1), p).reshape(w.shape)


def reduce(rows, pivots, t, p):
    """Reduce ``t`` against the RREF rows; return (residual, coefficients)."""
    coeffs = t[pivots]
    if len(pivots) == 0:
        return t.copy(), coeffs
    return (t - _dot(coeffs, rows, p)) % p, coeffs


def eliminate(rows, combos, count, new_row, new_combo, pivot, p):
    """Clear column ``pivot`` from the first ``count`` rows in place."""
    if count == 0:
        return
    f = rows[:count, pivot].copy()
    rows[:count] = (rows[:count] - _dot(f[:, None], new_row[None, :], p)) % p
    combos[:count] = (combos[:count] - _dot(f[:, None], new_combo[None, :], p)) % p


def sandwich_all(xs, e, p):
    """All products xs[i] @ e @ xs[j], flattened, i slower than j; shape (m*m, size)."""
    m = xs.shape[0]
    left = _dot(xs, e, p)  # (m, n, k)
    prods = _dot(left[:, None], xs[None], p)  # (m, m, n, k)
    return prods.reshape(m * m, -1)


def right_all(v, xs, p):
    """All products v @ xs[i]; shape (m, size)."""
    return _dot(v, xs, p).reshape(xs.shape[0], -1)


def absorb(rows, combos, pivots, count, cands, p):
    """Insert each independent candidate, in order, into the RREF state.

    ``rows``/``combos``/``pivots`` are updated in place. Returns the new count and
    the indices of accepted candidates.
    """
    accepted = []
    for idx in range(cands.shape[0]):
        t = cands[idx]
        residual, coeffs = reduce(rows[:count], pivots[:count], t, p)
        nz = np.flatnonzero(residual)
        if nz.size == 0:
            continue
        pivot = int(nz[0])
        combo = np.zeros(combos.shape[1], dtype=np.int64)
        if count:
            combo[:count] = (-_dot(coeffs, combos[:count, :count], p)) % p
        combo[count] = 1
        s = pow(int(residual[pivot]), -1, p)
        residual = residual * s % p
        combo = combo * s % p
        eliminate(rows, combos, count, residual, combo, pivot, p)
        pos = int(np.searchsorted(pivots[:count], pivot))
        rows[pos + 1 : count + 1] = rows[pos:count].copy()
        combos[pos + 1 : count + 1] = combos[pos:count].copy()
        pivots[pos + 1 : count + 1] = pivots[pos:count].copy()
        rows[pos] = residual
        combos[pos] = combo
        pivots[pos] = pivot
        count += 1
        accepted.append(idx)
    return count, np.array(accepted, dtype=np.int64)
