"""The compiled kernels must agree bit-for-bit with the numpy fallback."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindecomp import _fallback, kernels

compiled = pytest.importorskip("lindecomp._kernels")

primes = st.sampled_from([3, 5, 1009, 65521, 2147483647])


def arr(rng, shape, p):
    return rng.integers(0, p, size=shape, dtype=np.int64)


@settings(max_examples=40, deadline=None)
@given(primes, st.integers(1, 6), st.integers(0, 2**32))
def test_matmul_and_sandwich(p, n, seed):
    rng = np.random.default_rng(seed)
    a, f, b = arr(rng, (n, n), p), arr(rng, (n, n), p), arr(rng, (n, n), p)
    assert np.array_equal(compiled.matmul(a, f, p), _fallback.matmul(a, f, p))
    v = arr(rng, (n,), p)
    assert np.array_equal(compiled.matmul(v, f, p), _fallback.matmul(v, f, p))
    assert np.array_equal(compiled.sandwich(a, f, b, p), _fallback.sandwich(a, f, b, p))


@settings(max_examples=40, deadline=None)
@given(primes, st.integers(1, 5), st.integers(0, 6), st.integers(0, 2**32))
def test_batched_products(p, n, r, seed):
    rng = np.random.default_rng(seed)
    xs = arr(rng, (r + 1, n, n), p)
    e = arr(rng, (n, n), p)
    assert np.array_equal(compiled.sandwich_all(xs, e, p), _fallback.sandwich_all(xs, e, p))
    v = arr(rng, (n,), p)
    assert np.array_equal(compiled.right_all(v, xs, p), _fallback.right_all(v, xs, p))
    c = arr(rng, (r,), p)
    lefts, rights = arr(rng, (r, n, n), p), arr(rng, (r, n, n), p)
    assert np.array_equal(compiled.sandwich_sum(c, lefts, e, rights, p), _fallback.sandwich_sum(c, lefts, e, rights, p))


@settings(max_examples=40, deadline=None)
@given(primes, st.integers(1, 9), st.integers(1, 14), st.integers(0, 2**32))
def test_absorb_and_reduce(p, d, m, seed):
    rng = np.random.default_rng(seed)
    # low-rank candidates so that dependent rows actually occur
    basis = arr(rng, (max(1, d // 2), d), p)
    cands = (arr(rng, (m, basis.shape[0]), 3) @ basis) % p
    cands[::3] = arr(rng, (len(cands[::3]), d), p)
    t = arr(rng, (d,), p)
    states = []
    for mod in (compiled, _fallback):
        rows = np.zeros((d, d), np.int64)
        combos = np.zeros((d, d), np.int64)
        piv = np.zeros(d, np.int64)
        count, acc = mod.absorb(rows, combos, piv, 0, cands, p)
        res = mod.reduce(rows[:count], piv[:count], t, p)
        states.append((count, acc.tolist(), rows, combos, piv, res))
    (c1, a1, r1, k1, p1, s1), (c2, a2, r2, k2, p2, s2) = states
    assert (c1, a1) == (c2, a2)
    assert np.array_equal(r1, r2) and np.array_equal(k1, k2) and np.array_equal(p1, p2)
    assert np.array_equal(s1[0], s2[0]) and np.array_equal(s1[1], s2[1])


def test_backend_switching():
    assert set(kernels.available()) == {"numpy", "compiled"}
    before = kernels.active()
    with kernels.backend("numpy"):
        assert kernels.active() == "numpy"
    assert kernels.active() == before
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
