import json

import numpy as np
import pytest

from lindecomp import linalg
from lindecomp.linalg import identity, mat_inv, mat_mul
from lindecomp.platform import (
    FixtureError,
    GeneratorSet,
    ProtocolFixture,
    SandwichMap,
    apply_sandwich,
    compose,
    eval_poly,
    make_block_fixture,
    make_polynomial_fixture,
    random_word,
)

P = 1009


def rand_map(rng, n=3):
    return SandwichMap(linalg.random_invertible(n, P, rng), linalg.random_invertible(n, P, rng), P)


def test_identity_map(rng):
    f = linalg.random_matrix((3, 3), P, rng)
    assert np.array_equal(apply_sandwich(SandwichMap(identity(3), identity(3), P), f), f)


def test_inverse_map(rng):
    m = rand_map(rng)
    f = linalg.random_matrix((3, 3), P, rng)
    assert np.array_equal(m.inverse()(m(f)), f)


def test_composition_is_diagrammatic(rng):
    # phi_{a,b} then phi_{c,d} equals phi_{ca,bd}
    for _ in range(10):
        ab, cd = rand_map(rng), rand_map(rng)
        f = linalg.random_matrix((3, 3), P, rng)
        both = compose(ab, cd)
        assert np.array_equal(both.left, mat_mul(cd.left, ab.left, P))
        assert np.array_equal(both.right, mat_mul(ab.right, cd.right, P))
        assert np.array_equal(apply_sandwich(both, f), cd(ab(f)))
        assert np.array_equal(ab.then(cd)(f), both(f))


def test_nested_composition_with_commuting_factors(poly_fixture, rng):
    # in a commutative group the nesting order does not matter
    g = poly_fixture.group
    a, b, c, d = (random_word(g, rng) for _ in range(4))
    f = linalg.random_matrix((4, 4), P, rng)
    nested = SandwichMap(a, b, P)(SandwichMap(c, d, P)(f))
    assert np.array_equal(nested, SandwichMap(mat_mul(c, a, P), mat_mul(b, d, P), P)(f))


def test_dimension_mismatch(rng):
    with pytest.raises(ValueError):
        apply_sandwich(rand_map(rng, 3), linalg.zeros((2, 2)))


def test_random_word_single_generator_length_one(rng):
    g = linalg.random_invertible(3, P, rng)
    gs = GeneratorSet.from_gens([g], P)
    for _ in range(10):
        w = random_word(gs, rng, (1, 1))
        assert np.array_equal(w, g) or np.array_equal(w, mat_inv(g, P))


def test_random_word_length_zero(block_fixture, rng):
    assert np.array_equal(random_word(block_fixture.a_side, rng, (0, 0)), identity(4))


def test_random_word_bad_range(block_fixture, rng):
    with pytest.raises(ValueError):
        random_word(block_fixture.a_side, rng, (3, 2))


def test_random_word_deterministic(block_fixture):
    w1 = random_word(block_fixture.a_side, np.random.default_rng(5))
    w2 = random_word(block_fixture.a_side, np.random.default_rng(5))
    assert np.array_equal(w1, w2)


def test_random_word_inverse(block_fixture, rng):
    for _ in range(10):
        w, wi = random_word(block_fixture.b_side, rng, return_inverse=True)
        assert np.array_equal(mat_mul(w, wi, P), identity(4))


def test_generator_set_rejects_singular():
    with pytest.raises(FixtureError):
        GeneratorSet.from_gens([[[1, 2], [2, 4]]], P)


def test_generator_set_rejects_empty():
    with pytest.raises(ValueError):
        GeneratorSet.from_gens([], P)


def test_symmetric_set_order(rng):
    g1, g2 = (linalg.random_invertible(2, P, rng) for _ in range(2))
    xs = GeneratorSet.from_gens([g1, g2], P).symmetric()
    expected = [identity(2), g1, mat_inv(g1, P), g2, mat_inv(g2, P)]
    assert all(np.array_equal(x, e) for x, e in zip(xs, expected, strict=True))


def test_block_fixture_1x1_is_diagonal(rng):
    f = make_block_fixture(1, 1, 2, 2, P, rng)
    for g in f.a_side.gens + f.b_side.gens:
        assert np.count_nonzero(g - np.diag(np.diag(g))) == 0
    f.check_commuting()


def test_block_fixture_sides_commute(block_fixture):
    p = block_fixture.modulus
    for ga in block_fixture.a_side.gens:
        for gb in block_fixture.b_side.gens:
            assert np.array_equal(mat_mul(ga, gb, p), mat_mul(gb, ga, p))


def test_block_fixture_a_side_non_abelian(block_fixture):
    g1, g2 = block_fixture.a_side.gens
    assert not np.array_equal(mat_mul(g1, g2, P), mat_mul(g2, g1, P))


def test_random_words_commute_across_sides(block_fixture, rng):
    for _ in range(100):
        wa = random_word(block_fixture.a_side, rng)
        wb = random_word(block_fixture.b_side, rng)
        assert np.array_equal(mat_mul(wa, wb, P), mat_mul(wb, wa, P))


def test_random_words_invertible(block_fixture, rng):
    for _ in range(20):
        assert linalg.rank(random_word(block_fixture.a_side, rng), P) == 4


def test_fixture_rejects_non_commuting(rng):
    a = GeneratorSet.from_gens([linalg.random_invertible(3, P, rng)], P, "A")
    b = GeneratorSet.from_gens([linalg.random_invertible(3, P, rng)], P, "B")
    with pytest.raises(FixtureError):
        ProtocolFixture(P, 3, a, b).check_commuting()


def test_constant_polynomial_is_identity(rng):
    m = linalg.random_matrix((4, 4), P, rng)
    assert np.array_equal(eval_poly([1], m, P), identity(4))


def test_eval_poly_matches_direct(rng):
    m = linalg.random_matrix((3, 3), P, rng)
    direct = (5 * np.eye(3, dtype=np.int64) + 7 * m + 11 * mat_mul(m, m, P)) % P
    assert np.array_equal(eval_poly([5, 7, 11], m, P), direct)


def test_polynomial_fixture(poly_fixture):
    gens = poly_fixture.group.gens
    for g in gens:
        assert np.array_equal(mat_mul(g, mat_inv(g, P), P), identity(4))
        for k in gens:
            assert np.array_equal(mat_mul(g, k, P), mat_mul(k, g, P))


def test_polynomial_fixture_needs_n2(rng):
    with pytest.raises(ValueError):
        make_polynomial_fixture(1, P, rng)


def test_block_fixture_validates_sizes(rng):
    with pytest.raises(ValueError):
        make_block_fixture(0, 2, 1, 1, P, rng)


def test_fixture_json_round_trip(block_fixture):
    text = block_fixture.dumps()
    data = json.loads(text)
    assert list(data) == ["modulus", "dimension", "a_gens", "b_gens", "h", "y", "seed"]
    assert all(type(x) is int for g in data["a_gens"] for row in g for x in row)
    back = ProtocolFixture.from_json(data)
    assert back.dumps() == text


def test_fixture_json_rejects_non_prime(block_fixture):
    data = block_fixture.to_json()
    data["modulus"] = 1000
    with pytest.raises(ValueError):
        ProtocolFixture.from_json(data)
