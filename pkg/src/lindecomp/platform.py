"""Matrix-group platforms: generating sets, sandwich maps, random words, fixtures.

Two fixture families are provided. Block fixtures put the A-side generators in
the top-left block and the B-side generators in the bottom-right block, so the
sides commute while each side is (generically) non-abelian. Polynomial fixtures
draw every generator as a polynomial in one random matrix, giving a commutative
platform group.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels, linalg
from .linalg import freeze, identity, mat_inv, mat_mul

DEFAULT_WORD_LENGTH = (3, 8)
DEFAULT_RETRIES = 100


class FixtureError(ValueError):
    """A fixture violates the structural assumptions of the schemes."""


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    gens: tuple[np.ndarray, ...]
    inverses: tuple[np.ndarray, ...]
    modulus: int
    label: str = "A"

    @classmethod
    def from_gens(cls, gens: Sequence[np.ndarray], p: int, label: str = "A") -> "GeneratorSet":
        gens = tuple(linalg.as_array(g, p) for g in gens)
        if not gens:
            raise ValueError("empty generator set")
        n = gens[0].shape[0]
        if any(g.shape != (n, n) for g in gens):
            raise ValueError("generators must be square matrices of one size")
        try:
            inverses = tuple(mat_inv(g, p) for g in gens)
        except linalg.SingularMatrix as exc:
            raise FixtureError(f"non-invertible generator on side {label}") from exc
        return cls(gens, inverses, p, label)

    def __post_init__(self):
        for g, gi in zip(self.gens, self.inverses, strict=True):
            if not np.array_equal(mat_mul(g, gi, self.modulus), identity(g.shape[0])):
                raise FixtureError(f"inverse table mismatch on side {self.label}")

    @property
    def dimension(self) -> int:
        return self.gens[0].shape[0]

    def __len__(self) -> int:
        return len(self.gens)

    def symmetric(self) -> list[np.ndarray]:
        """X = [I, g1, g1^-1, g2, g2^-1, ...] with exact duplicates removed."""
        out = [identity(self.dimension)]
        seen = {out[0].tobytes()}
        for g, gi in zip(self.gens, self.inverses):
            for x in (g, gi):
                key = x.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(x)
        return out

    def union(self, other: "GeneratorSet", label: str = "G") -> "GeneratorSet":
        if other.modulus != self.modulus:
            raise ValueError("generator sets over different fields")
        return GeneratorSet(self.gens + other.gens, self.inverses + other.inverses, self.modulus, label)


@dataclass(frozen=True, eq=False)
class SandwichMap:
    """f -> left @ f @ right."""

    left: np.ndarray
    right: np.ndarray
    modulus: int

    def __call__(self, f: np.ndarray) -> np.ndarray:
        return apply_sandwich(self, f)

    def then(self, outer: "SandwichMap") -> "SandwichMap":
        """Apply ``self`` first, then ``outer``: phi_{a,b} then phi_{c,d} is phi_{ca,bd}."""
        return compose(self, outer)

    def inverse(self) -> "SandwichMap":
        p = self.modulus
        return SandwichMap(mat_inv(self.left, p), mat_inv(self.right, p), p)


def apply_sandwich(m: SandwichMap, f: np.ndarray) -> np.ndarray:
    return linalg.sandwich(m.left, f, m.right, m.modulus)


def compose(first: SandwichMap, second: SandwichMap) -> SandwichMap:
    """The map f -> second(first(f)).

    Composition is written in diagrammatic order: for first = phi_{a,b} and
    second = phi_{c,d} the result is phi_{ca,bd}.
    """
    p = first.modulus
    return SandwichMap(mat_mul(second.left, first.left, p), mat_mul(first.right, second.right, p), p)


def random_word(
    gs: GeneratorSet,
    rng: np.random.Generator,
    length_range: tuple[int, int] = DEFAULT_WORD_LENGTH,
    return_inverse: bool = False,
):
    """Product of uniformly chosen generators and inverses, of uniform length in the range.

    With ``return_inverse`` the inverse word is accumulated alongside and
    ``(word, inverse)`` is returned.
    """
    lo, hi = length_range
    if lo < 0 or hi < lo:
        raise ValueError(f"bad word length range {length_range}")
    if not gs.gens:
        raise ValueError("empty generator set")
    p = gs.modulus
    length = int(rng.integers(lo, hi + 1))
    w = identity(gs.dimension)
    wi = identity(gs.dimension)
    letters = gs.gens + gs.inverses
    duals = gs.inverses + gs.gens
    for _ in range(length):
        i = int(rng.integers(len(letters)))
        w = mat_mul(w, letters[i], p)
        wi = mat_mul(duals[i], wi, p)
    return (w, wi) if return_inverse else w


@dataclass(frozen=True, eq=False)
class ProtocolFixture:
    modulus: int
    dimension: int
    a_side: GeneratorSet
    b_side: GeneratorSet
    h: np.ndarray | None = None
    y: np.ndarray | None = None
    seed: int | None = None
    family: str = "block"

    @property
    def group(self) -> GeneratorSet:
        """Generators of the whole platform subgroup gp(A, B)."""
        return self.a_side.union(self.b_side)

    def check_commuting(self) -> None:
        p = self.modulus
        for i, ga in enumerate(self.a_side.gens):
            for j, gb in enumerate(self.b_side.gens):
                if not np.array_equal(mat_mul(ga, gb, p), mat_mul(gb, ga, p)):
                    raise FixtureError(f"A-generator {i} does not commute with B-generator {j}")

    def check_commutative(self) -> None:
        p = self.modulus
        gens = self.group.gens
        for i, g in enumerate(gens):
            for k in gens[i + 1 :]:
                if not np.array_equal(mat_mul(g, k, p), mat_mul(k, g, p)):
                    raise FixtureError("platform group is not commutative")

    def to_json(self) -> dict:
        out = {
            "modulus": self.modulus,
            "dimension": self.dimension,
            "a_gens": [g.tolist() for g in self.a_side.gens],
            "b_gens": [g.tolist() for g in self.b_side.gens],
        }
        if self.h is not None:
            out["h"] = self.h.tolist()
        if self.y is not None:
            out["y"] = self.y.tolist()
        out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ProtocolFixture":
        p = linalg.check_modulus(data["modulus"])
        n = int(data["dimension"])
        a = GeneratorSet.from_gens([np.array(g, dtype=np.int64) for g in data["a_gens"]], p, "A")
        b = GeneratorSet.from_gens([np.array(g, dtype=np.int64) for g in data["b_gens"]], p, "B")
        if a.dimension != n or b.dimension != n:
            raise ValueError("generator size does not match the fixture dimension")
        h = linalg.as_array(data["h"], p) if data.get("h") is not None else None
        y = linalg.as_array(data["y"], p) if data.get("y") is not None else None
        fixture = cls(p, n, a, b, h, y, data.get("seed"))
        fixture.check_commuting()
        return fixture

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _embed(block: np.ndarray, offset: int, n: int) -> np.ndarray:
    m = np.eye(n, dtype=np.int64)
    k = block.shape[0]
    m[offset : offset + k, offset : offset + k] = block
    return freeze(m)


def make_block_fixture(
    n1: int,
    n2: int,
    k_a: int,
    k_b: int,
    p: int,
    rng: np.random.Generator,
    seed: int | None = None,
    retries: int = DEFAULT_RETRIES,
) -> ProtocolFixture:
    if min(n1, n2) < 1 or min(k_a, k_b) < 1:
        raise ValueError("block sizes and generator counts must be >= 1")
    p = linalg.check_modulus(p)
    n = n1 + n2
    a_gens = [_embed(linalg.random_invertible(n1, p, rng, retries), 0, n) for _ in range(k_a)]
    b_gens = [_embed(linalg.random_invertible(n2, p, rng, retries), n1, n) for _ in range(k_b)]
    h = linalg.random_invertible(n, p, rng, retries)
    y = linalg.random_nonzero_vector(n, p, rng, retries)
    fixture = ProtocolFixture(
        p, n, GeneratorSet.from_gens(a_gens, p, "A"), GeneratorSet.from_gens(b_gens, p, "B"),
        h, y, seed, "block",
    )
    fixture.check_commuting()
    return fixture


def eval_poly(coeffs: Sequence[int], m: np.ndarray, p: int) -> np.ndarray:
    """q(M) by Horner's rule; coeffs[i] multiplies M**i."""
    n = m.shape[0]
    acc = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (kernels.matmul(acc, m, p) + int(c) * eye) % p
    return freeze(acc)


def make_polynomial_fixture(
    n: int,
    p: int,
    rng: np.random.Generator,
    k_a: int = 2,
    k_b: int = 2,
    degree: int = 2,
    seed: int | None = None,
    retries: int = DEFAULT_RETRIES,
) -> ProtocolFixture:
    if n < 2:
        raise ValueError("polynomial fixtures need n >= 2")
    p = linalg.check_modulus(p)
    m = linalg.random_matrix((n, n), p, rng)

    def draw() -> np.ndarray:
        for _ in range(retries):
            q = eval_poly(rng.integers(0, p, size=degree + 1), m, p)
            if linalg.rank(q, p) == n:
                return q
        raise RuntimeError(f"no invertible polynomial in M after {retries} tries")

    a_gens = [draw() for _ in range(k_a)]
    b_gens = [draw() for _ in range(k_b)]
    h = linalg.random_invertible(n, p, rng, retries)
    y = linalg.random_nonzero_vector(n, p, rng, retries)
    fixture = ProtocolFixture(
        p, n, GeneratorSet.from_gens(a_gens, p, "A"), GeneratorSet.from_gens(b_gens, p, "B"),
        h, y, seed, "polynomial",
    )
    fixture.check_commutative()
    return fixture
