"""Honest simulations of the sandwich-multiplication key exchanges.

Each run returns a :class:`HonestResult`: the public :class:`Transcript`, both
parties' keys, and a private log kept only for test oracles. Transcripts never
carry private data and are the only input the attacks accept.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from . import linalg
from .linalg import identity, mat_inv, mat_mul, sandwich, sub
from .platform import DEFAULT_WORD_LENGTH, FixtureError, GeneratorSet, ProtocolFixture, random_word

PROTOCOLS = ("wang", "kolee", "harley", "generic")

WANG_LABELS = ("h", "x", "y", "w", "z", "u", "v")
KOLEE_LABELS = ("h", "h_a", "h_b")
HARLEY_LABELS = ("yb", "xa", "yba1", "xab1", "ya1b2", "xb1_minus_yb2")


class TranscriptError(ValueError):
    """Malformed or inconsistent transcript data."""


class ScheduleError(ValueError):
    """A generic schedule outside the attack model or otherwise invalid."""


@dataclass(frozen=True, eq=False)
class PublicFixture:
    modulus: int
    dimension: int
    a_side: GeneratorSet
    b_side: GeneratorSet
    h: np.ndarray | None = None

    @classmethod
    def of(cls, fixture: ProtocolFixture, with_h: bool = True) -> "PublicFixture":
        return cls(fixture.modulus, fixture.dimension, fixture.a_side, fixture.b_side,
                   fixture.h if with_h else None)

    def side(self, name: str) -> GeneratorSet:
        name = name.upper()
        if name == "A":
            return self.a_side
        if name == "B":
            return self.b_side
        if name == "G":
            return self.a_side.union(self.b_side)
        raise KeyError(f"unknown side {name!r}")

    def to_json(self) -> dict:
        out = {
            "modulus": self.modulus,
            "dimension": self.dimension,
            "a_gens": [g.tolist() for g in self.a_side.gens],
            "b_gens": [g.tolist() for g in self.b_side.gens],
        }
        if self.h is not None:
            out["h"] = self.h.tolist()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PublicFixture":
        p = linalg.check_modulus(data["modulus"])
        n = int(data["dimension"])
        a = GeneratorSet.from_gens([np.array(g, dtype=np.int64) for g in data["a_gens"]], p, "A")
        b = GeneratorSet.from_gens([np.array(g, dtype=np.int64) for g in data["b_gens"]], p, "B")
        if a.dimension != n or b.dimension != n:
            raise TranscriptError("generator size does not match the stated dimension")
        h = _payload(data["h"], p, "matrix", n) if data.get("h") is not None else None
        return cls(p, n, a, b, h)


def _payload(data, p: int, kind: str, n: int) -> np.ndarray:
    a = np.array(data, dtype=object)
    want = (n, n) if kind == "matrix" else (n,)
    if a.shape != want:
        raise TranscriptError(f"{kind} payload of shape {a.shape}, expected {want}")
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in a.ravel()):
        raise TranscriptError("payload entries must be integers")
    return linalg.as_array(a, p)


@dataclass(frozen=True, eq=False)
class Transcript:
    protocol_id: str
    fixture_public: PublicFixture
    messages: tuple[tuple[str, np.ndarray], ...]

    def __post_init__(self):
        if self.protocol_id not in PROTOCOLS:
            raise TranscriptError(f"unknown protocol {self.protocol_id!r}")
        labels = [label for label, _ in self.messages]
        if len(set(labels)) != len(labels):
            raise TranscriptError("duplicate message labels")

    @property
    def modulus(self) -> int:
        return self.fixture_public.modulus

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.messages]

    def __getitem__(self, label: str) -> np.ndarray:
        for name, payload in self.messages:
            if name == label:
                return payload
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def replace(self, label: str, payload: np.ndarray) -> "Transcript":
        if label not in self:
            raise KeyError(label)
        msgs = tuple((n, payload if n == label else m) for n, m in self.messages)
        return Transcript(self.protocol_id, self.fixture_public, msgs)

    def to_json(self) -> dict:
        return {
            "protocol_id": self.protocol_id,
            "fixture_public": self.fixture_public.to_json(),
            "messages": [
                {"label": label, "kind": "matrix" if m.ndim == 2 else "vector", "data": m.tolist()}
                for label, m in self.messages
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "Transcript":
        try:
            public = PublicFixture.from_json(data["fixture_public"])
            msgs = []
            for item in data["messages"]:
                kind = item["kind"]
                if kind not in ("matrix", "vector"):
                    raise TranscriptError(f"unknown message kind {kind!r}")
                msgs.append((str(item["label"]), _payload(item["data"], public.modulus, kind, public.dimension)))
            return cls(str(data["protocol_id"]), public, tuple(msgs))
        except (KeyError, TypeError) as exc:
            raise TranscriptError(f"malformed transcript: {exc!r}") from exc

    @classmethod
    def loads(cls, text: str) -> "Transcript":
        return cls.from_json(json.loads(text))


@dataclass(eq=False)
class HonestResult:
    transcript: Transcript
    key_alice: np.ndarray
    key_bob: np.ndarray
    private_log: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def key(self) -> np.ndarray:
        if not np.array_equal(self.key_alice, self.key_bob):
            raise AssertionError("honest parties disagree on the key")
        return self.key_alice


def _sample(side: GeneratorSet, names: Iterable[str], rng, word_len) -> dict[str, np.ndarray]:
    return {name: random_word(side, rng, word_len) for name in names}


WANG_ALICE = ("c1", "c2", "d1", "d2", "d3", "d4")
WANG_BOB = ("f1", "f2", "g1", "g2", "g3", "g4")


def wang_exchange(fixture: ProtocolFixture, priv: dict[str, np.ndarray]) -> HonestResult:
    """Run the Wang protocol with the given private elements."""
    fixture.check_commuting()
    p, h = fixture.modulus, fixture.h
    inv = {k: mat_inv(priv[k], p) for k in ("d1", "d2", "d3", "d4", "g1", "g2", "g3", "g4")}
    x = sandwich(mat_mul(priv["d1"], priv["c1"], p), h, mat_mul(priv["c2"], priv["d2"], p), p)
    y = sandwich(mat_mul(priv["g1"], priv["f1"], p), h, mat_mul(priv["f2"], priv["g2"], p), p)
    w = sandwich(mat_mul(priv["g3"], priv["f1"], p), x, mat_mul(priv["f2"], priv["g4"], p), p)
    z = sandwich(mat_mul(priv["d3"], priv["c1"], p), y, mat_mul(priv["c2"], priv["d4"], p), p)
    u = sandwich(inv["d1"], w, inv["d2"], p)
    v = sandwich(inv["g1"], z, inv["g2"], p)
    key_alice = sandwich(inv["d3"], v, inv["d4"], p)
    key_bob = sandwich(inv["g3"], u, inv["g4"], p)
    msgs = tuple(zip(WANG_LABELS, (h, x, y, w, z, u, v)))
    t = Transcript("wang", PublicFixture.of(fixture), msgs)
    return HonestResult(t, key_alice, key_bob, dict(priv))


def run_wang(fixture: ProtocolFixture, rng: np.random.Generator,
             word_len: tuple[int, int] = DEFAULT_WORD_LENGTH) -> HonestResult:
    fixture.check_commuting()
    priv = _sample(fixture.a_side, WANG_ALICE, rng, word_len)
    priv.update(_sample(fixture.b_side, WANG_BOB, rng, word_len))
    return wang_exchange(fixture, priv)


def kolee_exchange(fixture: ProtocolFixture, a: np.ndarray, b: np.ndarray) -> HonestResult:
    """Ko-Lee conjugation protocol with private a in A, b in B."""
    fixture.check_commuting()
    p, h = fixture.modulus, fixture.h
    ai, bi = mat_inv(a, p), mat_inv(b, p)
    h_a = sandwich(a, h, ai, p)
    h_b = sandwich(b, h, bi, p)
    key_alice = sandwich(a, h_b, ai, p)
    key_bob = sandwich(b, h_a, bi, p)
    t = Transcript("kolee", PublicFixture.of(fixture), tuple(zip(KOLEE_LABELS, (h, h_a, h_b))))
    return HonestResult(t, key_alice, key_bob, {"a": a, "b": b})


def run_kolee(fixture: ProtocolFixture, rng: np.random.Generator,
              word_len: tuple[int, int] = DEFAULT_WORD_LENGTH) -> HonestResult:
    fixture.check_commuting()
    a = random_word(fixture.a_side, rng, word_len)
    b = random_word(fixture.b_side, rng, word_len)
    return kolee_exchange(fixture, a, b)


HARLEY_PRIVATE = ("b", "a1", "a", "b1", "b2")


def harley_exchange(fixture: ProtocolFixture, x: np.ndarray, priv: dict[str, np.ndarray]) -> HonestResult:
    """Harley's message transfer: Alice sends ``x``; key_bob is Bob's recovered message."""
    fixture.check_commutative()
    p = fixture.modulus
    y = fixture.y
    x = linalg.as_array(x, p)
    if x.shape != (fixture.dimension,):
        raise ValueError(f"message of shape {x.shape}, expected ({fixture.dimension},)")
    b, a1, a, b1, b2 = (priv[k] for k in HARLEY_PRIVATE)
    yb = mat_mul(y, b, p)  # Bob
    xa = mat_mul(x, a, p)  # Alice
    yba1 = mat_mul(yb, a1, p)
    xab1 = mat_mul(xa, b1, p)  # Bob
    ya1b2 = mat_mul(mat_mul(yba1, mat_inv(b, p), p), b2, p)
    xb1 = mat_mul(xab1, mat_inv(a, p), p)  # Alice
    yb2 = mat_mul(ya1b2, mat_inv(a1, p), p)
    masked = sub(xb1, yb2, p)
    b1i = mat_inv(b1, p)  # Bob: x = (xb1 - yb2) b1^-1 + y b2 b1^-1
    recovered = linalg.add(mat_mul(masked, b1i, p), mat_mul(mat_mul(y, b2, p), b1i, p), p)
    msgs = tuple(zip(HARLEY_LABELS, (yb, xa, yba1, xab1, ya1b2, masked)))
    t = Transcript("harley", PublicFixture.of(fixture, with_h=False), msgs)
    log = dict(priv)
    log["y"] = y
    return HonestResult(t, x, recovered, log)


def run_harley(fixture: ProtocolFixture, x: np.ndarray, rng: np.random.Generator,
               word_len: tuple[int, int] = DEFAULT_WORD_LENGTH) -> HonestResult:
    if fixture.y is None:
        raise FixtureError("Harley runs need a fixture vector y")
    fixture.check_commutative()
    g = fixture.group
    priv = _sample(g, HARLEY_PRIVATE, rng, word_len)
    return harley_exchange(fixture, x, priv)


# -- generic scheme ---------------------------------------------------------

@dataclass(frozen=True)
class MapSpec:
    name: str
    side: str  # "A" (Alice) or "B" (Bob)
    kind: str = "sandwich"  # or "conjugate": right factor is the inverse of the left


@dataclass(frozen=True)
class Round:
    """The acting side applies the listed maps, innermost first, to ``source`` and publishes ``label``."""

    label: str
    side: str
    source: str
    apply: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class KeyDerivation:
    source: str
    apply: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class Schedule:
    maps: tuple[MapSpec, ...]
    rounds: tuple[Round, ...]
    alice_key: KeyDerivation
    bob_key: KeyDerivation

    def validate(self) -> None:
        owner = {}
        for m in self.maps:
            if m.side not in ("A", "B"):
                raise ScheduleError(f"map {m.name!r}: side must be A or B")
            if m.kind not in ("sandwich", "conjugate"):
                raise ScheduleError(f"map {m.name!r}: unknown kind {m.kind!r}")
            if m.name in owner:
                raise ScheduleError(f"map {m.name!r} declared twice")
            owner[m.name] = m.side
        known = {"h"}
        published = set()
        for r in self.rounds:
            if r.label in known:
                raise ScheduleError(f"label {r.label!r} reused")
            if r.source not in known:
                raise ScheduleError(f"round {r.label!r}: source {r.source!r} is not yet public")
            if not r.apply:
                raise ScheduleError(f"round {r.label!r} applies no map")
            _check_chain(r.apply, owner, r.side, f"round {r.label!r}")
            published.update(name for name, _ in r.apply)
            known.add(r.label)
        for who, side, kd in (("alice", "A", self.alice_key), ("bob", "B", self.bob_key)):
            if kd.source not in known:
                raise ScheduleError(f"{who} key source {kd.source!r} is not public")
            _check_chain(kd.apply, owner, side, f"{who} key")
        unused = set(owner) - published
        if unused:
            # every secret map must appear in some public (input, output) pair
            raise ScheduleError(f"maps never used in a public round: {sorted(unused)}")

    def to_json(self) -> dict:
        chain = lambda ops: [[n, e] for n, e in ops]  # noqa: E731
        return {
            "maps": [{"name": m.name, "side": m.side, "kind": m.kind} for m in self.maps],
            "rounds": [
                {"label": r.label, "side": r.side, "source": r.source, "apply": chain(r.apply)}
                for r in self.rounds
            ],
            "alice_key": {"source": self.alice_key.source, "apply": chain(self.alice_key.apply)},
            "bob_key": {"source": self.bob_key.source, "apply": chain(self.bob_key.apply)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Schedule":
        try:
            chain = lambda ops: tuple((str(n), int(e)) for n, e in ops)  # noqa: E731
            s = cls(
                tuple(MapSpec(m["name"], m["side"], m.get("kind", "sandwich")) for m in data["maps"]),
                tuple(Round(r["label"], r["side"], r["source"], chain(r["apply"])) for r in data["rounds"]),
                KeyDerivation(data["alice_key"]["source"], chain(data["alice_key"].get("apply", []))),
                KeyDerivation(data["bob_key"]["source"], chain(data["bob_key"].get("apply", []))),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScheduleError(f"malformed schedule: {exc!r}") from exc
        s.validate()
        return s


def _check_chain(ops, owner, side, where):
    for name, exp in ops:
        if name not in owner:
            raise ScheduleError(f"{where}: unknown map {name!r}")
        if owner[name] != side:
            raise ScheduleError(f"{where}: map {name!r} belongs to side {owner[name]}, not {side}")
        if exp not in (1, -1):
            raise ScheduleError(f"{where}: exponent must be +1 or -1")


def run_generic(fixture: ProtocolFixture, schedule: Schedule, rng: np.random.Generator,
                word_len: tuple[int, int] = DEFAULT_WORD_LENGTH) -> HonestResult:
    """Simulate an arbitrary chain of sandwich publications.

    Secret maps are sampled in declaration order (left word, then right word).
    """
    schedule.validate()
    fixture.check_commuting()
    p = fixture.modulus
    maps: dict[str, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}
    log: dict[str, np.ndarray] = {}
    for m in schedule.maps:
        side = fixture.a_side if m.side == "A" else fixture.b_side
        left = random_word(side, rng, word_len)
        right = mat_inv(left, p) if m.kind == "conjugate" else random_word(side, rng, word_len)
        maps[m.name] = (left, right, mat_inv(left, p), mat_inv(right, p))
        log[m.name + ".left"], log[m.name + ".right"] = left, right

    def run_chain(value, ops):
        for name, exp in ops:
            left, right, li, ri = maps[name]
            value = sandwich(left, value, right, p) if exp == 1 else sandwich(li, value, ri, p)
        return value

    public = {"h": fixture.h}
    msgs = [("h", fixture.h)]
    for r in schedule.rounds:
        public[r.label] = run_chain(public[r.source], r.apply)
        msgs.append((r.label, public[r.label]))
    key_alice = run_chain(public[schedule.alice_key.source], schedule.alice_key.apply)
    key_bob = run_chain(public[schedule.bob_key.source], schedule.bob_key.apply)
    t = Transcript("generic", PublicFixture.of(fixture), tuple(msgs))
    return HonestResult(t, key_alice, key_bob, log)


def kolee_schedule() -> Schedule:
    return Schedule(
        (MapSpec("a", "A", "conjugate"), MapSpec("b", "B", "conjugate")),
        (Round("h_a", "A", "h", (("a", 1),)), Round("h_b", "B", "h", (("b", 1),))),
        KeyDerivation("h_b", (("a", 1),)),
        KeyDerivation("h_a", (("b", 1),)),
    )


def wang_schedule() -> Schedule:
    """Wang message flow; maps c=(c1,c2), d=(d1,d2), e=(d3,d4), f, g, k=(g3,g4)."""
    return Schedule(
        (MapSpec("c", "A"), MapSpec("d", "A"), MapSpec("e", "A"),
         MapSpec("f", "B"), MapSpec("g", "B"), MapSpec("k", "B")),
        (
            Round("x", "A", "h", (("c", 1), ("d", 1))),
            Round("y", "B", "h", (("f", 1), ("g", 1))),
            Round("w", "B", "x", (("f", 1), ("k", 1))),
            Round("z", "A", "y", (("c", 1), ("e", 1))),
            Round("u", "A", "w", (("d", -1),)),
            Round("v", "B", "z", (("g", -1),)),
        ),
        KeyDerivation("v", (("e", -1),)),
        KeyDerivation("u", (("k", -1),)),
    )


def single_schedule() -> Schedule:
    """One publication x = a h b; the key is x itself."""
    return Schedule(
        (MapSpec("m", "A"),),
        (Round("x", "A", "h", (("m", 1),)),),
        KeyDerivation("x"),
        KeyDerivation("x"),
    )


def identity_privates(fixture: ProtocolFixture, names: Iterable[str]) -> dict[str, np.ndarray]:
    return {k: identity(fixture.dimension) for k in names}


def payload_to_json(m: np.ndarray) -> dict[str, Any]:
    return {"kind": "matrix" if m.ndim == 2 else "vector", "data": m.tolist()}


def payload_from_json(data: dict, p: int, n: int) -> np.ndarray:
    try:
        return _payload(data["data"], p, data["kind"], n)
    except KeyError as exc:
        raise TranscriptError(f"malformed payload: missing {exc}") from exc

