"""Linear decomposition attacks on public transcripts.

A plan is a chain of steps. Each step names a known public pair
``(center, image)`` with ``image = phi(center)`` for a secret map owned by one
side, builds a basis of Lin(owner · center · owner), decomposes the image in it,
and transports the secret map to ``target``. The target must lie in the
opposite side's double coset of the center for the result to be meaningful;
that is a property of the plan, not something the executor can check.

Attack entry points take a :class:`~lindecomp.protocols.Transcript` and nothing
else, so private protocol state is out of reach by construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .decompose import apply_operator, apply_right_operator, derive_operator, derive_right_operator
from .linalg import NotInSpan, add
from .protocols import Transcript
from .span import orbit_closure, span_closure


class PlanError(ValueError):
    """A plan that does not fit the transcript (unknown labels, bad owner, cycles)."""


class AttackFailure(RuntimeError):
    """A decomposition failed: the transcript does not match the claimed protocol."""

    def __init__(self, step: int, name: str, reason: str):
        super().__init__(f"step {step} ({name}): {reason}")
        self.step = step
        self.name = name


@dataclass(frozen=True)
class AttackStep:
    center: str
    image: str
    owner: str  # "A" or "B"
    target: str
    name: str


@dataclass(frozen=True)
class AttackPlan:
    steps: tuple[AttackStep, ...]
    output: str

    def validate(self, available: list[str] | None = None) -> None:
        """Check dataflow: every reference resolves to a message or an earlier step."""
        known = set(available) if available is not None else None
        produced: set[str] = set()
        for i, s in enumerate(self.steps):
            if s.owner not in ("A", "B"):
                raise PlanError(f"step {i}: owner must be A or B, got {s.owner!r}")
            if s.name in produced or (known is not None and s.name in known):
                raise PlanError(f"step {i}: result name {s.name!r} already in use")
            for ref in (s.center, s.image, s.target):
                if ref in produced:
                    continue
                if known is not None and ref not in known:
                    raise PlanError(f"step {i}: unresolved reference {ref!r}")
            produced.add(s.name)
        if self.output not in produced and (known is None or self.output not in known):
            raise PlanError(f"output {self.output!r} is produced by no step")

    def to_json(self) -> dict:
        return {
            "steps": [
                {"center": s.center, "image": s.image, "owner": s.owner, "target": s.target, "name": s.name}
                for s in self.steps
            ],
            "output": self.output,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "AttackPlan":
        try:
            steps = tuple(
                AttackStep(str(s["center"]), str(s["image"]), str(s["owner"]).upper(), str(s["target"]), str(s["name"]))
                for s in data["steps"]
            )
            plan = cls(steps, str(data["output"]))
        except (KeyError, TypeError) as exc:
            raise PlanError(f"malformed plan: {exc!r}") from exc
        plan.validate()
        return plan

    @classmethod
    def loads(cls, text: str) -> "AttackPlan":
        return cls.from_json(json.loads(text))


@dataclass(frozen=True)
class StepTrace:
    name: str
    basis_dim: int
    productive_lists: int
    cached: bool


def execute_plan_traced(t: Transcript, plan: AttackPlan) -> tuple[np.ndarray, list[StepTrace]]:
    plan.validate(t.labels)
    public = t.fixture_public
    values = dict(t.messages)
    cache = {}
    trace = []
    for i, step in enumerate(plan.steps):
        side = public.side(step.owner)
        center, image, target = values[step.center], values[step.image], values[step.target]
        if center.ndim != 2:
            raise PlanError(f"step {i}: sandwich steps need matrix messages")
        key = (step.owner, step.center)
        cached = key in cache
        if not cached:
            if not center.any():
                raise AttackFailure(i, step.name, "center is the zero matrix")
            cache[key] = span_closure(side, center)
        basis = cache[key]
        try:
            op = derive_operator(basis, image)
        except NotInSpan:
            raise AttackFailure(i, step.name, f"{step.image!r} is not in Lin({step.owner}·{step.center}·{step.owner})") from None
        values[step.name] = apply_operator(op, target)
        trace.append(StepTrace(step.name, len(basis), basis.productive_list_count, cached))
    return values[plan.output], trace


def execute_plan(t: Transcript, plan: AttackPlan) -> np.ndarray:
    return execute_plan_traced(t, plan)[0]


# Wang: K = phi_{d1,d2}^-1(phi_{d1c1,c2d2}(phi_{g1,g2}^-1(y)))
WANG_PLAN = AttackPlan(
    (
        AttackStep("z", "v", "B", "y", "f1hf2"),
        AttackStep("h", "x", "A", "f1hf2", "d1c1f1hf2c2d2"),
        AttackStep("w", "u", "A", "d1c1f1hf2c2d2", "K"),
    ),
    "K",
)

KOLEE_PLAN = AttackPlan((AttackStep("h", "h_a", "A", "h_b", "K"),), "K")


def _expect(t: Transcript, protocol_id: str) -> None:
    if t.protocol_id != protocol_id:
        raise PlanError(f"expected a {protocol_id} transcript, got {t.protocol_id}")


def attack_wang(t: Transcript) -> np.ndarray:
    _expect(t, "wang")
    return execute_plan(t, WANG_PLAN)


def attack_kolee(t: Transcript) -> np.ndarray:
    _expect(t, "kolee")
    return execute_plan(t, KOLEE_PLAN)


def attack_harley(t: Transcript) -> np.ndarray:
    """Recover Alice's message x from a Harley transcript.

    x = rho_{b1}^-1(xb1 - yb2) + rho_{b1}^-1(rho_{a1}^-1(ya1b2)); the inner
    inverse comes from the pair (yba1 -> yb), the outer from (xab1 -> xa), and
    linearity lets the outer operator act once on the sum.
    """
    _expect(t, "harley")
    p = t.modulus
    g = t.fixture_public.side("G")
    yb2 = _right_step(g, t["yba1"], t["yb"], t["ya1b2"], 0, "yb2")
    return _right_step(g, t["xab1"], t["xa"], add(t["xb1_minus_yb2"], yb2, p), 1, "x")


def _right_step(g, center, image, target, step, name):
    """Transport the right action center -> image onto ``target``.

    A zero center spans only {0}; the step is then consistent only when image
    and target are zero too (a zero plaintext in Harley's scheme).
    """
    if not center.any():
        if image.any() or target.any():
            raise AttackFailure(step, name, "orbit center is zero but image or target is not")
        return target
    try:
        op = derive_right_operator(orbit_closure(g, center), image)
    except NotInSpan:
        raise AttackFailure(step, name, "image is not in the orbit span of the center") from None
    return apply_right_operator(op, target)


ATTACKS = {"wang": attack_wang, "kolee": attack_kolee, "harley": attack_harley}


def attack(t: Transcript, plan: AttackPlan | None = None) -> np.ndarray:
    """Dispatch on the transcript's protocol; generic transcripts need a plan."""
    if plan is not None:
        return execute_plan(t, plan)
    if t.protocol_id == "generic":
        raise PlanError("generic transcripts need an attack plan")
    return ATTACKS[t.protocol_id](t)
