"""Backend selection for the GF(p) hot loops.

The compiled Cython module is used when it was built; otherwise the numpy
fallback is imported. Both expose ``matmul``, ``sandwich``, ``sandwich_sum``,
``reduce``, ``eliminate``, ``sandwich_all``, ``right_all`` and ``absorb`` with
identical semantics.
"""
from __future__ import annotations

import contextlib
from types import ModuleType

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS: dict[str, ModuleType] = {"numpy": _fallback}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active: ModuleType = _compiled if _compiled is not None else _fallback


def available() -> list[str]:
    return list(_BACKENDS)


def active() -> str:
    return "compiled" if _active is _compiled else "numpy"


def set_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {available()}") from None


@contextlib.contextmanager
def backend(name: str):
    prev = active()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def matmul(a, b, p):
    return _active.matmul(a, b, p)


def sandwich(a, f, b, p):
    return _active.sandwich(a, f, b, p)


def sandwich_sum(coeffs, lefts, w, rights, p):
    return _active.sandwich_sum(coeffs, lefts, w, rights, p)


def reduce(rows, pivots, t, p):
    return _active.reduce(rows, pivots, t, p)


def eliminate(rows, combos, count, new_row, new_combo, pivot, p):
    return _active.eliminate(rows, combos, count, new_row, new_combo, pivot, p)


def sandwich_all(xs, e, p):
    return _active.sandwich_all(xs, e, p)


def right_all(v, xs, p):
    return _active.right_all(v, xs, p)


def absorb(rows, combos, pivots, count, cands, p):
    return _active.absorb(rows, combos, pivots, count, cands, p)
