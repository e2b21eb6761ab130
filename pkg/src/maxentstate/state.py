"""Classical states, observables and the operations every other module shares.

Indices are zero-based throughout the Python API: ``project(x, 0)`` removes
the first outcome.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import DimensionError, DomainError, InvalidInputError

#: Inputs whose total deviates from one by at most this much are renormalized.
RENORMALIZE_TOL = 1e-9
# sums this close to one are left alone, so rebuilding a state never perturbs it
_SUM_EXACT = 1e-14

ArrayLike = Union[Iterable[float], np.ndarray]


def _frozen(values: ArrayLike) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Observable:
    """Strictly increasing outcome values ``a_1 < ... < a_n`` with ``n >= 2``."""

    values: np.ndarray

    def __init__(self, values: ArrayLike):
        arr = _frozen(values)
        if arr.size < 2:
            raise InvalidInputError(f"an observable needs at least 2 values, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("observable values must be finite")
        if not np.all(np.diff(arr) > 0):
            raise InvalidInputError("observable values must be strictly increasing")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        return isinstance(other, Observable) and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return f"Observable({self.values.tolist()})"

    @property
    def span(self) -> float:
        """``a_n - a_1``."""
        return float(self.values[-1] - self.values[0])


@dataclass(frozen=True, eq=False)
class ClassicalState:
    """A point of the probability simplex on ``n >= 2`` outcomes."""

    probs: np.ndarray

    def __init__(self, probs: ArrayLike):
        arr = np.array(probs, dtype=np.float64).reshape(-1)
        if arr.size < 2:
            raise InvalidInputError(f"a state needs at least 2 entries, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("state entries must be finite")
        if np.any(arr < -RENORMALIZE_TOL) or np.any(arr > 1.0 + RENORMALIZE_TOL):
            raise InvalidInputError("state entries must lie in [0, 1]")
        arr = np.clip(arr, 0.0, 1.0)
        total = math.fsum(arr.tolist())
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise InvalidInputError(f"state entries sum to {total!r}, not 1")
        if abs(total - 1.0) > _SUM_EXACT:
            arr = arr / total
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, i):
        return self.probs[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassicalState) and np.array_equal(self.probs, other.probs)

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())

    def __repr__(self) -> str:
        return f"ClassicalState({self.probs.tolist()})"

    @property
    def is_pure(self) -> bool:
        return bool(np.any(self.probs == 1.0))

    def allclose(self, other: "ClassicalState | ArrayLike", atol: float = 1e-12) -> bool:
        other_probs = other.probs if isinstance(other, ClassicalState) else np.asarray(other, float)
        return self.probs.shape == other_probs.shape and bool(
            np.max(np.abs(self.probs - other_probs)) <= atol
        )


def as_observable(a) -> Observable:
    return a if isinstance(a, Observable) else Observable(a)


def as_state(x) -> ClassicalState:
    return x if isinstance(x, ClassicalState) else ClassicalState(x)


def bottom(n: int) -> ClassicalState:
    """The uniform state ``(1/n, ..., 1/n)``, least element of the Bayesian order."""
    return ClassicalState(np.full(n, 1.0 / n))


def pure(n: int, i: int) -> ClassicalState:
    """The pure state ``e_i`` (zero-based ``i``)."""
    probs = np.zeros(n)
    probs[i] = 1.0
    return ClassicalState(probs)


def expectation(a, x) -> float:
    """Average value ``sum_i a_i x_i`` of observable ``a`` in state ``x``."""
    a, x = as_observable(a), as_state(x)
    if len(a) != len(x):
        raise DimensionError(f"observable has {len(a)} values but state has {len(x)}")
    value = math.fsum((a.values * x.probs).tolist())
    # rounding can push the sum a hair outside the hull of the values
    return min(max(value, float(a.values[0])), float(a.values[-1]))


def entropy(x) -> float:
    """Shannon entropy in nats, with ``0 log 0 = 0``."""
    p = as_state(x).probs
    p = p[p > 0.0]
    return max(-math.fsum((p * np.log(p)).tolist()), 0.0)


def project(x, i: int) -> ClassicalState:
    """Bayesian projection: drop outcome ``i`` and renormalize the rest.

    Defined only when ``x_i != 1``; the result has one fewer outcome, so
    ``x`` needs at least three.
    """
    x = as_state(x)
    n = len(x)
    if not 0 <= i < n:
        raise IndexError(f"outcome index {i} out of range for n={n}")
    if n < 3:
        raise DomainError("projection of a 2-outcome state would leave a single outcome")
    if x.probs[i] == 1.0:
        raise DomainError(f"state is the pure state e_{i}; projection p_{i} is undefined")
    rest = np.delete(x.probs, i)
    # sum of the survivors equals 1 - x_i without the cancellation near x_i = 1
    return ClassicalState(rest / math.fsum(rest.tolist()))


def sort_desc(x) -> ClassicalState:
    """Entries in decreasing order; ties keep their original relative order."""
    x = as_state(x)
    order = np.argsort(-x.probs, kind="stable")
    return ClassicalState(x.probs[order])
