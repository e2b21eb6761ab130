"""Independent references for the solver: grid search, the n=2 closed form,
and a sampler of states meeting the mean constraint.

None of this touches the kernels in :mod:`maxentstate.lagrange`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, InvalidInputError, OracleError, SizeError
from .lagrange import MaxEntProblem
from .state import ClassicalState

GRID_MAX_N = 4


@dataclass(frozen=True)
class GridSpec:
    resolution: int = 200

    def __post_init__(self):
        if self.resolution < 10:
            raise InvalidInputError("grid resolution must be at least 10")


def _compositions(n: int, r: int) -> np.ndarray:
    """All integer vectors of length ``n`` with nonnegative entries summing to ``r``."""
    if n == 1:
        return np.array([[r]])
    blocks = []
    for first in range(r + 1):
        rest = _compositions(n - 1, r - first)
        blocks.append(np.column_stack([np.full(len(rest), first), rest]))
    return np.vstack(blocks)


def _entropy_rows(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(x > 0, x * np.log(x), 0.0)
    return -terms.sum(axis=1)


def oracle_maxent_grid(p: MaxEntProblem, grid: Optional[GridSpec] = None) -> ClassicalState:
    """Highest-entropy grid point of the simplex whose mean is within one
    grid step (``(a_n - a_1) / resolution``) of the target.

    Grid points are ``k / resolution`` for integer ``k`` summing to
    ``resolution``; the answer is within ``O(1/resolution)`` of the optimum.
    """
    grid = grid or GridSpec()
    a = p.values
    n = len(a)
    if n > GRID_MAX_N:
        raise SizeError(f"grid oracle supports n <= {GRID_MAX_N}, got n={n}")
    if not p.is_interior:
        raise DomainError("grid oracle needs a_1 < E < a_n")
    r = grid.resolution
    slack = (a[-1] - a[0]) / r
    best, best_h = None, -math.inf
    # one block per value of the first coordinate keeps memory at O(r^(n-2))
    for first in range(r + 1):
        rest = _compositions(n - 1, r - first)
        points = np.column_stack([np.full(len(rest), first), rest]) / r
        points = points[np.abs(points @ a - p.target_mean) <= slack]
        if len(points) == 0:
            continue
        h = _entropy_rows(points)
        i = int(np.argmax(h))
        if h[i] > best_h:
            best, best_h = points[i], h[i]
    if best is None:
        raise OracleError(f"no grid point within {slack!r} of the mean at resolution {r}")
    return ClassicalState(best)


def oracle_lambda_n2(p: MaxEntProblem) -> float:
    """Exact multiplier for two outcomes: ``log((E - a_1)/(a_2 - E)) / (a_2 - a_1)``."""
    a = p.values
    if len(a) != 2:
        raise DomainError("closed form applies to n = 2 only")
    if not p.is_interior:
        raise DomainError("closed form needs a_1 < E < a_2")
    a1, a2 = float(a[0]), float(a[1])
    e = p.target_mean
    return math.log((e - a1) / (a2 - e)) / (a2 - a1)


def constrained_sampler(
    p: MaxEntProblem, count: int, seed: Optional[int] = None, max_tries: int = 100
) -> list[ClassicalState]:
    """Random states with mean within 1e-9 of the target.

    Each draw is a uniform point of the simplex moved onto the constraint
    hyperplane along ``a - mean(a)``, which keeps the entries' sum. Draws that
    leave the simplex are pulled back toward a fixed feasible state (the mix
    of ``e_1`` and ``e_n`` with the right mean) to a random point of the
    feasible part of the segment.
    """
    if count < 1:
        raise InvalidInputError("count must be at least 1")
    if not p.is_interior:
        raise DomainError("sampler needs a_1 < E < a_n")
    rng = np.random.default_rng(seed)
    a = p.values
    e = p.target_mean
    n = len(a)
    d = a - a.mean()
    dd = float(d @ d)
    anchor = np.zeros(n)
    anchor[0] = (a[-1] - e) / (a[-1] - a[0])
    anchor[-1] = (e - a[0]) / (a[-1] - a[0])

    out: list[ClassicalState] = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries * count:
            raise OracleError(f"sampler produced {len(out)} of {count} states")
        z = rng.dirichlet(np.ones(n))
        z = z + ((e - z @ a) / dd) * d
        step = z - anchor
        neg = step < 0
        s_max = float(np.min(-anchor[neg] / step[neg])) if np.any(neg) else math.inf
        if s_max < 1.0:
            z = anchor + rng.uniform(0.0, s_max) * step
        z = np.maximum(z, 0.0)
        z = z / z.sum()
        if abs(z @ a - e) > 1e-9:
            continue
        out.append(ClassicalState(z))
    return out
