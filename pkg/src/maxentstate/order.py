"""The Bayesian order on classical states and the Scott-continuous map ``phi``.

Two decision procedures are provided for ``x ⊑ y``:

* :func:`leq_symmetric` finds a permutation putting both states in
  decreasing order and checks ``x_i y_{i+1} <= x_{i+1} y_i``. Linear after a
  sort, so it is the one to use in practice.
* :func:`leq_projective` unfolds the recursive definition through Bayesian
  projections down to two outcomes. Exponential in ``n``; kept as a
  cross-check.

:func:`phi_chain` iterates ``phi`` from the uniform state. Each step reads a
multiplier estimate off the two largest entries of the current state, applies
one step of the fixed-point iteration to it, and returns the Gibbs state for
the result. The chain increases in the Bayesian order and its limit is the
maximum entropy state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._backend import kernels
from .errors import DimensionError, DomainError, SizeError
from .lagrange import MaxEntProblem
from .state import ClassicalState, as_state

#: Slack on the order's inequalities; floating-point states need one.
ORDER_TOL = 1e-12

#: Largest ``n`` accepted by :func:`leq_projective`.
PROJECTIVE_MAX_N = 6


@dataclass(frozen=True)
class OrderVerdict:
    related: bool
    witness_permutation: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.related


def _pair(x, y):
    x, y = as_state(x), as_state(y)
    if len(x) != len(y):
        raise DimensionError(f"states have different lengths {len(x)} and {len(y)}")
    return x.probs, y.probs


def _witness(x: np.ndarray, y: np.ndarray, tol: float) -> np.ndarray:
    # sort x descending; inside each block of (near-)tied x entries sort y descending
    order = np.argsort(-x, kind="stable")
    xs = x[order]
    start = 0
    n = len(x)
    for i in range(1, n + 1):
        if i == n or xs[i - 1] - xs[i] > tol:
            if i - start > 1:
                block = order[start:i]
                order[start:i] = block[np.argsort(-y[block], kind="stable")]
            start = i
    return order


def leq_symmetric(x, y, tol: float = ORDER_TOL) -> OrderVerdict:
    """Decide ``x ⊑ y`` by the permutation characterization.

    The witness is a zero-based permutation ``s`` with ``x[s]`` and ``y[s]``
    both decreasing.
    """
    xp, yp = _pair(x, y)
    order = _witness(xp, yp, tol)
    xs, ys = xp[order], yp[order]
    if np.any(ys[1:] > ys[:-1] + tol):
        return OrderVerdict(False)
    if np.any(xs[:-1] * ys[1:] > xs[1:] * ys[:-1] + tol):
        return OrderVerdict(False)
    return OrderVerdict(True, tuple(int(i) for i in order))


def _leq_rec(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    if len(x) == 2:
        x1, y1 = x[0], y[0]
        return bool((y1 <= x1 + tol and x1 <= 0.5 + tol) or (0.5 <= x1 + tol and x1 <= y1 + tol))
    for i in range(len(x)):
        if x[i] == 1.0 or y[i] == 1.0:
            continue
        px = np.delete(x, i)
        py = np.delete(y, i)
        px, py = px / px.sum(), py / py.sum()
        if not _leq_rec(px, py, tol):
            return False
    return True


def leq_projective(x, y, tol: float = ORDER_TOL) -> bool:
    """Decide ``x ⊑ y`` from the recursive definition via Bayesian projections.

    ``x ⊑ y`` holds iff ``p_i(x) ⊑ p_i(y)`` for every outcome ``i`` at which
    neither state is pure; on two outcomes, iff ``y_1 <= x_1 <= 1/2`` or
    ``1/2 <= x_1 <= y_1``.
    """
    xp, yp = _pair(x, y)
    if len(xp) > PROJECTIVE_MAX_N:
        raise SizeError(
            f"projective check is limited to n <= {PROJECTIVE_MAX_N} (got n={len(xp)}); "
            "use the symmetric method"
        )
    return _leq_rec(xp, yp, tol)


def positive_branch(p: MaxEntProblem) -> bool:
    """True when one fixed-point step from 0 moves up, i.e. the multiplier is positive."""
    return kernels.if_step(p.values, p.target_mean, 0.0) > 0.0


def _require_interior(p: MaxEntProblem):
    if not p.is_interior:
        raise DomainError("the map phi is only defined for a_1 < E < a_n")


def _lambda_probs(probs: np.ndarray, a: np.ndarray, positive: bool) -> float:
    s2, s1 = np.partition(probs, len(probs) - 2)[-2:]
    if s2 == 0.0:
        # only a pure state has a zero runner-up
        return math.inf if positive else -math.inf
    if s1 == s2:
        return 0.0  # not -0.0 on the negative branch
    gap = (a[-1] - a[-2]) if positive else (a[0] - a[1])
    return math.log(s1 / s2) / gap


def lambda_functional(x, p: MaxEntProblem) -> float:
    """Multiplier estimate read off a state: ``log(s_1 / s_2)`` over an adjacent gap of ``a``.

    ``s_1 >= s_2`` are the two largest entries. The gap is ``a_n - a_{n-1}``
    when the multiplier is positive and ``a_1 - a_2`` otherwise, so the
    Gibbs state ``softmax(t a)`` maps back to ``t``. Pure states give
    ``+inf`` or ``-inf`` accordingly.
    """
    _require_interior(p)
    return _lambda_probs(as_state(x).probs, p.values, positive_branch(p))


def _phi_probs(probs: np.ndarray, p: MaxEntProblem, positive: bool) -> tuple[np.ndarray, float]:
    a = p.values
    lam = _lambda_probs(probs, a, positive)
    if math.isinf(lam):
        out = np.zeros(len(a))
        out[-1 if lam > 0 else 0] = 1.0
        return out, lam
    return kernels.softmax(a, kernels.if_step(a, p.target_mean, lam)), lam


def phi(x, p: MaxEntProblem) -> ClassicalState:
    """``softmax(I(lambda(x)) * a)`` where ``I`` is one fixed-point step."""
    _require_interior(p)
    out, _ = _phi_probs(as_state(x).probs, p, positive_branch(p))
    return ClassicalState(out)


@dataclass(frozen=True)
class PhiChain:
    """Iterates ``phi^k(bottom)`` for ``k = 0..K``, one row per state."""

    states: np.ndarray
    lambdas: np.ndarray
    converged: bool

    def __len__(self) -> int:
        return len(self.lambdas)

    def state(self, k: int) -> ClassicalState:
        return ClassicalState(self.states[k])

    @property
    def final(self) -> ClassicalState:
        return self.state(-1)


def phi_chain(p: MaxEntProblem, max_steps: int = 100_000, tol: float = 1e-12) -> PhiChain:
    """Iterate ``phi`` from the uniform state until successive states agree to ``tol``.

    ``lambdas[k]`` is :func:`lambda_functional` of ``states[k]``. When the
    step budget runs out first the partial chain comes back with
    ``converged=False``. A step that moves less than ``tol`` (max norm) is
    not appended.
    """
    _require_interior(p)
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    n = len(p.observable)
    positive = positive_branch(p)
    a = p.values
    current = np.full(n, 1.0 / n)
    states = [current]
    lambdas = [_lambda_probs(current, a, positive)]
    converged = False
    for _ in range(max_steps):
        nxt, _ = _phi_probs(current, p, positive)
        if np.max(np.abs(nxt - current)) < tol:
            converged = True
            break
        current = nxt
        states.append(current)
        lambdas.append(_lambda_probs(current, a, positive))
    return PhiChain(np.array(states), np.array(lambdas), converged)
