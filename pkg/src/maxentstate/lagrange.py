"""The Lagrange multiplier of the maximum entropy problem and the state it defines.

Given a strictly increasing observable ``a`` and a target mean ``E`` with
``a_1 < E < a_n``, the maximum entropy state is ``softmax(lam * a)`` where
``lam`` is the unique root of

    f(x) = sum_i a_i exp(x a_i) / sum_i exp(x a_i) - E.

The default solver iterates ``x -> x - f(x) / (a_n - a_1)**2``. Because
``0 < f'(x) < (a_n - a_1)**2`` everywhere, that map is increasing with slope
below one, so its iterates approach the root monotonically from any start.
At ``E = a_1`` or ``E = a_n`` no finite multiplier exists and the answer is
the pure state ``e_1`` or ``e_n``.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._backend import kernels
from .errors import InvalidInputError, NoSolutionError, NonConvergenceError
from .state import ClassicalState, Observable, as_observable, pure

METHODS = ("fixed_point", "bisection", "newton")

_EPS = sys.float_info.epsilon

_TERMINATION = {0: "residual_met", 1: "step_met", 2: "max_iter"}


@dataclass(frozen=True)
class MaxEntProblem:
    observable: Observable
    target_mean: float

    def __init__(self, observable, target_mean: float):
        a = as_observable(observable)
        mean = float(target_mean)
        if not math.isfinite(mean):
            raise InvalidInputError("target mean must be finite")
        lo, hi = float(a.values[0]), float(a.values[-1])
        if not lo <= mean <= hi:
            raise NoSolutionError(f"mean {mean!r} outside [{lo!r}, {hi!r}]")
        object.__setattr__(self, "observable", a)
        object.__setattr__(self, "target_mean", mean)

    @property
    def values(self) -> np.ndarray:
        return self.observable.values

    @property
    def boundary_eps(self) -> float:
        a = self.values
        return 1e-12 * max(1.0, abs(float(a[0])), abs(float(a[-1])))

    def at_lower_boundary(self) -> bool:
        return self.target_mean - float(self.values[0]) <= self.boundary_eps

    def at_upper_boundary(self) -> bool:
        return float(self.values[-1]) - self.target_mean <= self.boundary_eps

    @property
    def is_interior(self) -> bool:
        return not (self.at_lower_boundary() or self.at_upper_boundary())


@dataclass(frozen=True)
class SolverConfig:
    residual_tol: float = 1e-12
    step_tol: float = 1e-14
    max_iter: int = 1_000_000
    method: str = "fixed_point"
    initial_guess: float = 0.0
    record_trace: bool = False

    def __post_init__(self):
        if not (self.residual_tol > 0 and self.step_tol > 0):
            raise InvalidInputError("tolerances must be strictly positive")
        if int(self.max_iter) < 1:
            raise InvalidInputError("max_iter must be at least 1")
        if self.method not in METHODS:
            raise InvalidInputError(f"unknown method {self.method!r}; choose from {METHODS}")
        if not math.isfinite(self.initial_guess):
            raise InvalidInputError("initial guess must be finite")


@dataclass(frozen=True)
class SolveTrace:
    """Iterates ``lambda_k`` and residuals ``f(lambda_k)`` in visiting order."""

    lambdas: np.ndarray
    residuals: np.ndarray
    termination: str

    @property
    def entries(self):
        return [(k, float(l), float(r)) for k, (l, r) in enumerate(zip(self.lambdas, self.residuals))]

    def __len__(self) -> int:
        return len(self.lambdas)


@dataclass(frozen=True)
class MaxEntResult:
    lam: float
    state: ClassicalState
    iterations: int
    residual: float
    method: str
    termination: str
    trace: Optional[SolveTrace] = field(default=None, repr=False)

    @property
    def is_boundary(self) -> bool:
        return math.isinf(self.lam)


def residual(p: MaxEntProblem, x: float) -> float:
    """``f(x)``: mean of ``a`` under ``softmax(x a)`` minus the target."""
    return kernels.residual(p.values, p.target_mean, float(x))


def residual_derivative(p: MaxEntProblem, x: float) -> float:
    """``f'(x) = sum_{i<j} w_i w_j (a_j - a_i)**2 / (sum_i w_i)**2``, ``w = exp(x a)``."""
    return kernels.residual_derivative(p.values, float(x))


def if_step(p: MaxEntProblem, x: float) -> float:
    """One step ``x - f(x) / (a_n - a_1)**2`` of the globally convergent iteration."""
    return kernels.if_step(p.values, p.target_mean, float(x))


def maxent_state(p: MaxEntProblem, lam: float) -> ClassicalState:
    """``softmax(lam * a)``; the infinite limits are ``e_n`` and ``e_1``."""
    n = len(p.observable)
    if lam == math.inf:
        return pure(n, n - 1)
    if lam == -math.inf:
        return pure(n, 0)
    return ClassicalState(kernels.softmax(p.values, float(lam)))


def _trace(lams, ress, termination) -> SolveTrace:
    return SolveTrace(np.asarray(lams, dtype=float), np.asarray(ress, dtype=float), termination)


def _boundary_result(p: MaxEntProblem, method: str, record: bool) -> MaxEntResult:
    lam = -math.inf if p.at_lower_boundary() else math.inf
    trace = _trace([], [], "boundary") if record else None
    return MaxEntResult(lam, maxent_state(p, lam), 0, 0.0, method, "boundary", trace)


def _finish(p, cfg, x, fx, k, termination, lams, ress) -> MaxEntResult:
    trace = _trace(lams, ress, termination) if cfg.record_trace else None
    if termination == "max_iter":
        raise NonConvergenceError(
            f"{cfg.method} did not reach tolerance in {cfg.max_iter} iterations "
            f"(last iterate {x!r}, residual {fx!r})",
            trace=trace,
            last=x,
        )
    return MaxEntResult(x, maxent_state(p, x), k, abs(fx), cfg.method, termination, trace)


def _fixed_point(p: MaxEntProblem, cfg: SolverConfig) -> MaxEntResult:
    x, fx, k, status, lams, ress = kernels.fixed_point(
        p.values, p.target_mean, float(cfg.initial_guess),
        cfg.residual_tol, cfg.step_tol, int(cfg.max_iter), cfg.record_trace,
    )
    return _finish(p, cfg, x, fx, k, _TERMINATION[status], lams, ress)


def bracket(p: MaxEntProblem) -> tuple[float, float]:
    """An interval ``[lo, hi]`` with ``f(lo) <= 0 <= f(hi)``, doubling outward from 0."""
    f0 = residual(p, 0.0)
    if f0 == 0.0:
        return 0.0, 0.0
    if f0 < 0.0:
        lo, hi = 0.0, 1.0
        while residual(p, hi) < 0.0:
            lo, hi = hi, 2.0 * hi
    else:
        lo, hi = -1.0, 0.0
        while residual(p, lo) > 0.0:
            lo, hi = 2.0 * lo, lo
    return lo, hi


def _bisection(p: MaxEntProblem, cfg: SolverConfig) -> MaxEntResult:
    lo, hi = bracket(p)
    lams, ress = [], []
    k = 0
    while True:
        x = 0.5 * (lo + hi)
        fx = residual(p, x)
        if cfg.record_trace:
            lams.append(x)
            ress.append(fx)
        if abs(fx) <= cfg.residual_tol:
            termination = "residual_met"
            break
        if hi - lo <= max(cfg.step_tol, 4.0 * _EPS * abs(x)) or x in (lo, hi):
            termination = "step_met"
            break
        if k >= cfg.max_iter:
            termination = "max_iter"
            break
        if fx < 0.0:
            lo = x
        else:
            hi = x
        k += 1
    return _finish(p, cfg, x, fx, k, termination, lams, ress)


def _newton(p: MaxEntProblem, cfg: SolverConfig) -> MaxEntResult:
    lo, hi = bracket(p)
    limit = 1e6 * (1.0 + max(abs(lo), abs(hi)))
    x = float(cfg.initial_guess)
    lams, ress = [], []
    k = 0
    while True:
        fx = residual(p, x)
        if cfg.record_trace:
            lams.append(x)
            ress.append(fx)
        if abs(fx) <= cfg.residual_tol:
            termination = "residual_met"
            break
        if k >= cfg.max_iter:
            termination = "max_iter"
            break
        d = residual_derivative(p, x)
        xn = x - fx / d if d > 0.0 else math.inf
        k += 1
        if not math.isfinite(xn) or abs(xn) > limit:
            trace = _trace(lams, ress, "diverged") if cfg.record_trace else None
            raise NonConvergenceError(
                f"newton diverged after {k} iterations (iterate {xn!r} beyond {limit:.3g})",
                trace=trace,
                last=x,
            )
        if abs(xn - x) <= max(cfg.step_tol, 4.0 * _EPS * abs(x)):
            x = xn
            fx = residual(p, x)
            if cfg.record_trace:
                lams.append(x)
                ress.append(fx)
            termination = "residual_met" if abs(fx) <= cfg.residual_tol else "step_met"
            break
        x = xn
    return _finish(p, cfg, x, fx, k, termination, lams, ress)


_SOLVERS = {"fixed_point": _fixed_point, "bisection": _bisection, "newton": _newton}


def solve(p: MaxEntProblem, cfg: Optional[SolverConfig] = None) -> MaxEntResult:
    """Maximum entropy state of ``p`` and its multiplier.

    Raises :class:`NonConvergenceError` if ``cfg.max_iter`` runs out first.
    """
    cfg = cfg or SolverConfig()
    if not p.is_interior:
        return _boundary_result(p, cfg.method, cfg.record_trace)
    return _SOLVERS[cfg.method](p, cfg)


def solve_newton(p: MaxEntProblem, cfg: Optional[SolverConfig] = None) -> MaxEntResult:
    """Newton's method on ``f``. Experimental: no convergence guarantee is claimed."""
    cfg = cfg or SolverConfig()
    if cfg.method != "newton":
        cfg = SolverConfig(
            cfg.residual_tol, cfg.step_tol, cfg.max_iter, "newton", cfg.initial_guess, cfg.record_trace
        )
    return solve(p, cfg)
