"""Partition function, Boltzmann (equilibrium) state and the free-energy functional."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .state import ClassicalState, as_observable, as_state, entropy, expectation


@dataclass(frozen=True)
class EquilibriumResult:
    state: ClassicalState
    log_partition: float
    functional_value: float


def log_partition(a) -> float:
    """``log Za`` where ``Za = sum_i exp(-a_i)``, evaluated with a max shift."""
    neg = -as_observable(a).values
    m = float(neg.max())
    return m + math.log(math.fsum(np.exp(neg - m).tolist()))


def equilibrium_state(a) -> EquilibriumResult:
    """The unique minimizer of ``<a|x> - entropy(x)`` over the simplex.

    Its entries are ``exp(-a_i) / Za`` and the minimum value is ``-log Za``.
    """
    a = as_observable(a)
    neg = -a.values
    w = np.exp(neg - neg.max())
    state = ClassicalState(w / w.sum())
    return EquilibriumResult(
        state=state,
        log_partition=log_partition(a),
        functional_value=free_energy(a, state),
    )


def free_energy(a, x) -> float:
    x = as_state(x)
    return expectation(a, x) - entropy(x)
