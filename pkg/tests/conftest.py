import numpy as np
import pytest

from maxentstate import MaxEntProblem

_ACCEPTANCE_LINES = []


def random_observable(rng, n=None, low=-5.0, high=5.0):
    n = int(rng.integers(2, 11)) if n is None else n
    while True:
        a = np.sort(rng.uniform(low, high, n))
        if np.all(np.diff(a) > 0):
            return a


def random_problem(rng, n=None, margin=0.01):
    """Observable in [-5, 5]; mean uniform in (a_1 + d, a_n - d), d = margin * span."""
    a = random_observable(rng, n)
    d = margin * (a[-1] - a[0])
    return MaxEntProblem(a, rng.uniform(a[0] + d, a[-1] - d))


def random_state(rng, n):
    return rng.dirichlet(np.ones(n))


def comparable_pair(rng, n):
    """x ⊑ y built in sorted form by sharpening consecutive ratios, then permuted."""
    xs = np.sort(random_state(rng, n))[::-1]
    w = np.exp(-np.cumsum(rng.exponential(0.5, n)))
    ys = xs * w
    ys /= ys.sum()
    perm = rng.permutation(n)
    x, y = np.empty(n), np.empty(n)
    x[perm], y[perm] = xs, ys
    return x, y


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def report():
    """Record a one-line pass/fail verdict for the terminal summary."""

    def _report(name, passed, detail=""):
        # passed=None marks an informational line with no verdict
        tag = "INFO" if passed is None else ("PASS" if passed else "FAIL")
        _ACCEPTANCE_LINES.append(f"[{tag}] {name}  {detail}".rstrip())

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
