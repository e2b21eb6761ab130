"""Pure-Python fallback for the compiled kernels in ``_ckernels.pyx``.

Same names, signatures and arithmetic order, so both backends agree to
rounding.
"""
import math
import sys

import numpy as np

BACKEND = "python"

RESIDUAL_MET = 0
STEP_MET = 1
MAX_ITER = 2

_EPS = sys.float_info.epsilon


def _ref(a, t):
    return a[-1] if t >= 0.0 else a[0]


def _residual(a, mean, t):
    r = _ref(a, t)
    num = den = 0.0
    for ai in a:
        w = math.exp(t * (ai - r))
        num += (ai - mean) * w
        den += w
    return num / den


def residual(a, mean, t):
    return _residual(a.tolist(), float(mean), float(t))


def residual_derivative(a, t):
    a = a.tolist()
    t = float(t)
    r = _ref(a, t)
    w = [math.exp(t * (ai - r)) for ai in a]
    den = 0.0
    for wi in w:
        den += wi
    acc = 0.0
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            d = a[j] - a[i]
            acc += w[i] * w[j] * d * d
    return acc / (den * den)


def if_step(a, mean, t):
    a = a.tolist()
    span = a[-1] - a[0]
    return t - _residual(a, float(mean), float(t)) / (span * span)


def softmax(a, t):
    a = a.tolist()
    t = float(t)
    r = _ref(a, t)
    w = [math.exp(t * (ai - r)) for ai in a]
    den = 0.0
    for wi in w:
        den += wi
    return np.array([wi / den for wi in w])


def fixed_point(a, mean, x0, residual_tol, step_tol, max_iter, record=False):
    a = a.tolist()
    mean = float(mean)
    span = a[-1] - a[0]
    inv = 1.0 / (span * span)
    x = float(x0)
    k = 0
    lams = [] if record else None
    ress = [] if record else None
    while True:
        fx = _residual(a, mean, x)
        if record:
            lams.append(x)
            ress.append(fx)
        if abs(fx) <= residual_tol:
            status = RESIDUAL_MET
            break
        # below this the residual is rounding noise and cannot shrink further
        if abs(fx) <= 4.0 * _EPS * span * (1.0 + abs(x) * span):
            status = STEP_MET
            break
        if k >= max_iter:
            status = MAX_ITER
            break
        xn = x - fx * inv
        k += 1
        # an absolute step_tol below float resolution at |x| could never trigger
        if abs(xn - x) <= max(step_tol, 4.0 * _EPS * abs(x)):
            x = xn
            fx = _residual(a, mean, x)
            if record:
                lams.append(x)
                ress.append(fx)
            status = RESIDUAL_MET if abs(fx) <= residual_tol else STEP_MET
            break
        x = xn
    return x, fx, k, status, lams, ress
