# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels; :mod:`maxentstate._pykernels` mirrors this API."""
from libc.float cimport DBL_EPSILON
from libc.math cimport exp, fabs, fmax

import numpy as np

BACKEND = "cython"

RESIDUAL_MET = 0
STEP_MET = 1
MAX_ITER = 2

cdef enum:
    _RESIDUAL_MET = 0
    _STEP_MET = 1
    _MAX_ITER = 2


cdef inline double _ref(const double[::1] a, double t) noexcept nogil:
    # exponents t*(a_i - ref) are <= 0 with the largest exactly 0; differencing
    # before scaling keeps their absolute error near eps*|t|*span, not eps*|t*a_i|
    return a[a.shape[0] - 1] if t >= 0.0 else a[0]


cdef double _residual(const double[::1] a, double mean, double t) noexcept nogil:
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double r = _ref(a, t)
    cdef double w, num = 0.0, den = 0.0
    for i in range(n):
        w = exp(t * (a[i] - r))
        num += (a[i] - mean) * w
        den += w
    return num / den


def residual(const double[::1] a, double mean, double t):
    return _residual(a, mean, t)


def residual_derivative(const double[::1] a, double t):
    cdef Py_ssize_t i, j, n = a.shape[0]
    cdef double r = _ref(a, t)
    cdef double den = 0.0, acc = 0.0, d
    cdef double[64] wbuf
    cdef object wobj = None
    cdef double[::1] w
    if n <= 64:
        w = wbuf
    else:
        wobj = np.empty(n)
        w = wobj
    for i in range(n):
        w[i] = exp(t * (a[i] - r))
        den += w[i]
    for i in range(n):
        for j in range(i + 1, n):
            d = a[j] - a[i]
            acc += w[i] * w[j] * d * d
    return acc / (den * den)


def if_step(const double[::1] a, double mean, double t):
    cdef double span = a[a.shape[0] - 1] - a[0]
    return t - _residual(a, mean, t) / (span * span)


def softmax(const double[::1] a, double t):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double r = _ref(a, t)
    cdef double den = 0.0
    out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = exp(t * (a[i] - r))
        den += o[i]
    for i in range(n):
        o[i] /= den
    return out


def fixed_point(const double[::1] a, double mean, double x0, double residual_tol,
                double step_tol, long max_iter, bint record=False):
    """Iterate ``x -> x - f(x)/(a_n - a_1)**2`` from ``x0``.

    Returns ``(x, f(x), iterations, status, lambdas, residuals)``; the two
    lists are ``None`` unless ``record`` is set.
    """
    cdef double span = a[a.shape[0] - 1] - a[0]
    cdef double inv = 1.0 / (span * span)
    cdef double x = x0, xn, fx
    cdef long k = 0
    cdef int status
    cdef list lams = [] if record else None
    cdef list ress = [] if record else None
    while True:
        fx = _residual(a, mean, x)
        if record:
            lams.append(x)
            ress.append(fx)
        if fabs(fx) <= residual_tol:
            status = _RESIDUAL_MET
            break
        # below this the residual is rounding noise and cannot shrink further
        if fabs(fx) <= 4.0 * DBL_EPSILON * span * (1.0 + fabs(x) * span):
            status = _STEP_MET
            break
        if k >= max_iter:
            status = _MAX_ITER
            break
        xn = x - fx * inv
        k += 1
        # an absolute step_tol below float resolution at |x| could never trigger
        if fabs(xn - x) <= fmax(step_tol, 4.0 * DBL_EPSILON * fabs(x)):
            x = xn
            fx = _residual(a, mean, x)
            if record:
                lams.append(x)
                ress.append(fx)
            status = _RESIDUAL_MET if fabs(fx) <= residual_tol else _STEP_MET
            break
        x = xn
    return x, fx, k, status, lams, ress
