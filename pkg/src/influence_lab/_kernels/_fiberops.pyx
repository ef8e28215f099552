# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fiber-scan kernels.

A table over a product domain is stored in mixed-radix rank order with
coordinate 0 most significant.  For a fixed coordinate with arity ``r``,
``outer`` is the product of the arities before it and ``inner`` the product of
the arities after it; the fiber with index ``o * inner + q`` consists of the
table entries ``o*r*inner + a*inner + q`` for ``a`` in ``range(r)``.  All
kernels walk the table in place (no reshape copies) and return either integer
counts, so exact-rational callers stay exact, or plain float accumulations.
"""

import numpy as np


def nonconstant_mask(const double[::1] values, Py_ssize_t outer, Py_ssize_t r,
                     Py_ssize_t inner, double tol):
    """Per-fiber flag: 1 where the fiber is not constant (within tol)."""
    out = np.zeros(outer * inner, dtype=np.uint8)
    cdef unsigned char[::1] mask = out
    cdef Py_ssize_t o, q, a, base
    cdef double v0, d
    for o in range(outer):
        for q in range(inner):
            base = o * r * inner + q
            v0 = values[base]
            for a in range(1, r):
                d = values[base + a * inner] - v0
                if d > tol or -d > tol:
                    mask[o * inner + q] = 1
                    break
    return out


def ones_per_fiber(const double[::1] values, Py_ssize_t outer, Py_ssize_t r,
                   Py_ssize_t inner):
    """Count of entries equal to 1.0 in each fiber (values must be 0/1)."""
    out = np.zeros(outer * inner, dtype=np.int64)
    cdef long long[::1] cnt = out
    cdef Py_ssize_t o, q, a, base
    cdef long long c
    for o in range(outer):
        for q in range(inner):
            base = o * r * inner + q
            c = 0
            for a in range(r):
                if values[base + a * inner] == 1.0:
                    c += 1
            cnt[o * inner + q] = c
    return out


def mean_var_per_fiber(const double[::1] values, const double[::1] w, Py_ssize_t outer,
                       Py_ssize_t r, Py_ssize_t inner):
    """Weighted mean and variance of each fiber; w holds the r atom weights."""
    mean_out = np.empty(outer * inner, dtype=np.float64)
    var_out = np.empty(outer * inner, dtype=np.float64)
    cdef double[::1] mean = mean_out
    cdef double[::1] var = var_out
    cdef Py_ssize_t o, q, a, base, f
    cdef double m, s, v, x
    for o in range(outer):
        for q in range(inner):
            base = o * r * inner + q
            m = 0.0
            s = 0.0
            for a in range(r):
                x = values[base + a * inner]
                m += w[a] * x
                s += w[a] * x * x
            f = o * inner + q
            mean[f] = m
            v = s - m * m
            var[f] = v if v > 0.0 else 0.0
    return mean_out, var_out
