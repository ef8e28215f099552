"""Pure-numpy fallback for the fiber-scan kernels.

Mirrors the compiled module exactly; see ``_fiberops.pyx`` for the fiber
indexing convention. The fallback pays one reshape copy per call.
"""

from __future__ import annotations

import numpy as np


def _as_fibers(values: np.ndarray, outer: int, r: int, inner: int) -> np.ndarray:
    # (o, a, q) -> (o, q, a): row index o*inner + q matches the fiber index.
    return (
        np.asarray(values)
        .reshape(outer, r, inner)
        .transpose(0, 2, 1)
        .reshape(outer * inner, r)
    )


def nonconstant_mask(values, outer, r, inner, tol):
    fib = _as_fibers(values, outer, r, inner)
    if tol == 0.0:
        diff = fib != fib[:, :1]
    else:
        diff = np.abs(fib - fib[:, :1]) > tol
    return diff.any(axis=1).astype(np.uint8)


def ones_per_fiber(values, outer, r, inner):
    fib = _as_fibers(values, outer, r, inner)
    return (fib == 1.0).sum(axis=1).astype(np.int64)


def mean_var_per_fiber(values, w, outer, r, inner):
    fib = _as_fibers(values, outer, r, inner)
    w = np.asarray(w, dtype=np.float64)
    mean = fib @ w
    var = np.maximum((fib * fib) @ w - mean * mean, 0.0)
    return mean, var
