"""Digital and variational influences of coordinates on tabulated functions.

The digital influence of coordinate i is the probability (over the other
coordinates) that the function is not constant on the coordinate-i fiber; the
variational influence is the expected weighted variance along that fiber.
Under the uniform measure both are exact rationals built from integer counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .core import FLOAT_EQ_TOL, Scalar, TabulatedFunction
from .errors import StateError


def _geometry(f: TabulatedFunction, i: int) -> tuple[int, int, int]:
    f.domain._check_coord(i)
    r = f.domain.arities[i]
    inner = f.domain.stride(i)
    outer = f.domain.size // (r * inner)
    return outer, r, inner


def _fiber_weights(f: TabulatedFunction, i: int) -> np.ndarray:
    """Weight of each coordinate-i fiber: the reduced domain's point weights."""
    w = np.ones(1)
    for j in range(f.domain.n):
        if j != i:
            w = np.multiply.outer(w, f.domain.weight_vector(j)).reshape(-1)
    return w


def influence(f: TabulatedFunction, i: int) -> Scalar:
    """Digital influence I_f(i) in [0, 1]."""
    outer, r, inner = _geometry(f, i)
    tol = 0.0 if f.is_boolean else FLOAT_EQ_TOL
    mask = K.nonconstant_mask(f.values, outer, r, inner, tol)
    if f.domain.is_uniform:
        return Fraction(int(mask.sum()), outer * inner)
    return float(np.dot(_fiber_weights(f, i), mask))


def variational_influence(f: TabulatedFunction, i: int) -> Scalar:
    """Variational influence: expected variance of f along the coordinate-i fiber."""
    outer, r, inner = _geometry(f, i)
    if f.domain.is_uniform and f.is_boolean:
        ones = K.ones_per_fiber(f.values, outer, r, inner)
        num = int(np.sum(ones * (r - ones)))
        return Fraction(num, f.domain.size * r)
    _, var = K.mean_var_per_fiber(
        f.values, f.domain.weight_vector(i), outer, r, inner
    )
    if f.domain.is_uniform:
        return float(var.sum() / (outer * inner))
    return float(np.dot(_fiber_weights(f, i), var))


def total_influence(f: TabulatedFunction) -> Scalar:
    return sum(influence(f, i) for i in range(f.domain.n))


def total_variational_influence(f: TabulatedFunction) -> Scalar:
    return sum(variational_influence(f, i) for i in range(f.domain.n))


def max_influence_coordinate(f: TabulatedFunction) -> tuple[int, Scalar]:
    """Coordinate with the largest digital influence, lowest index on ties."""
    best_i, best = 0, influence(f, 0)
    for i in range(1, f.domain.n):
        v = influence(f, i)
        if v > best:
            best_i, best = i, v
    return best_i, best


@dataclass(frozen=True)
class InfluenceProfile:
    """Per-coordinate digital and variational influences plus their totals."""

    digital: tuple[Scalar, ...]
    variational: tuple[Scalar, ...]
    total_digital: Scalar
    total_variational: Scalar

    @classmethod
    def of(cls, f: TabulatedFunction) -> InfluenceProfile:
        dig = tuple(influence(f, i) for i in range(f.domain.n))
        var = tuple(variational_influence(f, i) for i in range(f.domain.n))
        profile = cls(dig, var, sum(dig), sum(var))
        if f.is_boolean:
            # 4 * variational <= digital for Boolean tables; a violation can
            # only come from a kernel bug, so fail loudly.
            for i, (d, v) in enumerate(zip(dig, var)):
                if 4 * v > d + 1e-9:
                    raise StateError(f"influence invariant violated at coordinate {i}")
        return profile
