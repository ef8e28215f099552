"""Orthogonal decomposition over product spaces and the uniform-cube spectrum.

The decomposition writes f as a sum of components F_S, one per coordinate
subset S, where F_S depends only on the coordinates in S and integrates to
zero along every coordinate of S. It is computed by inclusion-exclusion over
conditional averages, applied one coordinate at a time:

    F_S = (prod_{i in S} (id - E_i)) (prod_{i not in S} E_i) f,

with E_i the averaging operator along coordinate i. Expanding the product
recovers the alternating-sign sum over conditional averages, and the operator
form works for arbitrary arities and weights. On the uniform two-point cube
the components collapse to multiples of the Walsh characters and a fast
Walsh-Hadamard transform is used instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from .core import Domain, TabulatedFunction
from .errors import DomainError, ResourceError

#: Largest coordinate count for the subset decomposition (2^n components).
DEFAULT_DECOMPOSITION_CAP = 12


def _axis_mean(arr: np.ndarray, axis: int, w: np.ndarray) -> np.ndarray:
    """Weighted average along one axis, keeping the axis as size 1."""
    shape = [1] * arr.ndim
    shape[axis] = -1
    return (arr * w.reshape(shape)).sum(axis=axis, keepdims=True)


@dataclass(frozen=True)
class EfronSteinDecomposition:
    """The family {F_S} with squared 2-norms, keyed by frozen coordinate sets."""

    domain: Domain
    components: dict[frozenset[int], TabulatedFunction]
    norms_sq: dict[frozenset[int], float]

    def reconstruction(self) -> np.ndarray:
        total = np.zeros(self.domain.size)
        for comp in self.components.values():
            total = total + comp.values
        return total

    def norm_total(self) -> float:
        return math.fsum(self.norms_sq.values())

    def variance_from_norms(self) -> float:
        return math.fsum(v for s, v in self.norms_sq.items() if s)

    def coordinate_norm_sum(self, i: int) -> float:
        """Sum of ||F_S||^2 over S containing i (equals the variational influence)."""
        return math.fsum(v for s, v in self.norms_sq.items() if i in s)


def efron_stein(
    f: TabulatedFunction, max_coordinates: int = DEFAULT_DECOMPOSITION_CAP
) -> EfronSteinDecomposition:
    n = f.domain.n
    if n > max_coordinates:
        raise ResourceError(f"decomposition over n={n} exceeds the cap {max_coordinates}")
    shape = f.domain.arities
    base = f.values.reshape(shape)
    wvecs = [f.domain.weight_vector(i) for i in range(n)]
    pw = f.domain.point_weights()

    components: dict[frozenset[int], TabulatedFunction] = {}
    norms: dict[frozenset[int], float] = {}
    for bits in range(1 << n):
        S = frozenset(i for i in range(n) if bits >> i & 1)
        arr = base
        for i in range(n):
            m = _axis_mean(arr, i, wvecs[i])
            arr = arr - m if i in S else np.broadcast_to(m, arr.shape)
        vals = np.ascontiguousarray(np.broadcast_to(arr, shape)).reshape(-1)
        components[S] = TabulatedFunction(f.domain, vals)
        norms[S] = float(np.dot(pw, vals * vals))
    return EfronSteinDecomposition(f.domain, components, norms)


# ---------------------------------------------------------------------------
# Walsh spectrum on the uniform two-point cube


def _fwht(a: np.ndarray) -> np.ndarray:
    """In-place-style fast Walsh-Hadamard transform (unnormalized)."""
    a = a.copy()
    h = 1
    n = a.size
    while h < n:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a = np.stack([top, bot], axis=1).reshape(-1)
        h *= 2
    return a


def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.uint32)
    counts = np.zeros(1 << n, dtype=np.int64)
    while masks.any():
        counts += masks & 1
        masks >>= 1
    return counts


@dataclass(frozen=True)
class WalshSpectrum:
    """Character coefficients on the uniform cube, value map {0 -> +1, 1 -> -1}.

    ``coeffs[k]`` is the coefficient of the subset whose indicator point has
    rank k, i.e. coordinate i sits at bit n-1-i, matching the table order.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.coeffs, dtype=np.float64, copy=True).reshape(-1)
        if vals.size != 1 << self.n:
            raise DomainError(f"need {1 << self.n} coefficients, got {vals.size}")
        vals.setflags(write=False)
        object.__setattr__(self, "coeffs", vals)

    def _rank(self, subset) -> int:
        idx = 0
        for i in subset:
            if not 0 <= i < self.n:
                raise DomainError(f"coordinate {i} out of range for n={self.n}")
            idx |= 1 << (self.n - 1 - i)
        return idx

    def coefficient(self, subset) -> float:
        return float(self.coeffs[self._rank(subset)])

    def subset_of_rank(self, k: int) -> frozenset[int]:
        return frozenset(i for i in range(self.n) if k >> (self.n - 1 - i) & 1)

    def as_dict(self) -> dict[frozenset[int], float]:
        return {self.subset_of_rank(k): float(c) for k, c in enumerate(self.coeffs)}

    def synthesize(self) -> TabulatedFunction:
        """Back to a value table on the uniform cube (inverse transform)."""
        return TabulatedFunction(Domain((2,) * self.n), _fwht(self.coeffs))

    def two_norm_squared(self) -> float:
        return float(np.dot(self.coeffs, self.coeffs))


def walsh_spectrum(f: TabulatedFunction) -> WalshSpectrum:
    dom = f.domain
    if any(r != 2 for r in dom.arities) or not dom.is_uniform:
        raise DomainError("Walsh spectrum requires the uniform measure on a binary cube")
    return WalshSpectrum(dom.n, _fwht(f.values) / dom.size)


def noise_operator(spectrum: WalshSpectrum, delta: float) -> WalshSpectrum:
    """Scale the coefficient of each subset S by delta^{|S|}."""
    sizes = _popcounts(spectrum.n)
    return WalshSpectrum(spectrum.n, spectrum.coeffs * np.power(float(delta), sizes))


def p_norm(f: TabulatedFunction, p: float) -> float:
    """(E |f|^p)^(1/p) under the product measure."""
    if p < 1:
        raise DomainError(f"p-norm needs p >= 1, got {p}")
    w = f.domain.point_weights()
    return float(np.dot(w, np.abs(f.values) ** p) ** (1.0 / p))
