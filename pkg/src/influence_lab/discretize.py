"""Grid coarsening of Boolean tables with exact certificates.

A fine table on uniform {0..M-1}^n is coarsened to m cells per axis
(t = M/m fine points each). Cells whose conditional expectation is within
delta of 1 (resp. 0) are marked 1 (resp. 0), and the mark propagates along
coordinate i to the whole cell fiber whenever the constant-fiber event A_i
fills at least a (1-delta) fraction of the source cell. Marks can never
collide when the preconditions hold; a collision raises immediately. The
remaining cells round their conditional expectation, ties to 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .core import Domain, Scalar, TabulatedFunction
from .errors import DomainError, StateError
from .inequalities import InequalityReport, _report
from .influence import influence

_DELTA_MAX = Fraction(1, 10)


@dataclass(frozen=True)
class DiscretizationReport:
    """Per-run statistics; every probability is exact."""

    delta: Scalar
    m: int
    t: int
    f_determined_fraction: Scalar
    a_determined_fractions: tuple[Scalar, ...]
    disagreement: Scalar
    influence_pairs: tuple[tuple[Scalar, Scalar], ...]


def _check_fine(f: TabulatedFunction) -> int:
    if not f.is_boolean:
        raise DomainError("discretization applies to Boolean tables")
    if not f.domain.is_uniform:
        raise DomainError("discretization applies to the uniform measure")
    arities = set(f.domain.arities)
    if len(arities) != 1:
        raise DomainError("the fine grid must have the same arity on every axis")
    return arities.pop()


def _constant_fiber_event(f: TabulatedFunction, i: int) -> np.ndarray:
    """Per-point 0/1 indicator that f is constant on the coordinate-i fiber."""
    dom = f.domain
    r = dom.arities[i]
    inner = dom.stride(i)
    outer = dom.size // (r * inner)
    mask = K.nonconstant_mask(f.values, outer, r, inner, 0.0)
    ranks = np.arange(dom.size)
    fiber_idx = (ranks // (r * inner)) * inner + ranks % inner
    return 1 - mask[fiber_idx].astype(np.int64)


def discretize(
    f_fine: TabulatedFunction, m: int, delta: Scalar
) -> tuple[TabulatedFunction, DiscretizationReport]:
    M = _check_fine(f_fine)
    if m < 2:
        raise DomainError(f"need at least 2 cells per axis, got {m}")
    if M % m != 0:
        raise DomainError(f"fine arity {M} is not divisible by the cell count {m}")
    if not 0 < delta < _DELTA_MAX:
        raise DomainError(f"delta must lie strictly between 0 and 1/10, got {delta}")
    t = M // m
    dom = f_fine.domain
    n = dom.n
    n_cells = m**n
    cell_size = t**n

    cell_of_point = np.zeros(dom.size, dtype=np.int64)
    stride = n_cells
    for i in range(n):
        stride //= m
        cell_of_point += (dom.digits(i) // t) * stride

    ones = np.rint(
        np.bincount(cell_of_point, weights=f_fine.values, minlength=n_cells)
    ).astype(np.int64)
    a_counts = [
        np.bincount(cell_of_point, weights=_constant_fiber_event(f_fine, i), minlength=n_cells)
        .astype(np.int64)
        for i in range(n)
    ]

    exp_in = [Fraction(int(c), cell_size) for c in ones]
    pr_a = [[Fraction(int(ac[c]), cell_size) for c in range(n_cells)] for ac in a_counts]
    hi = 1 - delta

    one_mark = np.zeros(n_cells, dtype=bool)
    zero_mark = np.zeros(n_cells, dtype=bool)

    def cell_fiber(c: int, i: int) -> range:
        ci = m ** (n - 1 - i)
        base = c - ((c // ci) % m) * ci
        return range(base, base + m * ci, ci)

    for c in range(n_cells):  # row-major; order cannot matter, marks only accumulate
        if exp_in[c] >= hi:
            one_mark[c] = True
            for i in range(n):
                if pr_a[i][c] >= hi:
                    for c2 in cell_fiber(c, i):
                        one_mark[c2] = True
        if 1 - exp_in[c] >= hi:
            zero_mark[c] = True
            for i in range(n):
                if pr_a[i][c] >= hi:
                    for c2 in cell_fiber(c, i):
                        zero_mark[c2] = True

    if bool(np.any(one_mark & zero_mark)):
        raise StateError("discretization produced a cell marked both 0 and 1")

    h_vals = np.empty(n_cells, dtype=np.float64)
    for c in range(n_cells):
        if one_mark[c]:
            h_vals[c] = 1.0
        elif zero_mark[c]:
            h_vals[c] = 0.0
        else:
            h_vals[c] = 1.0 if exp_in[c] > Fraction(1, 2) else 0.0
    h = TabulatedFunction(Domain((m,) * n), h_vals)

    f_det = sum(1 for e in exp_in if e >= hi or e <= delta)
    a_det = tuple(
        Fraction(sum(1 for c in range(n_cells) if pa[c] >= hi or pa[c] <= delta), n_cells)
        for pa in pr_a
    )
    disagreement = Fraction(int((f_fine.values != h_vals[cell_of_point]).sum()), dom.size)
    pairs = tuple(
        (influence(h, i), 2 * delta + influence(f_fine, i) / hi) for i in range(n)
    )
    report = DiscretizationReport(
        delta=delta,
        m=m,
        t=t,
        f_determined_fraction=Fraction(f_det, n_cells),
        a_determined_fractions=a_det,
        disagreement=disagreement,
        influence_pairs=pairs,
    )
    return h, report


def check_certificates(
    f_fine: TabulatedFunction, h: TabulatedFunction, delta: Scalar
) -> tuple[tuple[InequalityReport, ...], InequalityReport]:
    """Verify the coarse influence bounds and the disagreement bound.

    Returns one report per coordinate for I_h(i) <= 2 delta + I_f(i)/(1-delta)
    and a single report for Pr[f != h] <= 2 delta, all in exact arithmetic.
    """
    M = _check_fine(f_fine)
    if not h.is_boolean or not h.domain.is_uniform:
        raise DomainError("the coarse table must be Boolean under uniform measure")
    if h.domain.n != f_fine.domain.n:
        raise DomainError("fine and coarse tables must share the coordinate count")
    coarse = set(h.domain.arities)
    if len(coarse) != 1:
        raise DomainError("the coarse grid must have the same arity on every axis")
    m = coarse.pop()
    if M % m != 0:
        raise DomainError(f"fine arity {M} is not divisible by the coarse arity {m}")
    t = M // m
    dom = f_fine.domain
    n = dom.n

    cell_of_point = np.zeros(dom.size, dtype=np.int64)
    stride = m**n
    for i in range(n):
        stride //= m
        cell_of_point += (dom.digits(i) // t) * stride
    lifted = h.values[cell_of_point]
    disagreement = Fraction(int((f_fine.values != lifted).sum()), dom.size)

    influence_reports = tuple(
        _report(
            f"discretization-influence[{i + 1}]",
            influence(h, i),
            2 * delta + influence(f_fine, i) / (1 - delta),
            coordinate=i + 1,
            delta=float(delta),
        )
        for i in range(n)
    )
    disagreement_report = _report(
        "discretization-disagreement", disagreement, 2 * delta, delta=float(delta)
    )
    return influence_reports, disagreement_report
