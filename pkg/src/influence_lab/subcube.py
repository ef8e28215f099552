"""Monotonicity, top-restrictions, the greedy subcube procedure, and the
small-set restriction probes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, floor

import numpy as np

from .core import Scalar, TabulatedFunction, expectation
from .errors import DomainError, ResourceError, max_table_entries
from .influence import total_variational_influence, variational_influence


def is_increasing(f: TabulatedFunction) -> bool:
    """True iff f is nondecreasing in every coordinate (checked locally)."""
    arr = f.values.reshape(f.domain.arities)
    for i in range(f.domain.n):
        if np.any(np.diff(arr, axis=i) < 0):
            return False
    return True


def restrict_top(f: TabulatedFunction, J) -> TabulatedFunction:
    """Fix every coordinate in J to its maximal value, keeping the full domain.

    The result is constant along the fixed directions, so its plain
    expectation equals the conditional expectation given the top assignment.
    """
    J = sorted(set(J))
    if not J:
        return f
    dom = f.domain
    idx = np.arange(dom.size, dtype=np.int64)
    for j in J:
        dom._check_coord(j)
        r = dom.arities[j]
        stride = dom.stride(j)
        idx += (r - 1 - (idx // stride) % r) * stride
    return TabulatedFunction(dom, f.values[idx])


@dataclass(frozen=True)
class GreedyStep:
    coordinate: int
    variational_at_selection: Scalar
    expectation_before: Scalar
    expectation_after: Scalar


@dataclass(frozen=True)
class GreedyTrace:
    """Full record of a greedy run: steps, final set, and why it stopped."""

    steps: tuple[GreedyStep, ...]
    fixed: frozenset[int]
    final_expectation: Scalar
    reason: str


REASON_VARIATIONAL = "total-variational-at-most-budget"
REASON_EXPECTATION = "expectation-threshold"
REASON_EXHAUSTED = "coordinates-exhausted"


def greedy_subcube(f: TabulatedFunction, B: float, epsilon: float) -> GreedyTrace:
    """Repeatedly fix the unfixed coordinate of largest variational influence
    to its top value, while the total variational influence stays at least B
    and the conditional expectation stays below 1 - epsilon.

    For increasing Boolean f each step raises the expectation by at least the
    selected coordinate's variational influence.
    """
    if B <= 0:
        raise DomainError(f"the budget B must be positive, got {B}")
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must be in (0, 1), got {epsilon}")
    if not f.is_boolean:
        raise DomainError("the greedy subcube procedure applies to Boolean tables")
    if not is_increasing(f):
        raise DomainError("the greedy subcube procedure needs an increasing function")

    n = f.domain.n
    fixed: list[int] = []
    current = f
    steps: list[GreedyStep] = []
    while True:
        total = total_variational_influence(current)
        if total < B:
            reason = REASON_VARIATIONAL
            break
        e_before = expectation(current)
        if e_before >= 1 - epsilon:
            reason = REASON_EXPECTATION
            break
        if len(fixed) == n:
            reason = REASON_EXHAUSTED
            break
        candidates = [j for j in range(n) if j not in fixed]
        best = candidates[0]
        best_v = variational_influence(current, best)
        for j in candidates[1:]:
            v = variational_influence(current, j)
            if v > best_v:
                best, best_v = j, v
        fixed.append(best)
        current = restrict_top(f, fixed)
        steps.append(GreedyStep(best, best_v, e_before, expectation(current)))
    return GreedyTrace(tuple(steps), frozenset(fixed), expectation(current), reason)


def _subsets_capped(n: int, k: int, size: int) -> None:
    n_subsets = sum(comb(n, s) for s in range(min(k, n) + 1))
    if n_subsets * size > max_table_entries():
        raise ResourceError(
            f"restriction search over {n_subsets} subsets of a {size}-point table exceeds the cap"
        )


def _conditional_means(f: TabulatedFunction, J: tuple[int, ...]):
    """Group means of f over the assignment classes of J, plus the class index
    of every point. Exact Fractions under the uniform measure."""
    dom = f.domain
    groups = 1
    proj = np.zeros(dom.size, dtype=np.int64)
    for j in J:
        proj = proj * dom.arities[j] + dom.digits(j)
        groups *= dom.arities[j]
    if dom.is_uniform:
        sums = np.rint(np.bincount(proj, weights=f.values, minlength=groups)).astype(np.int64)
        per = dom.size // groups
        means = [Fraction(int(s), per) for s in sums]
    else:
        pw = dom.point_weights()
        wsum = np.bincount(proj, weights=pw * f.values, minlength=groups)
        wtot = np.bincount(proj, weights=pw, minlength=groups)
        means = [float(a / b) for a, b in zip(wsum, wtot)]
    return means, proj, groups


def restriction_search(f: TabulatedFunction, B: float):
    """Exhaustively maximize |E[f | J = a] - E[f]| over |J| <= floor(10 B).

    Returns (J, assignment, deviation) with the first maximizer in
    (size, lexicographic) order, and the informational threshold 3^(-500 B^2)
    is left to the caller for recording.
    """
    if B <= 0:
        raise DomainError(f"the budget B must be positive, got {B}")
    k = floor(10 * B)
    if k > f.domain.n:
        k = f.domain.n
    _subsets_capped(f.domain.n, k, f.domain.size)
    e0 = expectation(f)
    best_dev: Scalar = 0 if f.domain.is_uniform else 0.0
    best_J: tuple[int, ...] = ()
    best_assignment: dict[int, int] = {}
    for s in range(k + 1):
        for J in combinations(range(f.domain.n), s):
            if not J:
                continue
            means, _, _ = _conditional_means(f, J)
            for g_idx, mean in enumerate(means):
                dev = abs(mean - e0)
                if dev > best_dev:
                    assignment = {}
                    rem = g_idx
                    for j in reversed(J):
                        rem, a = divmod(rem, f.domain.arities[j])
                        assignment[j] = a
                    best_dev = dev
                    best_J = J
                    best_assignment = dict(sorted(assignment.items()))
    return best_J, best_assignment, best_dev


def bourgain_probe(f: TabulatedFunction, B: float) -> Scalar:
    """E over x of the largest |E[f | x's values on J] - E[f]| over |J| <= floor(10 B).

    Exact enumeration; under the uniform measure the result is an exact
    rational.
    """
    if B <= 0:
        raise DomainError(f"the budget B must be positive, got {B}")
    k = floor(10 * B)
    if k > f.domain.n:
        k = f.domain.n
    _subsets_capped(f.domain.n, k, f.domain.size)
    e0 = expectation(f)
    size = f.domain.size
    best = [abs(Fraction(0)) if f.domain.is_uniform else 0.0] * size
    for s in range(1, k + 1):
        for J in combinations(range(f.domain.n), s):
            means, proj, _ = _conditional_means(f, J)
            for x in range(size):
                dev = abs(means[proj[x]] - e0)
                if dev > best[x]:
                    best[x] = dev
    total = sum(best)
    if f.domain.is_uniform:
        return total / size
    return float(np.dot(f.domain.point_weights(), np.array([float(b) for b in best])))
