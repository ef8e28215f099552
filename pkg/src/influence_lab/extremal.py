"""Extremal objects: the low-influence/far-from-junta tree family, the exact
junta-distance oracle, and the monotone corner-indicator family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, prod

import numpy as np

from .core import DecisionTree, Domain, Leaf, Node, Scalar, TabulatedFunction
from .errors import DomainError, ResourceError, max_table_entries


def gen_counterexample(r: int, k: int, n: int) -> DecisionTree:
    """Complete depth-k tree over {0..r-1}-valued coordinates, all internal
    labels distinct, assigned breadth-first starting at coordinate 0; the leaf
    reached through child a carries value floor(2a / r).

    The resulting function has total influence at most k yet stays at
    disagreement >= 1/4 from every function of at most r^(k-1)/2 coordinates.
    """
    if r < 2 or r % 2 != 0:
        raise DomainError(f"the construction needs an even arity r >= 2, got {r}")
    if k < 1:
        raise DomainError(f"depth k must be >= 1, got {k}")
    internal = (r**k - 1) // (r - 1)
    if n < internal:
        raise DomainError(
            f"need n >= {internal} distinct coordinates for depth {k} and arity {r}, got {n}"
        )

    def label(level: int, pos: int) -> int:
        return (r**level - 1) // (r - 1) + pos

    def build(level: int, pos: int) -> Node:
        children: list[Leaf | Node] = []
        for a in range(r):
            if level == k - 1:
                children.append(Leaf(float(2 * a // r)))
            else:
                children.append(build(level + 1, pos * r + a))
        return Node(label(level, pos), tuple(children))

    return DecisionTree(build(0, 0))


@dataclass(frozen=True)
class JuntaDistanceResult:
    """Best junta approximation: exact distance, its coordinate set, witness."""

    distance: Scalar
    witness_set: frozenset[int]
    witness: TabulatedFunction


def junta_distance(f: TabulatedFunction, m: int) -> JuntaDistanceResult:
    """Minimum disagreement with any function of at most m coordinates.

    Exhaustive over coordinate sets (size then lexicographic order); for each
    set the optimal witness takes the conditional majority vote, ties to 0.
    """
    if not f.is_boolean:
        raise DomainError("junta distance is defined for Boolean tables")
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    dom = f.domain
    n, size = dom.n, dom.size
    m = min(m, n)
    n_subsets = sum(comb(n, s) for s in range(m + 1))
    if n_subsets * size > max_table_entries():
        raise ResourceError(
            f"junta search over {n_subsets} subsets of a {size}-point table exceeds the cap"
        )
    pw = None if dom.is_uniform else dom.point_weights()
    digit_cache = [dom.digits(i) for i in range(n)]

    best: JuntaDistanceResult | None = None
    for s in range(m + 1):
        for J in combinations(range(n), s):
            groups = prod(dom.arities[j] for j in J) if J else 1
            proj = np.zeros(size, dtype=np.int64)
            stride = 1
            for j in reversed(J):
                proj += digit_cache[j] * stride
                stride *= dom.arities[j]
            if dom.is_uniform:
                ones = np.bincount(proj, weights=f.values, minlength=groups)
                ones = np.rint(ones).astype(np.int64)
                per_group = size // groups
                err = int(np.minimum(ones, per_group - ones).sum())
                dist: Scalar = Fraction(err, size)
                g_vals = (ones > per_group - ones).astype(np.float64)
            else:
                w1 = np.bincount(proj, weights=pw * f.values, minlength=groups)
                wt = np.bincount(proj, weights=pw, minlength=groups)
                dist = float(np.minimum(w1, wt - w1).sum())
                g_vals = (w1 > wt - w1).astype(np.float64)
            if best is None or dist < best.distance:
                witness = TabulatedFunction(dom, g_vals[proj])
                best = JuntaDistanceResult(dist, frozenset(J), witness)
                if best.distance == 0:
                    return best
    assert best is not None
    return best


def gen_example1(r: int, n: int) -> TabulatedFunction:
    """Indicator of the complement of the corner box on uniform {0..r-1}^n.

    f(x) = 0 iff every coordinate is at most t-1, where t rounds
    (1 - 1/n) * r to the nearest integer, half up. Increasing by construction,
    with E[f] = 1 - (t/r)^n exactly.
    """
    if r < 2:
        raise DomainError(f"arity r must be >= 2, got {r}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    t = (2 * (n - 1) * r + n) // (2 * n)  # floor((1 - 1/n) r + 1/2), exactly
    dom = Domain((r,) * n)
    in_box = np.ones(dom.size, dtype=bool)
    for i in range(n):
        in_box &= dom.digits(i) <= t - 1
    return TabulatedFunction(dom, np.where(in_box, 0.0, 1.0))
