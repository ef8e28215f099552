"""Seeded random generators and small named fixtures.

All randomness flows through numpy's default_rng (PCG64), so a given seed
reproduces the same object bit for bit within this implementation.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import DecisionTree, Domain, Leaf, Node, TabulatedFunction
from .errors import DomainError


def _domain_from(n: int | None, arities) -> Domain:
    if isinstance(arities, (int, np.integer)):
        if n is None:
            raise DomainError("n is required when a single arity is given")
        return Domain((int(arities),) * n)
    arities = tuple(int(r) for r in arities)
    if n is not None and n != len(arities):
        raise DomainError(f"n={n} disagrees with {len(arities)} arities")
    return Domain(arities)


def random_function(
    n: int | None = None,
    arities: int | Sequence[int] = 2,
    seed: int = 0,
    bias: float = 0.5,
) -> TabulatedFunction:
    """Boolean table with independent Bernoulli(bias) entries."""
    if not 0 <= bias <= 1:
        raise DomainError(f"bias must lie in [0, 1], got {bias}")
    dom = _domain_from(n, arities)
    rng = np.random.default_rng(seed)
    return TabulatedFunction(dom, (rng.random(dom.size) < bias).astype(np.float64))


def random_real_function(
    n: int | None = None,
    arities: int | Sequence[int] = 2,
    seed: int = 0,
    low: float = -1.0,
    high: float = 1.0,
) -> TabulatedFunction:
    dom = _domain_from(n, arities)
    rng = np.random.default_rng(seed)
    return TabulatedFunction(dom, rng.uniform(low, high, dom.size))


def random_weights(arities: Sequence[int], seed: int) -> tuple[tuple[float, ...], ...]:
    """Strictly positive normalized weight rows, bounded away from zero."""
    rng = np.random.default_rng(seed)
    rows = []
    for r in arities:
        w = rng.uniform(0.2, 1.0, r)
        rows.append(tuple(float(x) for x in w / w.sum()))
    return tuple(rows)


def random_tree(domain: Domain, max_depth: int, seed: int, branch_prob: float = 0.75) -> DecisionTree:
    """Random labeled tree over the domain: no repeated coordinate on a path,
    depth at most max_depth, Boolean leaf values."""
    rng = np.random.default_rng(seed)

    def grow(depth: int, remaining: tuple[int, ...]):
        if depth >= max_depth or not remaining or rng.random() >= branch_prob:
            return Leaf(float(rng.integers(0, 2)))
        coord = int(remaining[rng.integers(0, len(remaining))])
        rest = tuple(c for c in remaining if c != coord)
        children = tuple(grow(depth + 1, rest) for _ in range(domain.arities[coord]))
        return Node(coord, children)

    root = grow(0, tuple(range(domain.n)))
    if isinstance(root, Leaf):  # keep at least one test so the tree is non-trivial
        coord = int(rng.integers(0, domain.n))
        root = Node(
            coord,
            tuple(Leaf(float(rng.integers(0, 2))) for _ in range(domain.arities[coord])),
        )
    return DecisionTree(root)


def random_increasing_function(
    arities: Sequence[int] | int, seed: int, density: float = 0.2, n: int | None = None
) -> TabulatedFunction:
    """Indicator of the upward closure of a random seed set (always increasing)."""
    dom = _domain_from(n, arities)
    rng = np.random.default_rng(seed)
    vals = (rng.random(dom.size) < density).reshape(dom.arities)
    for axis in range(dom.n):
        vals = np.maximum.accumulate(vals, axis=axis)
    return TabulatedFunction(dom, vals.reshape(-1).astype(np.float64))


# ---------------------------------------------------------------------------
# Named fixtures


def dictator(n: int, i: int = 0) -> TabulatedFunction:
    """f(x) = x_i on the uniform binary cube."""
    dom = Domain((2,) * n)
    return TabulatedFunction(dom, dom.digits(i).astype(np.float64))


def majority3() -> TabulatedFunction:
    dom = Domain((2, 2, 2))
    total = dom.digits(0) + dom.digits(1) + dom.digits(2)
    return TabulatedFunction(dom, (total >= 2).astype(np.float64))


def parity(n: int) -> TabulatedFunction:
    """0/1-valued parity on the uniform binary cube."""
    dom = Domain((2,) * n)
    total = sum(dom.digits(i) for i in range(n))
    return TabulatedFunction(dom, (total % 2).astype(np.float64))


def parity_signed(n: int) -> TabulatedFunction:
    """The plus/minus-1 character of the full coordinate set."""
    dom = Domain((2,) * n)
    total = sum(dom.digits(i) for i in range(n))
    return TabulatedFunction(dom, np.where(total % 2 == 0, 1.0, -1.0))


def threshold_line(r: int, cut: int) -> TabulatedFunction:
    """f(x) = [x >= cut] on the uniform single line {0..r-1}."""
    dom = Domain((r,))
    return TabulatedFunction(dom, (np.arange(r) >= cut).astype(np.float64))
