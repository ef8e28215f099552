"""Finite product probability spaces, dense value tables, and decision trees.

Tables are indexed by mixed-radix rank with coordinate 0 most significant.
Under the uniform measure every probability in this module is an integer count
over a power of the domain size, so those quantities are returned as exact
`fractions.Fraction` values; general weights use float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as iter_product
from typing import Callable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import DomainError, ResourceError, StateError, max_table_entries

Scalar = Union[Fraction, float]

#: Comparison tolerance for float-valued tables outside the exact paths.
FLOAT_EQ_TOL = 1e-12

#: Per-coordinate weights must sum to 1 within this tolerance.
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Domain:
    """A product of finite ordered sets {0..r_i - 1} with positive atom weights.

    ``weights`` is None for the uniform measure (the exact fast path) or one
    probability vector per coordinate.
    """

    arities: tuple[int, ...]
    weights: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self) -> None:
        arities = tuple(int(r) for r in self.arities)
        if len(arities) < 1:
            raise DomainError("a domain needs at least one coordinate")
        if any(r < 2 for r in arities):
            raise DomainError(f"every arity must be >= 2, got {arities}")
        object.__setattr__(self, "arities", arities)
        if self.weights is not None:
            ws = tuple(tuple(float(p) for p in row) for row in self.weights)
            if len(ws) != len(arities):
                raise DomainError("need one weight vector per coordinate")
            for i, (r, row) in enumerate(zip(arities, ws)):
                if len(row) != r:
                    raise DomainError(f"coordinate {i}: {len(row)} weights for arity {r}")
                if any(p <= 0.0 for p in row):
                    raise DomainError(f"coordinate {i}: weights must be strictly positive")
                if abs(math.fsum(row) - 1.0) > WEIGHT_SUM_TOL:
                    raise DomainError(f"coordinate {i}: weights sum to {math.fsum(row)!r}, not 1")
            object.__setattr__(self, "weights", ws)

    @property
    def n(self) -> int:
        return len(self.arities)

    @cached_property
    def size(self) -> int:
        return math.prod(self.arities)

    @property
    def is_uniform(self) -> bool:
        return self.weights is None

    def stride(self, i: int) -> int:
        """Rank increment when coordinate i increases by 1."""
        return math.prod(self.arities[i + 1 :])

    def _check_coord(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise DomainError(f"coordinate {i} out of range for n={self.n}")

    def rank(self, point: Sequence[int]) -> int:
        """Mixed-radix rank of a point, coordinate 0 most significant."""
        if len(point) != self.n:
            raise DomainError(f"point has {len(point)} coordinates, expected {self.n}")
        idx = 0
        for x, r in zip(point, self.arities):
            if not 0 <= x < r:
                raise DomainError(f"coordinate value {x} out of range [0, {r})")
            idx = idx * r + x
        return idx

    def unrank(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise DomainError(f"rank {index} out of range [0, {self.size})")
        out = []
        for r in reversed(self.arities):
            index, x = divmod(index, r)
            out.append(x)
        return tuple(reversed(out))

    def points(self) -> Iterator[tuple[int, ...]]:
        """All points in rank order."""
        return iter_product(*(range(r) for r in self.arities))

    def digits(self, i: int) -> np.ndarray:
        """Coordinate-i value of every rank, as an int array of length size."""
        self._check_coord(i)
        inner = self.stride(i)
        return (np.arange(self.size) // inner) % self.arities[i]

    def weight_vector(self, i: int) -> np.ndarray:
        self._check_coord(i)
        if self.weights is None:
            r = self.arities[i]
            return np.full(r, 1.0 / r)
        return np.asarray(self.weights[i], dtype=np.float64)

    def point_weights(self) -> np.ndarray:
        """Product-measure weight of every rank (float64, length size)."""
        w = np.ones(1)
        for i in range(self.n):
            w = np.multiply.outer(w, self.weight_vector(i)).reshape(-1)
        return w

    def atom_probability(self, i: int, a: int) -> Scalar:
        self._check_coord(i)
        if not 0 <= a < self.arities[i]:
            raise DomainError(f"value {a} out of range for coordinate {i}")
        if self.weights is None:
            return Fraction(1, self.arities[i])
        return self.weights[i][a]

    def drop(self, coords: Sequence[int]) -> Domain:
        """Domain over the coordinates not in ``coords`` (original order kept)."""
        dropped = set(coords)
        keep = [i for i in range(self.n) if i not in dropped]
        if not keep:
            raise DomainError("cannot drop every coordinate")
        arities = tuple(self.arities[i] for i in keep)
        weights = None if self.weights is None else tuple(self.weights[i] for i in keep)
        return Domain(arities, weights)


@dataclass(frozen=True)
class TabulatedFunction:
    """A dense real-valued table over a Domain, in mixed-radix rank order."""

    domain: Domain
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if vals.size != self.domain.size:
            raise DomainError(
                f"table has {vals.size} values but the domain has {self.domain.size} points"
            )
        if vals.size > max_table_entries():
            raise ResourceError(
                f"table of {vals.size} entries exceeds the cap {max_table_entries()}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, domain: Domain, fn: Callable[[tuple[int, ...]], float]) -> TabulatedFunction:
        return cls(domain, np.array([fn(p) for p in domain.points()]))

    @classmethod
    def constant(cls, domain: Domain, c: float) -> TabulatedFunction:
        return cls(domain, np.full(domain.size, float(c)))

    @cached_property
    def is_boolean(self) -> bool:
        return bool(np.all((self.values == 0.0) | (self.values == 1.0)))

    @property
    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values[0]))

    def __call__(self, point: Sequence[int]) -> float:
        return float(self.values[self.domain.rank(point)])

    def restrict(self, assignment: Mapping[int, int]) -> TabulatedFunction:
        """Fix some coordinates; the result lives on the remaining ones.

        The remaining coordinates keep their relative order, so local index j
        of the result corresponds to the j-th unfixed original coordinate.
        """
        dom = self.domain
        if not assignment:
            return self
        for i, a in assignment.items():
            dom._check_coord(i)
            if not 0 <= a < dom.arities[i]:
                raise DomainError(f"value {a} out of range for coordinate {i}")
        remaining = [i for i in range(dom.n) if i not in assignment]
        if not remaining:
            raise DomainError("cannot restrict every coordinate; at least one must remain")
        sub = dom.drop(list(assignment))
        base = sum(a * dom.stride(i) for i, a in assignment.items())
        idx = np.full(sub.size, base, dtype=np.int64)
        for local, g in enumerate(remaining):
            idx += sub.digits(local) * dom.stride(g)
        return TabulatedFunction(sub, self.values[idx])


def expectation(f: TabulatedFunction) -> Scalar:
    """Product-measure mean; exact Fraction for Boolean tables under uniform."""
    if f.domain.is_uniform and f.is_boolean:
        return Fraction(int(f.values.sum()), f.domain.size)
    return float(np.dot(f.domain.point_weights(), f.values))


def variance(f: TabulatedFunction) -> Scalar:
    if f.domain.is_uniform and f.is_boolean:
        e = expectation(f)
        return e - e * e  # f^2 = f for Boolean tables
    w = f.domain.point_weights()
    m = float(np.dot(w, f.values))
    return max(float(np.dot(w, f.values * f.values)) - m * m, 0.0)


# ---------------------------------------------------------------------------
# Decision trees


@dataclass(frozen=True)
class Leaf:
    """A leaf; value None marks the raw (unlabeled) variant."""

    value: float | None = None


@dataclass(frozen=True)
class Node:
    """Internal node branching on ``coord`` with one child per atom value."""

    coord: int
    children: tuple[TreeNode, ...]


TreeNode = Union[Leaf, Node]


@dataclass(frozen=True)
class DecisionTree:
    """A decision tree over mixed-radix coordinates.

    Construction checks that no root-to-leaf path repeats a coordinate and
    that nodes sharing a label agree on their child count.
    """

    root: TreeNode

    def __post_init__(self) -> None:
        arity_of: dict[int, int] = {}

        def walk(node: TreeNode, seen: frozenset[int]) -> None:
            if isinstance(node, Leaf):
                return
            if node.coord < 0:
                raise DomainError(f"negative coordinate label {node.coord}")
            if node.coord in seen:
                raise DomainError(f"coordinate {node.coord} repeats on a root-to-leaf path")
            r = len(node.children)
            if r < 2:
                raise DomainError("internal nodes need at least two children")
            prev = arity_of.setdefault(node.coord, r)
            if prev != r:
                raise DomainError(
                    f"coordinate {node.coord} branches with both {prev} and {r} children"
                )
            for child in node.children:
                walk(child, seen | {node.coord})

        walk(self.root, frozenset())

    @cached_property
    def depth(self) -> int:
        def d(node: TreeNode) -> int:
            if isinstance(node, Leaf):
                return 0
            return 1 + max(d(c) for c in node.children)

        return d(self.root)

    @cached_property
    def is_raw(self) -> bool:
        def raw(node: TreeNode) -> bool:
            if isinstance(node, Leaf):
                return node.value is None
            return any(raw(c) for c in node.children)

        return raw(self.root)

    def coordinates(self) -> frozenset[int]:
        out: set[int] = set()

        def walk(node: TreeNode) -> None:
            if isinstance(node, Node):
                out.add(node.coord)
                for c in node.children:
                    walk(c)

        walk(self.root)
        return frozenset(out)


def eval_tree(tree: DecisionTree, point: Sequence[int]) -> float:
    """Follow the computing path of ``point`` and return the leaf value."""
    node = tree.root
    while isinstance(node, Node):
        if node.coord >= len(point):
            raise DomainError(f"tree tests coordinate {node.coord}, point has {len(point)}")
        a = point[node.coord]
        if not 0 <= a < len(node.children):
            raise DomainError(f"value {a} out of range at coordinate {node.coord}")
        node = node.children[a]
    if node.value is None:
        raise StateError("raw decision tree: reached an unlabeled leaf")
    return float(node.value)


def tree_to_table(tree: DecisionTree, domain: Domain) -> TabulatedFunction:
    """Tabulate the tree's function over an explicit domain (exact)."""
    out = np.empty(domain.size, dtype=np.float64)
    digit_cache: dict[int, np.ndarray] = {}

    def digits(i: int) -> np.ndarray:
        if i not in digit_cache:
            digit_cache[i] = domain.digits(i)
        return digit_cache[i]

    def fill(node: TreeNode, idx: np.ndarray) -> None:
        if isinstance(node, Leaf):
            if node.value is None:
                raise StateError("raw decision tree cannot be tabulated")
            out[idx] = float(node.value)
            return
        if node.coord >= domain.n:
            raise DomainError(f"tree coordinate {node.coord} outside domain with n={domain.n}")
        if len(node.children) != domain.arities[node.coord]:
            raise DomainError(
                f"coordinate {node.coord}: {len(node.children)} children vs arity "
                f"{domain.arities[node.coord]}"
            )
        d = digits(node.coord)[idx]
        for a, child in enumerate(node.children):
            fill(child, idx[d == a])

    fill(tree.root, np.arange(domain.size))
    return TabulatedFunction(domain, out)
