"""Greedy decision-tree approximation of Boolean tables under uniform measure.

Each round branches every active leaf on the maximum-influence coordinate of
its restricted function. Leaves whose restriction is constant are settled
immediately and keep their constant value. After a round the build stops when
the mass of just-branched nodes whose chosen coordinate has influence at
least tau drops to the stop fraction (settled leaves count as below-threshold
leaf-parents, so the total reference mass is 1), when nothing is left to
branch, or at the depth cap. Non-constant frontier leaves are labeled by
rounding the expectation of their parent's restriction, with ties to 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .core import (
    DecisionTree,
    Leaf,
    Node,
    Scalar,
    TabulatedFunction,
    expectation,
    tree_to_table,
)
from .errors import DomainError
from .influence import influence, max_influence_coordinate, total_influence

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class BuildParams:
    """Knobs of the greedy build.

    tau and depth_cap stand in for the theoretical thresholds, whose exact
    values involve an unknown universal constant. stop_fraction defaults to
    epsilon / 3. total_influence_budget is only used to classify heavy
    leaf-parents in the diagnostics; it defaults to the exact total influence
    of the input.
    """

    epsilon: float
    tau: float = 1e-3
    depth_cap: int = 12
    stop_fraction: float | None = None
    total_influence_budget: float | None = None

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise DomainError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.tau <= 0:
            raise DomainError(f"tau must be positive, got {self.tau}")
        if self.depth_cap < 1:
            raise DomainError(f"depth_cap must be >= 1, got {self.depth_cap}")
        if self.stop_fraction is not None and not 0 <= self.stop_fraction <= 1:
            raise DomainError("stop_fraction must lie in [0, 1]")
        if self.total_influence_budget is not None and self.total_influence_budget <= 0:
            raise DomainError("total_influence_budget must be positive")

    def resolved_stop_fraction(self) -> float:
        return self.epsilon / 3 if self.stop_fraction is None else self.stop_fraction


@dataclass(frozen=True)
class BuildDiagnostics:
    """Exact accounting of one build."""

    depth: int
    stop_reason: str
    achieved_error: Scalar
    l1_mass: Scalar
    l2_mass: Scalar
    rounding_mass: Scalar
    error_bound: Scalar
    node_accounting_sum: Scalar
    leaf_parent_sum: Scalar
    budget: Scalar


class _Pending:
    """An unsettled leaf: where it hangs, its restriction, and bookkeeping."""

    __slots__ = ("container", "slot", "f_v", "remaining", "mu", "parent_label")

    def __init__(self, container, slot, f_v, remaining, mu, parent_label):
        self.container = container
        self.slot = slot
        self.f_v = f_v
        self.remaining = remaining
        self.mu = mu
        self.parent_label = parent_label


def _freeze(node: dict[str, Any]):
    if "leaf" in node:
        return Leaf(node["leaf"])
    return Node(node["coord"], tuple(_freeze(c) for c in node["children"]))


def build_tree(
    f: TabulatedFunction,
    params: BuildParams,
    settle_constant_leaves: bool = True,
) -> tuple[DecisionTree, BuildDiagnostics]:
    """Run the greedy construction and return the tree with its diagnostics."""
    if not f.is_boolean:
        raise DomainError("the greedy build applies to Boolean tables")
    if not f.domain.is_uniform:
        raise DomainError("the greedy build applies to the uniform measure")

    stop_fraction = params.resolved_stop_fraction()
    holder: list[Any] = [None]
    depth = 0
    reason = "settled"
    heavy = Fraction(0)
    last_round: list[tuple[TabulatedFunction, Fraction, Scalar]] = []

    if f.is_constant:
        holder[0] = {"leaf": float(f.values[0])}
        frontier: list[_Pending] = []
    else:
        frontier = [_Pending(holder, 0, f, tuple(range(f.domain.n)), Fraction(1), None)]
        while True:
            heavy = Fraction(0)
            new_frontier: list[_Pending] = []
            last_round = []
            for w in frontier:
                local_i, ival = max_influence_coordinate(w.f_v)
                g = w.remaining[local_i]
                r = w.f_v.domain.arities[local_i]
                if ival >= params.tau:
                    heavy += w.mu
                last_round.append((w.f_v, w.mu, ival))
                label = 0.0 if expectation(w.f_v) <= _HALF else 1.0
                children: list[dict[str, Any]] = []
                w.container[w.slot] = {"coord": g, "children": children}
                child_mu = w.mu / r
                child_remaining = tuple(c for c in w.remaining if c != g)
                for a in range(r):
                    if len(w.remaining) == 1:
                        children.append({"leaf": float(w.f_v.values[a])})
                        continue
                    f_c = w.f_v.restrict({local_i: a})
                    if settle_constant_leaves and f_c.is_constant:
                        children.append({"leaf": float(f_c.values[0])})
                        continue
                    children.append({"leaf": None})
                    new_frontier.append(
                        _Pending(children, a, f_c, child_remaining, child_mu, label)
                    )
            depth += 1
            if heavy <= stop_fraction:
                reason = "stop-rule"
                frontier = new_frontier
                break
            if not new_frontier:
                reason = "settled"
                frontier = []
                break
            if depth >= params.depth_cap:
                reason = "depth-cap"
                frontier = new_frontier
                break
            frontier = new_frontier

        for w in frontier:
            if w.f_v.is_constant:
                w.container[w.slot] = {"leaf": float(w.f_v.values[0])}
            else:
                w.container[w.slot] = {"leaf": w.parent_label}

    tree = DecisionTree(_freeze(holder[0]))

    budget = (
        params.total_influence_budget
        if params.total_influence_budget is not None
        else total_influence(f)
    )
    l2_threshold = 3 * budget / params.epsilon
    l1 = Fraction(0)
    l2 = Fraction(0)
    rounding = Fraction(0)
    for f_v, mu, ival in last_round:
        in_l1 = ival >= params.tau
        in_l2 = total_influence(f_v) >= l2_threshold
        if in_l1:
            l1 += mu
        if in_l2:
            l2 += mu
        if not in_l1 and not in_l2:
            e = expectation(f_v)
            rounding += mu * min(e, 1 - e)

    err = tree_error(f, tree)
    internal_sum, leaf_parent_sum = node_accounting(f, tree)
    return tree, BuildDiagnostics(
        depth=depth,
        stop_reason=reason,
        achieved_error=err,
        l1_mass=l1,
        l2_mass=l2,
        rounding_mass=rounding,
        error_bound=l1 + l2 + rounding,
        node_accounting_sum=internal_sum,
        leaf_parent_sum=leaf_parent_sum,
        budget=budget,
    )


def tree_error(f: TabulatedFunction, tree: DecisionTree) -> Scalar:
    """Exact disagreement probability between f and the tree's function."""
    g = tree_to_table(tree, f.domain)
    if not f.is_boolean or not g.is_boolean:
        raise DomainError("tree error is defined for Boolean tables")
    neq = f.values != g.values
    if f.domain.is_uniform:
        return Fraction(int(neq.sum()), f.domain.size)
    return float(neq @ f.domain.point_weights())


def node_accounting(f: TabulatedFunction, tree: DecisionTree) -> tuple[Scalar, Scalar]:
    """Mass-weighted influence sums over a (possibly raw) tree.

    Returns (sum over internal nodes v of mu(v) * I_{f_v}(i_v),
             sum over leaf-parents v of mu(v) * I_{f_v}).
    Both are at most the total influence of f: contributions of the same
    coordinate at incomparable nodes are disjoint events.
    """
    totals = [Fraction(0), Fraction(0)]

    def walk(node, assignment: dict[int, int], mu) -> None:
        if isinstance(node, Leaf):
            return
        f_v = f.restrict(assignment) if assignment else f
        local = node.coord - sum(1 for c in assignment if c < node.coord)
        totals[0] += mu * influence(f_v, local)
        if all(isinstance(c, Leaf) for c in node.children):
            totals[1] += mu * total_influence(f_v)
        for a, child in enumerate(node.children):
            walk(child, {**assignment, node.coord: a}, mu * f.domain.atom_probability(node.coord, a))

    walk(tree.root, {}, Fraction(1))
    return totals[0], totals[1]
