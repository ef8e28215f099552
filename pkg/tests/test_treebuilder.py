"""Greedy build, error accounting, and the node-accounting sums."""

from fractions import Fraction

import numpy as np
import pytest

from influence_lab import (
    DecisionTree,
    Domain,
    DomainError,
    Leaf,
    Node,
    TabulatedFunction,
    build_tree,
    gen_counterexample,
    node_accounting,
    total_influence,
    tree_error,
    tree_to_table,
)
from influence_lab.corpus import dictator, parity, random_function
from influence_lab.io import tree_to_dict
from influence_lab.treebuilder import BuildParams


def counterexample_table():
    return tree_to_table(gen_counterexample(4, 2, 5), Domain((4,) * 5))


class TestBuildParams:
    def test_validation(self):
        with pytest.raises(DomainError):
            BuildParams(epsilon=0.0)
        with pytest.raises(DomainError):
            BuildParams(epsilon=0.5, tau=0.0)
        with pytest.raises(DomainError):
            BuildParams(epsilon=0.5, depth_cap=0)
        with pytest.raises(DomainError):
            BuildParams(epsilon=0.5, stop_fraction=1.5)

    def test_stop_fraction_default(self):
        assert BuildParams(epsilon=0.3).resolved_stop_fraction() == pytest.approx(0.1)
        assert BuildParams(epsilon=0.3, stop_fraction=0.02).resolved_stop_fraction() == 0.02


class TestBuildTree:
    def test_dictator_depth_one_error_zero(self):
        for n in (1, 2, 4):
            tree, diag = build_tree(dictator(n), BuildParams(epsilon=0.25))
            assert diag.depth == 1
            assert diag.achieved_error == 0
            assert tree_error(dictator(n), tree) == 0

    def test_constant_depth_zero(self):
        f = TabulatedFunction(Domain((3, 3)), [1.0] * 9)
        tree, diag = build_tree(f, BuildParams(epsilon=0.25))
        assert diag.depth == 0
        assert diag.achieved_error == 0
        assert isinstance(tree.root, Leaf)

    def test_counterexample_meets_error_target(self):
        f = counterexample_table()
        tree, diag = build_tree(f, BuildParams(epsilon=0.25, tau=0.01, depth_cap=8))
        assert diag.achieved_error <= Fraction(1, 4)
        assert diag.depth <= 8
        assert diag.achieved_error == tree_error(f, tree)

    def test_rejects_non_boolean_and_weighted(self):
        with pytest.raises(DomainError):
            build_tree(TabulatedFunction(Domain((2,)), [0.0, 0.5]), BuildParams(epsilon=0.2))
        dom = Domain((2,), ((0.3, 0.7),))
        with pytest.raises(DomainError):
            build_tree(TabulatedFunction(dom, [0.0, 1.0]), BuildParams(epsilon=0.2))

    def test_half_expectation_rounds_to_zero(self):
        # depth cap 1 leaves parity frontier nodes with E exactly 1/2
        tree, diag = build_tree(parity(2), BuildParams(epsilon=0.9, depth_cap=1))
        assert diag.depth == 1
        assert diag.stop_reason == "depth-cap"
        assert isinstance(tree.root, Node)
        assert all(isinstance(c, Leaf) and c.value == 0.0 for c in tree.root.children)
        assert tree_error(parity(2), tree) == Fraction(1, 2)

    def test_stop_rule_labels_frontier_by_parent_expectation(self):
        # f = x1 or (x2 and x3 and x4): the stop rule fires with one
        # non-constant frontier leaf (the inner dictator), whose parent has
        # expectation 1/4, so the leaf rounds to 0 and the error is exactly
        # the mass of the x4-dictator region times 1/2.
        dom = Domain((2,) * 4)
        f = TabulatedFunction.from_callable(
            dom, lambda p: float(p[0] or (p[1] and p[2] and p[3]))
        )
        tree, diag = build_tree(f, BuildParams(epsilon=0.75, tau=0.01))
        assert diag.stop_reason == "stop-rule"
        assert diag.depth == 3
        assert diag.achieved_error == Fraction(1, 16)
        assert diag.achieved_error <= diag.error_bound
        t_off, _ = build_tree(f, BuildParams(epsilon=0.75, tau=0.01), settle_constant_leaves=False)
        assert np.array_equal(
            tree_to_table(tree, dom).values, tree_to_table(t_off, dom).values
        )

    def test_l2_budget_parameter(self):
        # a tiny budget pushes every frontier leaf-parent into L2
        f = counterexample_table()
        _, diag_default = build_tree(f, BuildParams(epsilon=0.25, tau=0.01))
        assert diag_default.l2_mass == 0
        params = BuildParams(epsilon=0.25, tau=0.01, total_influence_budget=1e-6)
        _, diag_small = build_tree(f, params)
        assert diag_small.budget == 1e-6
        assert diag_small.l2_mass > 0

    def test_deterministic_bit_identical(self):
        f = counterexample_table()
        params = BuildParams(epsilon=0.25, tau=0.01, depth_cap=8)
        t1, d1 = build_tree(f, params)
        t2, d2 = build_tree(f, params)
        assert tree_to_dict(t1) == tree_to_dict(t2)
        assert d1 == d2

    def test_settled_leaf_optimization_preserves_semantics(self):
        for seed in range(30):
            f = random_function(n=4, arities=(2, 3, 2, 2), seed=seed, bias=0.45)
            params = BuildParams(epsilon=0.3, tau=0.05)
            t_on, _ = build_tree(f, params, settle_constant_leaves=True)
            t_off, _ = build_tree(f, params, settle_constant_leaves=False)
            g_on = tree_to_table(t_on, f.domain)
            g_off = tree_to_table(t_off, f.domain)
            assert np.array_equal(g_on.values, g_off.values)

    def test_accounting_bounds_on_random_builds(self):
        for seed in range(30):
            f = random_function(n=4, arities=3, seed=seed, bias=0.5)
            _, diag = build_tree(f, BuildParams(epsilon=0.3))
            total = total_influence(f)
            assert diag.node_accounting_sum <= total
            assert diag.leaf_parent_sum <= total
            assert 0 <= diag.achieved_error <= 1
            assert diag.achieved_error <= diag.error_bound + 1e-9

    def test_error_bound_terms_reported(self):
        f = counterexample_table()
        _, diag = build_tree(f, BuildParams(epsilon=0.25, tau=0.01, depth_cap=8))
        assert diag.error_bound == diag.l1_mass + diag.l2_mass + diag.rounding_mass

    def test_depth_cap_respected(self):
        f = random_function(n=6, arities=2, seed=1, bias=0.5)
        _, diag = build_tree(f, BuildParams(epsilon=0.05, tau=1e-9, depth_cap=3))
        assert diag.depth == 3
        assert diag.stop_reason == "depth-cap"


class TestTreeError:
    def test_exact_tree_has_zero_error(self):
        tree = gen_counterexample(4, 2, 5)
        f = counterexample_table()
        assert tree_error(f, tree) == 0

    def test_constant_zero_vs_dictator(self):
        tree = DecisionTree(Leaf(0.0))
        assert tree_error(dictator(3), tree) == Fraction(1, 2)

    def test_majority_vs_depth_one(self, maj3):
        tree = DecisionTree(Node(0, (Leaf(0.0), Leaf(1.0))))
        assert tree_error(maj3, tree) == Fraction(1, 4)

    def test_rejects_non_boolean(self):
        tree = DecisionTree(Leaf(0.5))
        with pytest.raises(DomainError):
            tree_error(dictator(2), tree)


class TestNodeAccounting:
    def test_single_node_raw_tree_over_dictator(self):
        raw = DecisionTree(Node(0, (Leaf(None), Leaf(None))))
        internal, leaf_parent = node_accounting(dictator(2), raw)
        assert internal == 1
        assert leaf_parent == 1  # the root is also the only leaf-parent

    def test_depth_zero_tree(self):
        internal, leaf_parent = node_accounting(dictator(2), DecisionTree(Leaf(0.0)))
        assert internal == 0 and leaf_parent == 0

    def test_majority_build_below_total_influence(self, maj3):
        tree, _ = build_tree(maj3, BuildParams(epsilon=0.25))
        internal, leaf_parent = node_accounting(maj3, tree)
        assert internal <= Fraction(3, 2)
        assert leaf_parent <= Fraction(3, 2)

    def test_counterexample_equality_case(self):
        # the counterexample tree touches disjoint events exhaustively
        f = counterexample_table()
        internal, leaf_parent = node_accounting(f, gen_counterexample(4, 2, 5))
        assert internal == total_influence(f) == Fraction(15, 8)
        assert leaf_parent == 1
