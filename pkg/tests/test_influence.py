"""Digital and variational influences against brute-force oracles."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from influence_lab import (
    Domain,
    InfluenceProfile,
    TabulatedFunction,
    influence,
    max_influence_coordinate,
    total_influence,
    total_variational_influence,
    variational_influence,
)
from influence_lab.corpus import dictator, random_function

from conftest import oracle_influence, oracle_variational


class TestDigitalInfluence:
    def test_dictator(self):
        f = dictator(4, 0)
        assert influence(f, 0) == 1
        assert all(influence(f, i) == 0 for i in range(1, 4))

    def test_threshold_line_full_influence(self, line10):
        # the fiber is the whole line and f is non-constant on it
        assert influence(line10, 0) == 1

    def test_majority_brute_force(self, maj3):
        for i in range(3):
            assert influence(maj3, i) == oracle_influence(maj3, i) == Fraction(1, 2)

    def test_or_of_and(self):
        dom = Domain((2, 2, 2))
        f = TabulatedFunction.from_callable(dom, lambda p: float(p[0] or (p[1] and p[2])))
        assert influence(f, 0) == oracle_influence(f, 0) == Fraction(3, 4)
        assert influence(f, 1) == oracle_influence(f, 1) == Fraction(1, 4)

    def test_random_tables_match_oracle(self):
        for seed in range(25):
            f = random_function(n=3, arities=(2, 3, 2), seed=seed, bias=0.4)
            for i in range(3):
                assert influence(f, i) == oracle_influence(f, i)

    def test_weighted_influence_weighs_other_coordinates(self):
        # f depends on x1 only when x2 = 0; coordinate-2 weight shifts I(1)
        dom = Domain((2, 2), ((0.5, 0.5), (0.9, 0.1)))
        f = TabulatedFunction.from_callable(dom, lambda p: float(p[0] and not p[1]))
        assert influence(f, 0) == pytest.approx(0.9)

    def test_real_valued_uniform_still_fraction(self):
        f = TabulatedFunction(Domain((2, 2)), [0.3, 0.3, 0.7, 0.9])
        assert influence(f, 0) == Fraction(1, 1)
        assert influence(f, 1) == Fraction(1, 2)


class TestVariationalInfluence:
    def test_threshold_line(self, line10):
        assert variational_influence(line10, 0) == Fraction(9, 100)

    def test_dictator(self):
        assert variational_influence(dictator(3, 0), 0) == Fraction(1, 4)

    def test_linear_example_brute_force(self):
        f = TabulatedFunction(Domain((2, 2)), [0, 1, 10, 11])  # 10*x1 + x2
        assert variational_influence(f, 0) == pytest.approx(25.0)
        assert variational_influence(f, 1) == pytest.approx(0.25)
        assert variational_influence(f, 0) == pytest.approx(float(oracle_variational(f, 0)))

    def test_random_boolean_matches_oracle_exactly(self):
        for seed in range(25):
            f = random_function(n=3, arities=(3, 2, 3), seed=seed, bias=0.5)
            for i in range(3):
                assert variational_influence(f, i) == oracle_variational(f, i)

    def test_random_real_matches_oracle(self):
        rng = np.random.default_rng(3)
        dom = Domain((3, 2, 2))
        f = TabulatedFunction(dom, rng.uniform(-1, 1, dom.size))
        for i in range(3):
            assert variational_influence(f, i) == pytest.approx(
                float(oracle_variational(f, i)), abs=1e-12
            )

    def test_weighted_variational(self):
        # single weighted coordinate: variance of a Bernoulli(0.3) fiber
        dom = Domain((2, 2), ((0.5, 0.5), (0.7, 0.3)))
        f = TabulatedFunction.from_callable(dom, lambda p: float(p[1]))
        assert variational_influence(f, 1) == pytest.approx(0.3 * 0.7)
        assert variational_influence(f, 0) == pytest.approx(0.0)


class TestTotalsAndSelector:
    def test_parity_totals(self, parity3):
        assert total_influence(parity3) == 3
        assert total_variational_influence(parity3) == Fraction(3, 4)

    def test_constant_totals(self):
        f = TabulatedFunction(Domain((2, 2)), [1, 1, 1, 1])
        assert total_influence(f) == 0
        assert total_variational_influence(f) == 0

    def test_majority_totals(self, maj3):
        assert total_influence(maj3) == Fraction(3, 2)
        assert total_variational_influence(maj3) == Fraction(3, 8)

    def test_max_coordinate_dictator(self):
        assert max_influence_coordinate(dictator(3, 1)) == (1, 1)

    def test_max_coordinate_constant_tie_break(self):
        f = TabulatedFunction(Domain((2, 2)), [0, 0, 0, 0])
        assert max_influence_coordinate(f) == (0, 0)

    def test_max_coordinate_or_of_and(self):
        dom = Domain((2, 2, 2))
        f = TabulatedFunction.from_callable(dom, lambda p: float(p[0] or (p[1] and p[2])))
        coord, val = max_influence_coordinate(f)
        assert coord == 0 and val == Fraction(3, 4)

    def test_profile_totals_are_sums(self):
        f = random_function(n=4, arities=3, seed=9)
        prof = InfluenceProfile.of(f)
        assert prof.total_digital == sum(prof.digital)
        assert prof.total_variational == sum(prof.variational)


class TestInvariants:
    @given(st.integers(min_value=0, max_value=2**12 - 1))
    @settings(max_examples=100, deadline=None)
    def test_boolean_quarter_bound_exact(self, bits):
        vals = [(bits >> k) & 1 for k in range(12)]
        f = TabulatedFunction(Domain((2, 3, 2)), vals)
        for i in range(3):
            assert 4 * variational_influence(f, i) <= influence(f, i)

    def test_variance_below_total_variational(self):
        # exact chain: Var = sum of nonempty component norms <= total variational
        from influence_lab import variance

        for seed in range(30):
            f = random_function(n=4, arities=(2, 3, 2, 3), seed=seed, bias=0.4)
            assert variance(f) <= total_variational_influence(f)

    def test_zero_influence_iff_independent(self):
        for seed in range(20):
            f = random_function(n=3, arities=(2, 2, 3), seed=seed, bias=0.3)
            for i in range(3):
                d, v = influence(f, i), variational_influence(f, i)
                assert (d == 0) == (v == 0)
                if d == 0:
                    r = f.domain.arities[i]
                    slices = [f.restrict({i: a}).values for a in range(r)]
                    assert all(np.array_equal(slices[0], s) for s in slices[1:])

    def test_digital_invariant_under_value_relabeling(self):
        relabel = {0.0: 3.0, 1.0: -2.0}  # an injection on the value set
        for seed in range(10):
            f = random_function(n=3, arities=(2, 3, 2), seed=seed)
            g = TabulatedFunction(f.domain, [relabel[v] for v in f.values])
            for i in range(3):
                assert influence(f, i) == influence(g, i)

    def test_variational_invariant_under_shift(self):
        for seed in range(10):
            f = random_function(n=2, arities=(3, 3), seed=seed)
            g = TabulatedFunction(f.domain, f.values + 17.0)
            for i in range(2):
                assert variational_influence(f, i) == pytest.approx(
                    float(variational_influence(g, i)), abs=1e-10
                )

    def test_bounded_range_bound(self):
        rng = np.random.default_rng(12)
        dom = Domain((3, 2, 2))
        f = TabulatedFunction(dom, rng.uniform(-2, 5, dom.size))
        span = float(f.values.max() - f.values.min())
        for i in range(3):
            assert float(variational_influence(f, i)) <= span * span / 4 * float(
                influence(f, i)
            ) + 1e-9
