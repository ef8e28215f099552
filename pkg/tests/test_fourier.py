"""Decomposition properties, Walsh spectra, noise operator, p-norms."""

import math
from itertools import combinations

import numpy as np
import pytest

from influence_lab import (
    Domain,
    DomainError,
    ResourceError,
    TabulatedFunction,
    efron_stein,
    noise_operator,
    p_norm,
    variance,
    variational_influence,
    walsh_spectrum,
)
from influence_lab.corpus import (
    dictator,
    majority3,
    parity,
    parity_signed,
    random_real_function,
    random_weights,
)

TOL = 1e-10


def _component_checks(f, dec):
    dom = f.domain
    shape = dom.arities
    # (i) the components sum back to f
    assert np.abs(dec.reconstruction() - f.values).max() <= TOL
    for S, comp in dec.components.items():
        arr = comp.values.reshape(shape)
        for i in range(dom.n):
            mono = np.moveaxis(arr, i, -1)
            if i not in S:
                # (ii) constant along coordinates outside S
                assert np.abs(mono - mono[..., :1]).max() <= TOL
            else:
                # (iii) zero partial integral along coordinates inside S
                assert np.abs(mono @ dom.weight_vector(i)).max() <= TOL
    # (iv) zero partial integral of F_S * F_T along any i in T \ S
    subsets = list(dec.components)
    for S, T in combinations(subsets, 2):
        for A, B in ((S, T), (T, S)):
            prod = dec.components[A].values.reshape(shape) * dec.components[B].values.reshape(shape)
            for i in B - A:
                assert np.abs(np.moveaxis(prod, i, -1) @ dom.weight_vector(i)).max() <= TOL
    # Parseval
    pw = dom.point_weights()
    assert abs(float(np.dot(pw, f.values**2)) - dec.norm_total()) <= TOL
    assert abs(float(variance(f)) - dec.variance_from_norms()) <= TOL
    for i in range(dom.n):
        assert abs(float(variational_influence(f, i)) - dec.coordinate_norm_sum(i)) <= TOL


class TestEfronStein:
    def test_constant(self):
        f = TabulatedFunction(Domain((2, 3)), [2.5] * 6)
        dec = efron_stein(f)
        assert np.allclose(dec.components[frozenset()].values, 2.5)
        for S, comp in dec.components.items():
            if S:
                assert np.abs(comp.values).max() <= TOL

    def test_dictator_on_square(self):
        f = TabulatedFunction(Domain((2, 2)), [0, 0, 1, 1])  # x1
        dec = efron_stein(f)
        assert np.allclose(dec.components[frozenset()].values, 0.5)
        x0 = dec.components[frozenset({0})].values
        assert np.allclose(x0, [-0.5, -0.5, 0.5, 0.5])
        assert np.abs(dec.components[frozenset({1})].values).max() <= TOL
        assert np.abs(dec.components[frozenset({0, 1})].values).max() <= TOL

    def test_majority_norms(self):
        dec = efron_stein(majority3())
        for i in range(3):
            assert dec.norms_sq[frozenset({i})] == pytest.approx(1 / 16, abs=TOL)
        assert dec.norms_sq[frozenset({0, 1, 2})] == pytest.approx(1 / 16, abs=TOL)
        for pair in combinations(range(3), 2):
            assert dec.norms_sq[frozenset(pair)] == pytest.approx(0, abs=TOL)

    def test_cap(self):
        f = TabulatedFunction(Domain((2,) * 13), np.zeros(2**13))
        with pytest.raises(ResourceError):
            efron_stein(f)

    @pytest.mark.parametrize("idx", range(12))
    def test_random_instances_uniform_and_weighted(self, idx):
        arities = [(2, 3), (3, 2, 2), (2, 2, 2, 3)][idx % 3]
        weights = random_weights(arities, seed=1000 + idx) if idx % 2 else None
        f = random_real_function(arities=arities, seed=idx)
        if weights:
            f = TabulatedFunction(Domain(tuple(arities), weights), f.values)
        _component_checks(f, efron_stein(f))

    def test_agrees_with_walsh_on_binary_cube(self):
        f = random_real_function(n=3, arities=2, seed=42)
        dec = efron_stein(f)
        spec = walsh_spectrum(f)
        dom = f.domain
        for S, comp in dec.components.items():
            char = np.ones(dom.size)
            for i in S:
                char *= 1.0 - 2.0 * dom.digits(i)
            assert np.abs(comp.values - spec.coefficient(S) * char).max() <= TOL


class TestWalshSpectrum:
    def test_parity_single_character(self):
        spec = walsh_spectrum(parity_signed(3))
        assert spec.coefficient([0, 1, 2]) == pytest.approx(1.0, abs=TOL)
        assert sum(abs(c) for c in spec.coeffs) == pytest.approx(1.0, abs=TOL)

    def test_majority_pattern(self):
        spec = walsh_spectrum(majority3())
        assert spec.coefficient([]) == pytest.approx(0.5, abs=TOL)
        for i in range(3):
            assert abs(spec.coefficient([i])) == pytest.approx(0.25, abs=TOL)
        for pair in combinations(range(3), 2):
            assert spec.coefficient(pair) == pytest.approx(0.0, abs=TOL)
        assert abs(spec.coefficient([0, 1, 2])) == pytest.approx(0.25, abs=TOL)

    def test_constant_one(self):
        f = TabulatedFunction(Domain((2, 2)), [1, 1, 1, 1])
        spec = walsh_spectrum(f)
        assert spec.coefficient([]) == pytest.approx(1.0, abs=TOL)
        assert np.abs(spec.coeffs[1:]).max() <= TOL

    def test_synthesis_round_trip(self):
        f = random_real_function(n=4, arities=2, seed=8)
        back = walsh_spectrum(f).synthesize()
        assert np.abs(back.values - f.values).max() <= 1e-9

    def test_rejects_non_binary(self):
        with pytest.raises(DomainError):
            walsh_spectrum(TabulatedFunction(Domain((3,)), [0, 1, 0]))
        with pytest.raises(DomainError):
            walsh_spectrum(TabulatedFunction(Domain((2,), ((0.3, 0.7),)), [0, 1]))


class TestNoiseOperator:
    def test_identity_at_one(self):
        spec = walsh_spectrum(majority3())
        assert np.array_equal(noise_operator(spec, 1.0).coeffs, spec.coeffs)

    def test_kills_everything_at_zero(self):
        spec = walsh_spectrum(majority3())
        noisy = noise_operator(spec, 0.0)
        assert noisy.coefficient([]) == spec.coefficient([])
        assert np.abs(noisy.coeffs[1:]).max() == 0

    def test_parity_top_scaling(self):
        spec = walsh_spectrum(parity_signed(2))
        noisy = noise_operator(spec, math.sqrt(3))
        assert noisy.coefficient([0, 1]) == pytest.approx(3.0, abs=1e-12)


class TestPNorm:
    def test_constant(self):
        f = TabulatedFunction(Domain((2, 2)), [-2.0] * 4)
        for p in (1, 2, 3.5):
            assert p_norm(f, p) == pytest.approx(2.0, abs=TOL)

    def test_signed_parity_all_p(self):
        f = parity_signed(3)
        for p in (1, 2, 4, 7):
            assert p_norm(f, p) == pytest.approx(1.0, abs=TOL)

    def test_dictator_two_norm(self):
        assert p_norm(dictator(1), 2.0) == pytest.approx(math.sqrt(0.5), abs=TOL)

    def test_rejects_p_below_one(self):
        with pytest.raises(DomainError):
            p_norm(parity(2), 0.5)
