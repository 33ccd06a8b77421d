"""
Tests for the Hermitian-function and truncated [Z, P] checks
"""
import math

import numpy as np
import pytest

from hvaudit import commutator_lab as lab
from hvaudit.commutator_lab import HermitianMatrix, ScalarFunction

PAULI_X = np.array([[0, 1], [1, 0]])
PAULI_Z = np.array([[1, 0], [0, -1]])


class TestHermitianMatrix:

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match='matrix not Hermitian'):
            HermitianMatrix(np.array([[0, 1], [0, 0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            HermitianMatrix(np.zeros((2, 3)))

    def test_read_only(self):
        m = HermitianMatrix(PAULI_Z)
        with pytest.raises(ValueError):
            m.entries[0, 0] = 5


class TestApplyFunction:

    def test_identity(self, rng):
        s = lab.random_hermitian(6, rng)
        result = lab.apply_function(s, ScalarFunction.named('identity'))
        assert np.max(np.abs(result.entries - s.entries)) <= 1e-10 * s.dim

    def test_sqrt_of_diagonal(self):
        result = lab.apply_function(np.diag([1.0, 4.0, 9.0]), ScalarFunction.named('sqrt'))
        assert np.allclose(result.entries, np.diag([1.0, 2.0, 3.0]), atol=1e-10)

    def test_square_matches_product(self, rng):
        s = lab.random_hermitian(8, rng)
        result = lab.apply_function(s, ScalarFunction.named('square'))
        assert np.max(np.abs(result.entries - s.entries @ s.entries)) <= 1e-10

    def test_polynomial(self):
        f = ScalarFunction.polynomial([1, 0, 2])
        result = lab.apply_function(np.diag([1.0, 2.0]), f)
        assert np.allclose(result.entries, np.diag([3.0, 9.0]))

    def test_undefined_on_spectrum(self):
        with pytest.raises(ValueError):
            lab.apply_function(np.diag([-1.0, 1.0]), ScalarFunction('log', np.log))

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            ScalarFunction.named('gamma')


class TestCommutator:

    def test_self_commutes(self, rng):
        s = lab.random_hermitian(5, rng)
        assert np.allclose(lab.commutator(s, s), 0)

    def test_pauli(self):
        assert np.array_equal(lab.commutator(PAULI_X, PAULI_Z), np.array([[0, -2], [2, 0]]))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match='dimension mismatch'):
            lab.commutator(np.eye(2), np.eye(3))


class TestLemma:

    def test_random_matrix(self, rng):
        s = lab.random_hermitian(16, rng)
        square, cube = ScalarFunction.named('square'), ScalarFunction.named('cube')
        assert lab.lemma_check(s, square, cube) <= lab.lemma_bound(s, square, cube)

    def test_identity_matrix(self):
        s = HermitianMatrix(np.eye(4))
        assert lab.lemma_check(s, ScalarFunction.named('exp'), ScalarFunction.named('sin')) <= 1e-12

    def test_diagonal_distinct_eigenvalues(self):
        s = HermitianMatrix(np.diag([-1.0, 0.0, 0.5, 2.0]))
        exp, sin = ScalarFunction.named('exp'), ScalarFunction.named('sin')
        assert lab.lemma_check(s, exp, sin) <= lab.lemma_bound(s, exp, sin)

    def test_sweep_of_one_hundred_matrices(self):
        trials = lab.lemma_sweep(100, seed=7)
        assert len(trials) == 100 * len(lab.DEFAULT_FUNCTION_PAIRS)
        assert all(t.passed for t in trials)
        assert {t.dim for t in trials} <= set(range(2, 33))

    def test_fixed_dimension(self):
        trials = lab.lemma_sweep(5, seed=1, min_dim=8, max_dim=8)
        assert {t.dim for t in trials} == {8}


class TestTruncatedPositionMomentum:

    def test_two_levels(self):
        z, p = lab.truncated_position_momentum(2)
        assert np.allclose(z.entries, np.array([[0, 1], [1, 0]]) / math.sqrt(2))
        assert np.allclose(p.entries, 1j * np.array([[0, -1], [1, 0]]) / math.sqrt(2))

    def test_three_levels(self):
        z, _ = lab.truncated_position_momentum(3)
        assert z.entries[0, 1].real == pytest.approx(1 / math.sqrt(2))
        assert z.entries[1, 2].real == pytest.approx(1.0)

    def test_minimum_dimension(self):
        with pytest.raises(ValueError, match='dimension must be at least 2'):
            lab.truncated_position_momentum(1)

    def test_profile_two_levels(self):
        profile = lab.zp_commutator_profile(2)
        assert profile.diagonal == pytest.approx([1.0, -1.0], abs=1e-10)

    def test_profile_eight_levels(self):
        profile = lab.zp_commutator_profile(8)
        assert profile.diagonal == pytest.approx([1.0] * 7 + [-7.0], abs=1e-10)
        assert profile.max_off_diagonal <= 1e-10
        assert profile.trace == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize('n', range(2, 21))
    def test_profile_never_commutes(self, n):
        profile = lab.zp_commutator_profile(n)
        assert profile.frobenius_norm >= 1.0
        assert profile.diagonal[-1] == pytest.approx(1 - n, abs=1e-10)
