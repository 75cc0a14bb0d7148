import numpy as np
import pytest

from traceless.linalg import hs_norm, singular_profile
from traceless.reduction import apply_conjugation, zero_diagonal_reduce

from conftest import random_trace_zero, random_unitary

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


class TestZeroDiagonalReduce:
    def test_already_zero_diagonal(self, rng):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        np.fill_diagonal(a, 0.0)
        res = zero_diagonal_reduce(a)
        assert np.array_equal(res.q, np.eye(4))
        assert np.array_equal(res.atilde, a)
        assert res.diag_residual == 0.0

    def test_hand_2x2(self):
        res = zero_diagonal_reduce(np.diag([1.0 + 0j, -1.0]))
        assert res.converged
        assert np.allclose(np.abs(res.atilde), [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)

    def test_hand_2x2_half(self):
        res = zero_diagonal_reduce(np.diag([0.5 + 0j, -0.5]))
        assert np.allclose(np.abs(res.atilde), [[0.0, 0.5], [0.5, 0.0]], atol=1e-12)

    def test_nonzero_trace_rejected(self):
        with pytest.raises(ValueError, match="trace"):
            zero_diagonal_reduce(np.eye(3))

    def test_zero_matrix(self):
        res = zero_diagonal_reduce(np.zeros((3, 3)))
        assert res.converged and res.diag_residual == 0.0

    @pytest.mark.parametrize("m", [2, 3, 5, 8, 16, 64, 128])
    def test_random_trace_zero(self, rng, m):
        a = random_trace_zero(rng, m)
        res = zero_diagonal_reduce(a)
        scale = hs_norm(a)
        assert res.converged
        assert res.diag_residual <= 1e-10 * scale
        # unitarity and consistency of the returned pieces
        assert hs_norm(res.q.conj().T @ res.q - np.eye(m)) <= 1e-12 * m
        assert hs_norm(res.q.conj().T @ a @ res.q - res.atilde) <= 1e-12 * scale
        # round trip and spectrum preservation
        assert hs_norm(apply_conjugation(res.q, res.atilde) - a) <= 1e-10 * scale
        assert np.allclose(
            singular_profile(a).values, singular_profile(res.atilde).values, atol=1e-10 * scale
        )

    def test_diagonal_input(self, rng):
        # diagonal matrices exercise the degenerate 2x2 numerical ranges
        d = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        d -= d.mean()
        a = np.diag(d)
        res = zero_diagonal_reduce(a)
        assert res.converged
        assert res.diag_residual <= 1e-10 * hs_norm(a)

    def test_tolerance_parameter(self, rng):
        a = random_trace_zero(rng, 6)
        res = zero_diagonal_reduce(a, tol=1e-6)
        assert res.diag_residual <= 1e-6 * max(1.0, hs_norm(a))


class TestApplyConjugation:
    def test_identity(self, rng):
        m = rng.standard_normal((3, 3)) + 0j
        assert np.allclose(apply_conjugation(np.eye(3), m), m)

    def test_preserves_hs_norm(self, rng):
        m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        q = random_unitary(rng, 5)
        assert hs_norm(apply_conjugation(q, m)) == pytest.approx(hs_norm(m), abs=1e-10)

    def test_hadamard_on_projection(self):
        got = apply_conjugation(HADAMARD, np.diag([0.0, 1.0]))
        assert np.allclose(got, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError, match="unitary"):
            apply_conjugation(2.0 * np.eye(2), np.eye(2))
