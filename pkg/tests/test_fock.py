"""Truncated-Fock linear algebra oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvforge import fock


def random_antihermitian(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (m - m.conj().T)


class TestLadder:
    def test_smallest_cutoff_matrix(self):
        a, a_dag, n = fock.ladder(2)
        np.testing.assert_allclose(a, [[0, 1], [0, 0]])
        np.testing.assert_allclose(a_dag, [[0, 0], [1, 0]])
        np.testing.assert_allclose(n, [[0, 0], [0, 1]])

    @pytest.mark.parametrize("dim", [2, 3, 5, 17])
    def test_truncated_commutator_identity(self, dim):
        # [a, a^dag] = I - D |D-1><D-1| on the truncated space; sqrt(m)^2
        # rounds within a few ulp, so "exact" means machine precision here
        a, a_dag, _ = fock.ladder(dim)
        top = np.zeros((dim, dim))
        top[-1, -1] = 1.0
        np.testing.assert_allclose(
            a @ a_dag - a_dag @ a, np.eye(dim) - dim * top, atol=dim * 1e-15
        )

    @pytest.mark.parametrize("dim", [2, 4, 9])
    def test_number_operator_is_adag_a(self, dim):
        a, a_dag, n = fock.ladder(dim)
        np.testing.assert_allclose(n, a_dag @ a, atol=dim * 1e-15)

    def test_rejects_tiny_cutoff(self):
        with pytest.raises(fock.InvalidCutoffError):
            fock.ladder(1)


class TestQuadratures:
    def test_matrix_elements(self):
        x, _ = fock.quadratures(3)
        assert x[0, 1] == pytest.approx(1.0)
        assert x[1, 2] == pytest.approx(np.sqrt(2))
        np.testing.assert_allclose(x, x.conj().T)

    @pytest.mark.parametrize("dim", [2, 3, 8])
    def test_vacuum_variance_is_one(self, dim):
        # hbar = 2 convention fixes <0|x^2|0> = 1
        x, _ = fock.quadratures(dim)
        assert (x @ x)[0, 0].real == pytest.approx(1.0)

    @pytest.mark.parametrize("dim", [2, 5, 11])
    def test_xp_commutator(self, dim):
        x, p = fock.quadratures(dim)
        top = np.zeros((dim, dim))
        top[-1, -1] = 1.0
        np.testing.assert_allclose(
            x @ p - p @ x, 2j * (np.eye(dim) - dim * top), atol=1e-12
        )


class TestExpm:
    def test_zero_gives_identity(self):
        np.testing.assert_allclose(
            fock.expm_antihermitian(np.zeros((4, 4))), np.eye(4), atol=1e-15
        )

    def test_diagonal_pi_phases(self):
        m = 1j * np.pi * np.diag(np.arange(4).astype(complex))
        np.testing.assert_allclose(
            fock.expm_antihermitian(m), np.diag([1, -1, 1, -1]).astype(complex),
            atol=1e-12,
        )

    @pytest.mark.parametrize("seed", range(5))
    def test_inverse_pairs(self, seed):
        m = random_antihermitian(8, seed)
        u = fock.expm_antihermitian(m)
        u_inv = fock.expm_antihermitian(-m)
        assert np.max(np.abs(u @ u_inv - np.eye(8))) < 1e-12

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_always_unitary(self, seed):
        m = 3.0 * random_antihermitian(6, seed)
        assert fock.unitarity_defect(fock.expm_antihermitian(m)) < 1e-10

    def test_rejects_non_antihermitian(self):
        with pytest.raises(ValueError, match="anti-Hermitian"):
            fock.expm_antihermitian(np.eye(3, dtype=complex))


class TestFrechet:
    def test_zero_direction(self):
        m = random_antihermitian(5, 0)
        np.testing.assert_allclose(
            fock.expm_frechet(m, np.zeros((5, 5))), np.zeros((5, 5)), atol=1e-14
        )

    def test_zero_base_point_is_identity_map(self):
        e = random_antihermitian(5, 1)
        np.testing.assert_allclose(fock.expm_frechet(np.zeros((5, 5)), e), e, atol=1e-13)

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_central_differences(self, seed):
        m = random_antihermitian(6, seed)
        e = random_antihermitian(6, seed + 100)
        h = 1e-5
        fd = (fock.expm_antihermitian(m + h * e) - fock.expm_antihermitian(m - h * e)) / (2 * h)
        lf = fock.expm_frechet(m, e)
        assert np.max(np.abs(lf - fd)) / np.max(np.abs(fd)) < 1e-6

    @pytest.mark.parametrize("seed", range(4))
    def test_eig_route_matches_block_route(self, seed):
        # the fast Daleckii-Krein path must agree with the block-augmented
        # exponential, which assumes nothing about structure
        m = random_antihermitian(7, seed)
        e = random_antihermitian(7, seed + 50)
        _, eigs, vecs = fock.expm_eig(m)
        np.testing.assert_allclose(
            fock.frechet_from_eig(eigs, vecs, e), fock.expm_frechet(m, e), atol=1e-12
        )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            fock.expm_frechet(np.zeros((3, 3)), np.zeros((4, 4)))


class TestTensorAndEmbed:
    def test_identity_product(self):
        np.testing.assert_array_equal(
            fock.tensor(np.eye(3, dtype=complex), np.eye(3, dtype=complex)), np.eye(9)
        )

    def test_number_operator_on_mode_zero(self):
        _, _, n = fock.ladder(3)
        n0 = fock.embed_single(n, 0, 2)
        ket10 = fock.basis_state(1 * 3 + 0, 9)
        ket01 = fock.basis_state(0 * 3 + 1, 9)
        np.testing.assert_allclose(n0 @ ket10, 1.0 * ket10)
        np.testing.assert_allclose(n0 @ ket01, 0.0 * ket01)

    @pytest.mark.parametrize("seed", range(3))
    def test_mixed_product_property(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        np.testing.assert_allclose(
            fock.tensor(a, b) @ np.kron(u, v), np.kron(a @ u, b @ v), atol=1e-12
        )

    def test_embed_pair_equals_tensor(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        np.testing.assert_allclose(
            fock.embed_single(a, 0, 2) @ fock.embed_single(b, 1, 2),
            fock.tensor(a, b),
            atol=1e-12,
        )

    def test_tensor_associativity(self):
        rng = np.random.default_rng(3)
        mats = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                for _ in range(3)]
        np.testing.assert_allclose(
            fock.tensor(fock.tensor(mats[0], mats[1]), mats[2]),
            fock.tensor(mats[0], fock.tensor(mats[1], mats[2])),
            rtol=1e-15, atol=1e-15,
        )


class TestOverlap:
    def test_self_overlap_of_normalised_state(self):
        rng = np.random.default_rng(0)
        psi = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        psi /= np.linalg.norm(psi)
        assert fock.overlap(psi, psi) == pytest.approx(1.0)

    def test_orthogonal_basis_states(self):
        assert fock.overlap(fock.basis_state(0, 4), fock.basis_state(1, 4)) == 0

    def test_vacuum_coherent_closed_form(self):
        from cvforge import targets
        alpha = 0.3
        psi = targets.coherent(alpha, 20)
        assert fock.overlap(fock.basis_state(0, 20), psi) == pytest.approx(
            np.exp(-0.5 * alpha ** 2), abs=1e-10
        )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            fock.overlap(np.zeros(3), np.zeros(4))
