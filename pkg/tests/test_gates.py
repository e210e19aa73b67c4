"""Gate constructor and derivative oracles."""

import numpy as np
import pytest

from cvforge import fock, gates


def central_difference(build, params, which, h=1e-5):
    up = list(params)
    down = list(params)
    up[which] += h
    down[which] -= h
    return (build(*up) - build(*down)) / (2 * h)


def rel_err(approx, exact):
    return np.max(np.abs(approx - exact)) / np.max(np.abs(exact))


class TestDiagonalGates:
    def test_rotation_zero_is_identity(self):
        np.testing.assert_array_equal(gates.rotation(0.0, 5), np.eye(5))

    def test_rotation_pi(self):
        np.testing.assert_allclose(
            gates.rotation(np.pi, 3), np.diag([1, -1, 1]).astype(complex), atol=1e-15
        )

    @pytest.mark.parametrize("seed", range(3))
    def test_rotation_additivity(self, seed):
        rng = np.random.default_rng(seed)
        p1, p2 = rng.uniform(-4, 4, 2)
        np.testing.assert_allclose(
            gates.rotation(p1, 6) @ gates.rotation(p2, 6),
            gates.rotation(p1 + p2, 6),
            atol=1e-14,
        )

    def test_kerr_zero_is_identity(self):
        np.testing.assert_array_equal(gates.kerr(0.0, 4), np.eye(4))

    def test_kerr_pi_integer_phases(self):
        np.testing.assert_allclose(
            gates.kerr(np.pi, 4), np.diag([1, -1, 1, -1]).astype(complex), atol=1e-12
        )

    def test_kerr_preserves_fock_magnitudes(self):
        rng = np.random.default_rng(0)
        psi = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        out = gates.kerr(0.7, 6) @ psi
        np.testing.assert_allclose(np.abs(out), np.abs(psi), atol=1e-14)

    def test_cross_kerr_fixes_single_mode_occupations(self):
        dim = 4
        v = gates.cross_kerr(0.37, dim)
        for n in range(dim):
            np.testing.assert_allclose(
                v @ fock.basis_state(n * dim, dim * dim),
                fock.basis_state(n * dim, dim * dim), atol=1e-14,
            )
            np.testing.assert_allclose(
                v @ fock.basis_state(n, dim * dim),
                fock.basis_state(n, dim * dim), atol=1e-14,
            )

    def test_cross_kerr_one_one_phase(self):
        dim = 4
        v = gates.cross_kerr(0.1, dim)
        ket11 = fock.basis_state(1 * dim + 1, dim * dim)
        assert np.vdot(ket11, v @ ket11) == pytest.approx(np.exp(-0.1j))

    def test_cross_kerr_diagonal_unimodular(self):
        v = gates.cross_kerr(1.3, 5)
        np.testing.assert_allclose(np.abs(np.diag(v)), 1.0, atol=1e-14)
        assert np.max(np.abs(v - np.diag(np.diag(v)))) == 0.0


class TestExponentialGates:
    def test_displacement_zero_is_identity(self):
        np.testing.assert_allclose(gates.displacement(0.0, 0.0, 8), np.eye(8), atol=1e-14)

    def test_displacement_vacuum_amplitude(self):
        # |<0|D(alpha)|0>| = e^{-|alpha|^2/2} once the cutoff is padded
        alpha = 0.3
        d = gates.displacement(alpha, 0.0, 12)
        assert abs(d[0, 0]) == pytest.approx(np.exp(-0.5 * alpha ** 2), abs=1e-6)

    def test_displacement_exact_inverse(self):
        d_plus = gates.displacement(0.4, -0.2, 9)
        d_minus = gates.displacement(-0.4, 0.2, 9)
        assert np.max(np.abs(d_plus @ d_minus - np.eye(9))) < 1e-12
        np.testing.assert_allclose(d_plus.conj().T, d_minus, atol=1e-12)

    def test_squeezing_zero_is_identity(self):
        np.testing.assert_allclose(gates.squeezing(0.0, 8), np.eye(8), atol=1e-14)

    def test_squeezing_vacuum_amplitude(self):
        r = 0.2
        s = gates.squeezing(r, 24)
        assert abs(s[0, 0]) == pytest.approx(1.0 / np.sqrt(np.cosh(r)), abs=1e-5)

    def test_squeezed_vacuum_has_even_support(self):
        out = gates.squeezing(0.3, 20)[:, 0]
        np.testing.assert_allclose(out[1::2], 0.0, atol=1e-12)
        assert abs(out[2]) > 1e-3

    def test_squeezing_adjoint_negates(self):
        np.testing.assert_allclose(
            gates.squeezing(0.17, 10).conj().T, gates.squeezing(-0.17, 10), atol=1e-12
        )

    def test_beamsplitter_zero_is_identity(self):
        np.testing.assert_allclose(gates.beamsplitter(0.0, 0.3, 3), np.eye(9), atol=1e-14)

    def test_beamsplitter_conserves_photon_number(self):
        dim = 4
        bs = gates.beamsplitter(np.pi / 4, 0.0, dim)
        out = bs @ fock.basis_state(1 * dim + 0, dim * dim)
        total = np.repeat(np.arange(dim), dim) + np.tile(np.arange(dim), dim)
        assert np.max(np.abs(out[total != 1])) < 1e-12

    def test_beamsplitter_block_structure(self):
        dim = 4
        bs = gates.beamsplitter(0.7, 1.1, dim)
        total = np.repeat(np.arange(dim), dim) + np.tile(np.arange(dim), dim)
        coupling = bs[total[:, None] != total[None, :]]
        assert np.max(np.abs(coupling)) < 1e-12

    def test_beamsplitter_full_swap(self):
        dim = 5
        bs = gates.beamsplitter(np.pi / 2, 0.0, dim)
        out = bs @ fock.basis_state(1 * dim + 0, dim * dim)
        assert abs(out[0 * dim + 1]) == pytest.approx(1.0, abs=1e-10)

    def test_beamsplitter_adjoint_negates_theta(self):
        np.testing.assert_allclose(
            gates.beamsplitter(0.6, 0.9, 3).conj().T,
            gates.beamsplitter(-0.6, 0.9, 3),
            atol=1e-12,
        )

    def test_cubic_phase_zero_is_identity(self):
        np.testing.assert_allclose(gates.cubic_phase(0.0, 10), np.eye(10), atol=1e-14)

    def test_cubic_phase_unitary(self):
        assert fock.unitarity_defect(gates.cubic_phase(0.01, 20)) < 1e-10

    @pytest.mark.parametrize(
        "build, args",
        [
            (gates.rotation, (0.8, 7)),
            (gates.displacement, (0.3, -0.5, 7)),
            (gates.squeezing, (0.25, 7)),
            (gates.beamsplitter, (0.9, 0.4, 4)),
            (gates.kerr, (0.6, 7)),
            (gates.cross_kerr, (0.3, 4)),
            (gates.cubic_phase, (0.02, 12)),
        ],
    )
    def test_every_gate_unitary(self, build, args):
        assert fock.unitarity_defect(build(*args)) < 1e-10


class TestGateDerivatives:
    def test_rotation_derivative_at_zero(self):
        np.testing.assert_allclose(
            gates.gate_derivative("rotation", [0.0], 0, 5),
            1j * np.diag(np.arange(5).astype(complex)),
            atol=1e-14,
        )

    @pytest.mark.parametrize(
        "kind, params, dim, builder",
        [
            ("rotation", [0.9], 8, lambda p: gates.rotation(p, 8)),
            ("kerr", [0.4], 8, lambda p: gates.kerr(p, 8)),
            ("cross_kerr", [0.25], 4, lambda p: gates.cross_kerr(p, 4)),
            ("squeezing", [0.15], 12, lambda p: gates.squeezing(p, 12)),
            ("cubic_phase", [0.015], 10, lambda p: gates.cubic_phase(p, 10)),
        ],
    )
    def test_single_parameter_gates_match_fd(self, kind, params, dim, builder):
        fd = central_difference(builder, params, 0)
        assert rel_err(gates.gate_derivative(kind, params, 0, dim), fd) < 1e-6

    @pytest.mark.parametrize("which", [0, 1])
    def test_displacement_matches_fd(self, which):
        params = [0.2, 0.1]
        fd = central_difference(lambda r, i: gates.displacement(r, i, 8), params, which)
        assert rel_err(gates.gate_derivative("displacement", params, which, 8), fd) < 1e-6

    @pytest.mark.parametrize("which", [0, 1])
    def test_beamsplitter_matches_fd(self, which):
        params = [0.7, 1.2]
        fd = central_difference(lambda t, p: gates.beamsplitter(t, p, 4), params, which)
        assert rel_err(gates.gate_derivative("beamsplitter", params, which, 4), fd) < 1e-6

    def test_beamsplitter_phi_derivative_at_nonzero_theta_only(self):
        # at theta = 0 the gate is phi-independent, derivative must vanish
        d = gates.gate_derivative("beamsplitter", [0.0, 0.8], 1, 3)
        np.testing.assert_allclose(d, np.zeros((9, 9)), atol=1e-14)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unknown gate kind"):
            gates.gate_derivative("warp", [0.1], 0, 4)

    def test_bad_parameter_index_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            gates.gate_derivative("squeezing", [0.1], 1, 4)


class TestFastPathsAgreeWithConstructors:
    """The training hot loop must build the same matrices as the public API."""

    @pytest.mark.parametrize("re_im", [(0.3, -0.2), (0.0, 0.0), (0.0, 0.4), (-1.1, 0.7)])
    def test_displacement_bundle(self, re_im):
        u, d_re, d_im = gates.displacement_with_derivatives(*re_im, 10)
        np.testing.assert_allclose(u, gates.displacement(*re_im, 10), atol=1e-13)
        fd_re = central_difference(lambda r, i: gates.displacement(r, i, 10), re_im, 0)
        fd_im = central_difference(lambda r, i: gates.displacement(r, i, 10), re_im, 1)
        assert np.max(np.abs(d_re - fd_re)) < 1e-7
        assert np.max(np.abs(d_im - fd_im)) < 1e-7

    @pytest.mark.parametrize("r", [-0.4, 0.0, 0.3])
    def test_squeezing_bundle(self, r):
        u, du = gates.squeezing_with_derivatives(r, 9)
        np.testing.assert_allclose(u, gates.squeezing(r, 9), atol=1e-13)
        fd = central_difference(lambda x: gates.squeezing(x, 9), [r], 0)
        assert np.max(np.abs(du - fd)) < 1e-7

    @pytest.mark.parametrize("theta_phi", [(0.3, 0.9), (0.0, 0.0), (1.4, -2.2)])
    def test_beamsplitter_bundle(self, theta_phi):
        u, d_th, d_ph = gates.beamsplitter_with_derivatives(*theta_phi, 4)
        np.testing.assert_allclose(u, gates.beamsplitter(*theta_phi, 4), atol=1e-13)
        fd_th = central_difference(lambda t, p: gates.beamsplitter(t, p, 4), theta_phi, 0)
        fd_ph = central_difference(lambda t, p: gates.beamsplitter(t, p, 4), theta_phi, 1)
        assert np.max(np.abs(d_th - fd_th)) < 1e-7
        assert np.max(np.abs(d_ph - fd_ph)) < 1e-7
