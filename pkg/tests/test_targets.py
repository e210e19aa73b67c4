"""Target state/gate constructor oracles."""

import numpy as np
import pytest
from scipy import stats

from cvforge import fock, targets


class TestSimpleStates:
    def test_single_photon(self):
        psi = targets.single_photon(6)
        assert psi[1] == 1.0
        assert np.linalg.norm(psi) == 1.0

    def test_fock_state_requires_cutoff(self):
        with pytest.raises(ValueError):
            targets.fock_state(5, 5)

    def test_coherent_mean_photon_number(self):
        # Poisson distribution with mean |alpha|^2
        psi = targets.coherent(0.5, 20)
        n_mean = np.sum(np.arange(20) * np.abs(psi) ** 2)
        assert n_mean == pytest.approx(0.25, abs=1e-6)

    def test_coherent_is_normalised(self):
        assert np.linalg.norm(targets.coherent(1.3 + 0.4j, 30)) == pytest.approx(1.0)

    def test_on_state_equal_superposition(self):
        psi = targets.on_state(1.0, 9, 14)
        assert psi[0] == pytest.approx(1 / np.sqrt(2))
        assert psi[9] == pytest.approx(1 / np.sqrt(2))
        assert np.count_nonzero(psi) == 2

    def test_on_state_vacuum_limit(self):
        np.testing.assert_array_equal(targets.on_state(0.0, 3, 5), fock.basis_state(0, 5))

    @pytest.mark.parametrize("a", [0.5 + 0.5j, -2.0, 3j])
    def test_on_state_norm(self, a):
        assert np.linalg.norm(targets.on_state(a, 4, 8)) == pytest.approx(1.0)

    def test_on_state_cutoff_guard(self):
        with pytest.raises(ValueError):
            targets.on_state(1.0, 9, 9)

    def test_noon_lexicographic_indices(self):
        psi = targets.noon(5, 10)
        assert psi[5 * 10 + 0] == pytest.approx(1 / np.sqrt(2))
        assert psi[0 * 10 + 5] == pytest.approx(1 / np.sqrt(2))
        assert np.count_nonzero(psi) == 2


class TestRandomState:
    def test_reproducible_per_seed(self):
        np.testing.assert_array_equal(
            targets.random_state(15, 7, 20), targets.random_state(15, 7, 20)
        )
        assert np.any(targets.random_state(15, 7, 20) != targets.random_state(15, 8, 20))

    def test_unit_norm_and_support(self):
        psi = targets.random_state(15, 0, 20)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_array_equal(psi[15:], 0)

    def test_support_independent_of_cutoff(self):
        np.testing.assert_array_equal(
            targets.random_state(6, 3, 8)[:6], targets.random_state(6, 3, 30)[:6]
        )

    def test_dirichlet_moments(self):
        # |amplitude|^2 of a normalised complex-normal vector is flat
        # Dirichlet; check first-component mean and pooled variance over
        # 10^4 seeds within 3 sigma
        d, n = 15, 10_000
        probs = np.array([np.abs(targets.random_state(d, seed, d)) ** 2
                          for seed in range(n)])
        var_expected = (d - 1) / (d * d * (d + 1))
        z = (probs[:, 0].mean() - 1 / d) / np.sqrt(var_expected / n)
        assert abs(z) < 3.0
        assert abs(probs.var() - var_expected) / var_expected < 0.05

    def test_support_exceeding_cutoff(self):
        with pytest.raises(ValueError):
            targets.random_state(10, 0, 8)


class TestHexGkp:
    def test_unit_norm(self):
        psi = targets.hex_gkp(1, 2, 0.3, 50)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)

    def test_certificate_tail_below_tolerance(self):
        _, cert = targets.hex_gkp(1, 2, 0.3, 50, with_certificate=True)
        assert cert.tail_norm < 1e-10
        assert cert.radius >= 1

    def test_doubling_radius_changes_nothing(self):
        _, cert = targets.hex_gkp(1, 2, 0.3, 40, with_certificate=True)
        base = targets.hex_gkp(1, 2, 0.3, 40, radius=cert.radius)
        doubled = targets.hex_gkp(1, 2, 0.3, 40, radius=2 * cert.radius)
        assert np.linalg.norm(base - doubled) < 1e-8

    def test_mu_zero_differs_from_mu_one(self):
        a = targets.hex_gkp(0, 2, 0.3, 30)
        b = targets.hex_gkp(1, 2, 0.3, 30)
        assert abs(np.vdot(a, b)) < 0.99

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            targets.hex_gkp(2, 2, 0.3, 20)
        with pytest.raises(ValueError):
            targets.hex_gkp(0, 2, -0.1, 20)
        with pytest.raises(ValueError):
            targets.hex_gkp(0, 2, 0.3, 20, radius=0)


class TestQftGate:
    def test_d1_is_identity(self):
        np.testing.assert_allclose(targets.qft_gate(1, 5), np.eye(5))

    def test_block_unitary(self):
        v = targets.qft_gate(8, 12)
        assert fock.unitarity_defect(v) < 1e-12

    def test_identity_outside_block(self):
        v = targets.qft_gate(3, 6)
        np.testing.assert_array_equal(v[3:, 3:], np.eye(3))
        np.testing.assert_array_equal(v[:3, 3:], 0)

    def test_maps_equal_superposition_to_vacuum(self):
        d = 8
        v = targets.qft_gate(d, 10)
        sup = np.zeros(10, dtype=complex)
        sup[:d] = 1 / np.sqrt(d)
        np.testing.assert_allclose(v @ sup, fock.basis_state(0, 10), atol=1e-12)


class TestHaarGate:
    def test_block_unitary_and_identity_elsewhere(self):
        v = targets.haar_gate(5, 42, 16)
        assert fock.unitarity_defect(v) < 1e-12
        np.testing.assert_array_equal(v[5:, 5:], np.eye(11))

    def test_seed_reproducibility(self):
        np.testing.assert_array_equal(targets.haar_gate(4, 9, 8), targets.haar_gate(4, 9, 8))
        assert np.any(targets.haar_gate(4, 9, 8) != targets.haar_gate(4, 10, 8))

    def test_haar_marginal_uniform(self):
        # |V00|^2 of a Haar 2x2 unitary is uniform on [0, 1]
        rng = np.random.default_rng(2024)
        vals = np.array([abs(targets.haar_unitary(2, rng)[0, 0]) ** 2
                         for _ in range(10_000)])
        assert stats.kstest(vals, "uniform").pvalue > 0.0027  # 3 sigma


class TestTargetSpec:
    def test_round_trip_through_dict(self):
        spec = targets.TargetSpec.from_dict(
            {"kind": "hex_gkp", "mu": 1, "d_code": 2, "delta": 0.3}
        )
        assert spec.kind == "hex_gkp"
        assert spec.to_dict() == {"kind": "hex_gkp", "mu": 1, "d_code": 2, "delta": 0.3}
        assert not spec.is_gate and spec.modes == 1

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown target kind"):
            targets.TargetSpec("bell_state")

    def test_missing_and_extra_fields(self):
        with pytest.raises(ValueError, match="missing"):
            targets.TargetSpec("on_state", a=1)
        with pytest.raises(ValueError, match="unexpected"):
            targets.TargetSpec("single_photon", n=2)

    def test_two_mode_kinds(self):
        assert targets.TargetSpec("noon", n=3).modes == 2
        assert targets.TargetSpec("cross_kerr_gate", kappa=0.1, d=5).modes == 2

    def test_complex_parameter_forms(self):
        as_pair = targets.TargetSpec("on_state", a=[0.0, 1.0], n=2)
        psi = targets.resolve_state(as_pair, 5)
        assert psi[2] == pytest.approx(1j / np.sqrt(2))

    def test_resolver_dispatch(self):
        state = targets.resolve_state(targets.TargetSpec("noon", n=2), 5)
        assert state.shape == (25,)
        gate = targets.resolve_gate(targets.TargetSpec("qft_gate", d=4), 8)
        assert gate.shape == (8, 8)
        with pytest.raises(ValueError, match="not a gate"):
            targets.resolve_gate(targets.TargetSpec("noon", n=2), 5)

    def test_relation_indices(self):
        spec = targets.TargetSpec("cross_kerr_gate", kappa=0.1, d=2)
        assert targets.input_relation_indices(spec, 5) == (0, 1, 5, 6)
        spec1 = targets.TargetSpec("qft_gate", d=3)
        assert targets.input_relation_indices(spec1, 9) == (0, 1, 2)

    @pytest.mark.parametrize(
    "spec_dict, cutoff",
        [
            ({"kind": "single_photon"}, 6),
            ({"kind": "fock_n", "n": 3}, 6),
            ({"kind": "on_state", "a": 1, "n": 9}, 14),
            ({"kind": "hex_gkp", "mu": 1, "d_code": 2, "delta": 0.3}, 30),
            ({"kind": "random_state", "d": 15, "seed": 0}, 20),
            ({"kind": "noon", "n": 5}, 10),
            ({"kind": "coherent", "alpha": 0.7}, 15),
        ],
    )
    def test_every_state_kind_unit_norm(self, spec_dict, cutoff):
        psi = targets.resolve_state(targets.TargetSpec.from_dict(spec_dict), cutoff)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize(
        "spec_dict, cutoff",
        [
            ({"kind": "cubic_phase_gate", "gamma": 0.01, "d": 6}, 14),
            ({"kind": "qft_gate", "d": 8}, 18),
            ({"kind": "haar_gate", "d": 5, "seed": 42}, 16),
            ({"kind": "cross_kerr_gate", "kappa": 0.1, "d": 5}, 9),
        ],
    )
    def test_every_gate_kind_unitary(self, spec_dict, cutoff):
        gate = targets.resolve_gate(targets.TargetSpec.from_dict(spec_dict), cutoff)
        assert fock.unitarity_defect(gate) < 1e-10
