import numpy as np
import pytest
from scipy.integrate import quad_vec

from conftest import random_density
from lambda_relax.detection import (
    PHOTON_CHANNELS,
    atom_photon_negativity,
    atom_photon_reduction,
    condition_on_polarization,
    detection_probability,
    emitted_photon_count,
    one_photon_from_relaxation,
    one_photon_joint,
    one_photon_time_resolved,
    two_photon_state,
    two_photon_with_atoms,
)
from lambda_relax.entanglement import BipartitionSpec, concurrence, log_negativity
from lambda_relax.liouvillian import Liouvillian
from lambda_relax.reference import (
    achiral_ee_plus_conditioned,
    chiral_ee_plus_conditioned,
    exact_conditioned_concurrence,
)
from lambda_relax.states import (
    Direction,
    Polarization,
    SystemConfig,
    ground_block,
    ground_indices,
    ket_density_matrix,
    restrict_to_ground,
)

PHPH_SPLIT = BipartitionSpec((4, 4), (0,))


def setup(initial, spacing, s):
    liouv = Liouvillian(SystemConfig.equidistant(len(initial), spacing, s))
    return liouv, ket_density_matrix(initial, liouv.config)


class TestEmittedCount:
    def test_counts_excitations_in_strings(self):
        assert emitted_photon_count("ee", None) == 2.0
        assert emitted_photon_count("++", None) == 0.0
        assert emitted_photon_count("e+e+", None) == 2.0

    def test_density_matrix_expectation(self):
        liouv, rho = setup("e+", 0.5, 0.3)
        assert emitted_photon_count(rho, liouv.config) == pytest.approx(1.0)

    def test_single_photon_needs_excitation(self):
        liouv, rho = setup("++", 0.5, 0.3)
        with pytest.raises(ValueError, match="at least one excitation"):
            one_photon_joint(rho, liouv)

    def test_two_photon_needs_two(self):
        liouv, rho = setup("e+", 0.5, 0.3)
        with pytest.raises(ValueError, match="at least two excitations"):
            two_photon_state(rho, liouv)


class TestOnePhotonJoint:
    def test_single_atom_bell_pair(self):
        liouv, rho = setup("e", 0.0, 0.0)
        joint = one_photon_joint(rho, liouv)
        vec = np.zeros(8, dtype=complex)
        vec[0 * 4 + 0] = 1 / np.sqrt(2)  # |+> with a right-moving + photon
        vec[1 * 4 + 3] = 1 / np.sqrt(2)  # |-> with a left-moving - photon
        assert np.allclose(joint.matrix, np.outer(vec, vec.conj()), atol=1e-12)
        assert atom_photon_negativity(joint, 1) == pytest.approx(1.0, abs=1e-12)

    def test_unit_trace_two_atoms(self):
        for s, k in ((0.0, 0.4), (0.6, 1.3), (1.0, np.pi / 2)):
            liouv, rho = setup("ee", k, s)
            joint = one_photon_joint(rho, liouv)
            assert abs(np.trace(joint.matrix) - 1.0) < 1e-12

    def test_chirality_locks_polarization_to_direction(self):
        liouv, rho = setup("ee", 0.9, 0.0)
        joint = one_photon_joint(rho, liouv)
        g = 4
        tensor = joint.matrix.reshape(g, 4, g, 4)
        wrong = [PHOTON_CHANNELS.index((Polarization.Plus, Direction.Left)),
                 PHOTON_CHANNELS.index((Polarization.Minus, Direction.Right))]
        for p in wrong:
            assert np.max(np.abs(tensor[:, p, :, :])) == 0.0
            assert np.max(np.abs(tensor[:, :, :, p])) == 0.0

    def test_insensitive_to_kernel_component(self, rng):
        liouv, rho = setup("ee", 1.1, 0.5)
        relaxed = liouv.drazin_apply(rho.matrix)
        base = one_photon_from_relaxation(liouv, relaxed, 2.0)
        shifted = relaxed.copy()
        idx = ground_indices(2)
        shifted[np.ix_(idx, idx)] += random_density(rng, 4)
        other = one_photon_from_relaxation(liouv, shifted, 2.0)
        assert np.allclose(base.matrix, other.matrix, atol=1e-13)


class TestTimeResolved:
    def test_single_atom_emission_rate(self):
        liouv, rho = setup("e", 0.0, 0.0)
        for t in (0.0, 0.4, 1.7):
            mat = one_photon_time_resolved(rho, liouv, t)
            assert abs(np.trace(mat).real - 2 * np.exp(-2 * t)) < 1e-9

    def test_vanishes_at_late_times(self):
        liouv, rho = setup("e+", 0.8, 0.7)
        mat = one_photon_time_resolved(rho, liouv, 60.0)
        assert np.max(np.abs(mat)) < 1e-12

    def test_quadrature_recovers_averaged_state(self):
        for initial, s, k in (("e", 0.0, 0.0), ("ee", 0.5, 0.9)):
            liouv, rho = setup(initial, k, s)
            joint = one_photon_joint(rho, liouv)
            n0 = float(initial.count("e"))
            integral, _ = quad_vec(
                lambda t: one_photon_time_resolved(rho, liouv, t, method="spectral"),
                0.0,
                80.0,
                epsabs=1e-12,
                epsrel=1e-12,
            )
            assert np.max(np.abs(integral - n0 * joint.matrix)) < 1e-6

    def test_photon_number_from_trace_quadrature(self):
        liouv, rho = setup("ee", 1.2, 0.4)
        from scipy.integrate import quad

        total, _ = quad(
            lambda t: np.trace(
                one_photon_time_resolved(rho, liouv, t, method="spectral")
            ).real,
            0.0,
            80.0,
            epsabs=1e-11,
            epsrel=1e-11,
            limit=200,
        )
        assert abs(total - 2.0) < 1e-8


class TestConditioning:
    def test_chiral_pair_matches_catalog(self):
        for k in (0.0, 0.7, 2.2):
            liouv, rho = setup("ee", k, 0.0)
            cond = condition_on_polarization(one_photon_joint(rho, liouv), Polarization.Plus)
            assert np.allclose(cond.matrix, chiral_ee_plus_conditioned(k), atol=1e-12)
            assert concurrence(cond) == pytest.approx(0.25, abs=1e-12)

    def test_achiral_pair_concurrence_formula(self):
        for k in (0.0, np.pi / 3, np.pi / 2, 2.5, np.pi):
            liouv, rho = setup("ee", k, 1.0)
            cond = condition_on_polarization(one_photon_joint(rho, liouv), Polarization.Plus)
            assert np.allclose(cond.matrix, achiral_ee_plus_conditioned(k), atol=1e-12)
            assert concurrence(cond) == pytest.approx(
                exact_conditioned_concurrence(k), abs=1e-12
            )

    def test_probabilities_sum_to_one(self):
        liouv, rho = setup("ee", 1.3, 0.6)
        joint = one_photon_joint(rho, liouv)
        total = sum(detection_probability(joint, s) for s in Polarization)
        assert abs(total - 1.0) < 1e-12

    def test_consistency_with_unconditioned_relaxation(self):
        for s, k in ((0.0, 0.8), (0.7, 1.9), (1.0, np.pi / 2)):
            liouv, rho = setup("ee", k, s)
            joint = one_photon_joint(rho, liouv)
            acc = np.zeros((4, 4), dtype=complex)
            for sigma in Polarization:
                acc += detection_probability(joint, sigma) * condition_on_polarization(
                    joint, sigma
                ).matrix
            final = restrict_to_ground(liouv.asymptotic_state(rho))
            assert np.max(np.abs(acc - final.matrix)) < 1e-8

    def test_weighting_rule_for_two_atoms(self):
        # detecting +: the ++ population keeps weight 1, -- is dropped and
        # every element with one + photon in its record is halved
        weights = np.array([1.0, 0.5, 0.5, 0.0])
        scale = np.sqrt(weights[:, None] * weights[None, :])
        for s in (0.0, 1.0):
            liouv, rho = setup("ee", 1.1, s)
            final = ground_block(liouv.asymptotic_map(rho.matrix), 2)
            weighted = final * scale
            weighted /= np.trace(weighted)
            joint = one_photon_joint(rho, liouv)
            cond = condition_on_polarization(joint, Polarization.Plus)
            assert np.max(np.abs(cond.matrix - weighted)) < 1e-10

    def test_zero_probability_conditioning_rejected(self):
        from lambda_relax.detection import JointPhotonState

        mat = np.zeros((8, 8), dtype=complex)
        mat[0, 0] = 1.0  # |+> atom with a right-moving + photon only
        joint = JointPhotonState(mat, n_atoms=1, kind="atom_photon")
        with pytest.raises(ValueError, match="probability"):
            condition_on_polarization(joint, Polarization.Minus)


class TestTwoPhoton:
    def test_unit_trace_and_hermitian(self):
        liouv, rho = setup("ee", 0.9, 0.5)
        state = two_photon_state(rho, liouv)
        assert abs(np.trace(state.matrix) - 1.0) < 1e-12
        assert np.allclose(state.matrix, state.matrix.conj().T)

    def test_chiral_case_carries_no_entanglement(self):
        for k in (0.0, 0.9, np.pi / 2, 2.7):
            liouv, rho = setup("ee", k, 0.0)
            state = two_photon_state(rho, liouv)
            assert log_negativity(state.matrix, PHPH_SPLIT) == 0.0

    def test_achiral_bragg_vanishes_anti_bragg_positive(self):
        liouv, rho = setup("ee", 0.0, 1.0)
        assert log_negativity(two_photon_state(rho, liouv).matrix, PHPH_SPLIT) < 1e-9
        liouv, rho = setup("ee", np.pi / 2, 1.0)
        assert log_negativity(two_photon_state(rho, liouv).matrix, PHPH_SPLIT) > 0.5

    def test_monogamy_with_three_atoms(self):
        k = np.pi / 2
        liouv2, rho2 = setup("ee", k, 1.0)
        liouv3, rho3 = setup("eee", k, 1.0)
        e2 = log_negativity(two_photon_state(rho2, liouv2).matrix, PHPH_SPLIT)
        e3 = log_negativity(two_photon_state(rho3, liouv3).matrix, PHPH_SPLIT)
        assert 0.0 < e3 < e2

    def test_pre_trace_object_consistency(self):
        for initial, s, k in (("ee", 0.7, 1.3), ("eee", 0.5, 0.9)):
            liouv, rho = setup(initial, k, s)
            big = two_photon_with_atoms(rho, liouv)
            g = 2 ** len(initial)
            tensor = big.reshape(g, 16, g, 16)
            photons_only = np.einsum("apaq->pq", tensor)
            state = two_photon_state(rho, liouv)
            assert np.max(np.abs(photons_only - state.matrix)) < 1e-10
            atoms_only = np.einsum("apbp->ab", tensor)
            final = ground_block(liouv.asymptotic_map(rho.matrix), len(initial))
            assert np.max(np.abs(atoms_only - final)) < 1e-10

    def test_joint_state_trace_validation(self):
        from lambda_relax.detection import JointPhotonState
        from lambda_relax.states import NumericalFailureError

        mat = np.zeros((8, 8), dtype=complex)
        mat[0, 0] = 0.9
        with pytest.raises(NumericalFailureError, match="trace"):
            JointPhotonState(mat, n_atoms=1, kind="atom_photon")


class TestAtomPhotonReduction:
    def test_single_atom_is_identity(self):
        liouv, rho = setup("e", 0.0, 0.3)
        joint = one_photon_joint(rho, liouv)
        reduced = atom_photon_reduction(joint, 1)
        assert np.allclose(reduced.matrix, joint.matrix, atol=1e-12)

    def test_exchange_symmetric_pair(self):
        for s in (0.3, 1.0):
            liouv, rho = setup("ee", 1.0, s)
            joint = one_photon_joint(rho, liouv)
            assert abs(
                atom_photon_negativity(joint, 1) - atom_photon_negativity(joint, 2)
            ) < 1e-10

    def test_monogamy_reduces_negativity(self):
        for s, k in ((0.0, 0.9), (1.0, 2.0)):
            liouv2, rho2 = setup("ee", k, s)
            liouv3, rho3 = setup("eee", k, s)
            j2 = one_photon_joint(rho2, liouv2)
            j3 = one_photon_joint(rho3, liouv3)
            e2 = min(atom_photon_negativity(j2, j) for j in (1, 2))
            e3 = max(atom_photon_negativity(j3, j) for j in (1, 2, 3))
            assert e3 < e2

    def test_index_out_of_range(self):
        liouv, rho = setup("ee", 1.0, 0.5)
        joint = one_photon_joint(rho, liouv)
        with pytest.raises(ValueError):
            atom_photon_reduction(joint, 3)
