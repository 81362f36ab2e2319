"""Collective relaxation of lambda-type atom arrays coupled to a chiral waveguide.

The package computes exact relaxation dynamics, asymptotic (steady) states,
photon-detection conditioned states and entanglement measures for arrays of
up to six three-level atoms with two degenerate ground states.
"""

from .detection import (
    PHOTON_CHANNELS,
    PHOTON_LEGEND,
    JointPhotonState,
    PhotonIndex,
    atom_photon_negativity,
    atom_photon_reduction,
    condition_on_polarization,
    detection_probability,
    emitted_photon_count,
    one_photon_joint,
    one_photon_time_resolved,
    two_photon_state,
    two_photon_with_atoms,
)
from .entanglement import (
    BipartitionSpec,
    atom_bipartitions,
    concurrence,
    log_negativity,
    pairwise_concurrences,
    ppt_check,
)
from .liouvillian import DecayMatrix, Liouvillian, SpectralData, decay_matrix
from .reference import (
    CATALOG,
    ReferenceCase,
    exact_conditioned_concurrence,
    exact_conditioned_state,
    exact_final_state,
)
from .serialize import from_json, to_json
from .states import (
    AtomLevel,
    DensityMatrix,
    Direction,
    NumericalFailureError,
    Polarization,
    SystemConfig,
    basis_index,
    collective_jump,
    excitation_number_operator,
    ground_block,
    jump_operator,
    ket_density_matrix,
    ket_vector,
    partial_trace,
    partial_transpose,
    restrict_to_ground,
)
from .sweep import QUANTITIES, SweepRow, SweepSpec, figure_preset, run_sweep

__version__ = "0.1.0"
