"""Joint states of the relaxed atoms and detected photons.

A detected photon carries a polarization and a propagation direction, a
4-dimensional index with fixed ordinal order (+,right), (+,left), (-,right),
(-,left).  Detection-time-averaged quantities follow from the kernel-excluded
inverse of the generator: integrating the emission record over the detection
time turns exp(L t) into -L^D, and the stray kernel component is irrelevant
because a lowering operator is applied right after.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entanglement import BipartitionSpec, log_negativity
from .liouvillian import Liouvillian
from .states import (
    DensityMatrix,
    Direction,
    NumericalFailureError,
    Polarization,
    excitation_number_operator,
    ground_block,
    hermitize,
)

PHOTON_CHANNELS: tuple[tuple[Polarization, Direction], ...] = tuple(
    (s, d) for s in Polarization for d in Direction
)
PHOTON_LEGEND = tuple(f"({s.char},{'right' if d is Direction.Right else 'left'})" for s, d in PHOTON_CHANNELS)

TRACE_ATOL = 1e-6
MIN_DETECTION_PROBABILITY = 1e-12


@dataclass(frozen=True)
class PhotonIndex:
    """Polarization/direction pair with its flattened ordinal 0..3."""

    sigma: Polarization
    delta: Direction

    @property
    def ordinal(self) -> int:
        return PHOTON_CHANNELS.index((self.sigma, self.delta))


@dataclass(frozen=True)
class JointPhotonState:
    """Density matrix over (ground atoms x photon) or (photon x photon).

    ``kind`` is ``"atom_photon"`` (dimension 4 * 2^N, atom index slower)
    or ``"photon_photon"`` (16 x 16, first detected photon slower).
    """

    matrix: np.ndarray
    n_atoms: int
    kind: str

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        expected = 4 * 2**self.n_atoms if self.kind == "atom_photon" else 16
        if self.kind not in ("atom_photon", "photon_photon"):
            raise ValueError(f"unknown joint kind {self.kind!r}")
        if mat.shape != (expected, expected):
            raise ValueError(f"joint matrix shape {mat.shape}, expected {(expected, expected)}")
        herm_err = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_err > 1e-8:
            raise ValueError(f"joint matrix not Hermitian: deviation {herm_err:.3e}")
        trace_err = abs(mat.trace() - 1.0)
        if trace_err > TRACE_ATOL:
            raise NumericalFailureError(f"joint state trace deviates from 1 by {trace_err:.3e}")
        min_eig = float(np.linalg.eigvalsh(hermitize(mat)).min())
        if min_eig < -1e-9:
            raise ValueError(f"joint state not positive semidefinite: {min_eig:.3e}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dims(self) -> tuple[int, ...]:
        if self.kind == "atom_photon":
            return (2,) * self.n_atoms + (4,)
        return (4, 4)


def emitted_photon_count(rho0, config) -> float:
    """Expected number of emitted photons, Tr(n_e rho0).

    Every initial excitation relaxes by emitting exactly one guided photon,
    so for a basis string this is simply its count of 'e' characters.
    """
    if isinstance(rho0, str):
        return float(rho0.count("e"))
    mat = rho0.matrix if isinstance(rho0, DensityMatrix) else np.asarray(rho0)
    return float(np.real(np.trace(excitation_number_operator(config) @ mat)))


def _photon_ops(liouv: Liouvillian) -> list[np.ndarray]:
    return [liouv.collective_operator(*c) for c in PHOTON_CHANNELS]


def _assemble_atom_photon(blocks: np.ndarray) -> np.ndarray:
    # blocks[p, p', a, a'] -> matrix[(a p), (a' p')]
    g = blocks.shape[-1]
    return blocks.transpose(2, 0, 3, 1).reshape(4 * g, 4 * g)


def one_photon_from_relaxation(liouv: Liouvillian, relaxed: np.ndarray, n0: float) -> JointPhotonState:
    """Assemble the atoms+photon state from a precomputed L^D output.

    Separated from :func:`one_photon_joint` so the insensitivity to the
    kernel component of ``relaxed`` can be exercised directly.
    """
    n = liouv.config.n_atoms
    g = 2**n
    ops = _photon_ops(liouv)
    blocks = np.zeros((4, 4, g, g), dtype=complex)
    for p, bp in enumerate(ops):
        for q, bq in enumerate(ops):
            emitted = liouv.asymptotic_map(bp @ relaxed @ bq.conj().T)
            blocks[p, q] = -ground_block(emitted, n) / n0
    return JointPhotonState(hermitize(_assemble_atom_photon(blocks)), n_atoms=n, kind="atom_photon")


def one_photon_joint(rho0: DensityMatrix, liouv: Liouvillian) -> JointPhotonState:
    """Detection-time-averaged joint state of the relaxed atoms and one photon."""
    n0 = emitted_photon_count(rho0, liouv.config)
    if n0 < 1.0 - 1e-9:
        raise ValueError(f"single-photon detection needs at least one excitation, N0 = {n0:.3g}")
    relaxed = liouv.drazin_apply(rho0.matrix)
    return one_photon_from_relaxation(liouv, relaxed, n0)


def one_photon_time_resolved(rho0: DensityMatrix, liouv: Liouvillian, t: float,
                             method: str = "ivp") -> np.ndarray:
    """Unnormalized joint matrix for a photon detected at time t.

    Integrated over all detection times this reproduces N0 times the
    averaged joint state.
    """
    n0 = emitted_photon_count(rho0, liouv.config)
    if n0 < 1.0 - 1e-9:
        raise ValueError(f"single-photon detection needs at least one excitation, N0 = {n0:.3g}")
    n = liouv.config.n_atoms
    g = 2**n
    evolved = liouv.propagate(rho0.matrix, t, method=method)
    ops = _photon_ops(liouv)
    blocks = np.zeros((4, 4, g, g), dtype=complex)
    for p, bp in enumerate(ops):
        for q, bq in enumerate(ops):
            emitted = liouv.asymptotic_map(bp @ evolved @ bq.conj().T)
            blocks[p, q] = ground_block(emitted, n)
    return hermitize(_assemble_atom_photon(blocks))


def condition_on_polarization(joint: JointPhotonState, sigma: Polarization) -> DensityMatrix:
    """Atomic state after a photon of polarization sigma was detected.

    Sums the photon-diagonal blocks over both propagation directions and
    renormalizes; detection probabilities below 1e-12 are an error.
    """
    if joint.kind != "atom_photon":
        raise ValueError("conditioning needs an atoms+photon joint state")
    g = 2**joint.n_atoms
    tensor = joint.matrix.reshape(g, 4, g, 4)
    ordinals = [p for p, (s, _d) in enumerate(PHOTON_CHANNELS) if s is sigma]
    atoms = sum(tensor[:, p, :, p] for p in ordinals)
    prob = float(np.real(np.trace(atoms)))
    if prob < MIN_DETECTION_PROBABILITY:
        raise ValueError(f"detection probability {prob:.3e} too small to condition on")
    return DensityMatrix(hermitize(atoms / prob), space="ground")


def detection_probability(joint: JointPhotonState, sigma: Polarization) -> float:
    """Probability that the detected photon has polarization sigma."""
    g = 2**joint.n_atoms
    tensor = joint.matrix.reshape(g, 4, g, 4)
    ordinals = [p for p, (s, _d) in enumerate(PHOTON_CHANNELS) if s is sigma]
    return float(np.real(sum(np.trace(tensor[:, p, :, p]) for p in ordinals)))


def two_photon_state(rho0: DensityMatrix, liouv: Liouvillian) -> JointPhotonState:
    """Two detected photons, averaged over both detection times and the atoms.

    16 x 16 matrix with row index (p1, p2), the first detected photon
    varying slower.
    """
    n0 = emitted_photon_count(rho0, liouv.config)
    if n0 < 2.0 - 1e-9:
        raise ValueError(f"two-photon detection needs at least two excitations, N0 = {n0:.3g}")
    ops = _photon_ops(liouv)
    relaxed = liouv.drazin_apply(rho0.matrix)
    prefactor = 2.0 / (n0 * (n0 - 1.0))
    out = np.zeros((16, 16), dtype=complex)
    for p1, b1 in enumerate(ops):
        for q1, c1 in enumerate(ops):
            inner = liouv.drazin_apply(b1 @ relaxed @ c1.conj().T)
            for p2, b2 in enumerate(ops):
                for q2, c2 in enumerate(ops):
                    value = np.trace(b2 @ inner @ c2.conj().T)
                    out[p1 * 4 + p2, q1 * 4 + q2] = prefactor * value
    return JointPhotonState(hermitize(out), n_atoms=liouv.config.n_atoms, kind="photon_photon")


def two_photon_with_atoms(rho0: DensityMatrix, liouv: Liouvillian) -> np.ndarray:
    """Pre-trace atoms x photon x photon object behind :func:`two_photon_state`.

    Index layout (a, p1, p2); tracing the atoms recovers the two-photon
    matrix, tracing the photons recovers the unconditioned final state.
    """
    n0 = emitted_photon_count(rho0, liouv.config)
    if n0 < 2.0 - 1e-9:
        raise ValueError(f"two-photon detection needs at least two excitations, N0 = {n0:.3g}")
    n = liouv.config.n_atoms
    g = 2**n
    ops = _photon_ops(liouv)
    relaxed = liouv.drazin_apply(rho0.matrix)
    prefactor = 2.0 / (n0 * (n0 - 1.0))
    blocks = np.zeros((16, 16, g, g), dtype=complex)
    for p1, b1 in enumerate(ops):
        for q1, c1 in enumerate(ops):
            inner = liouv.drazin_apply(b1 @ relaxed @ c1.conj().T)
            for p2, b2 in enumerate(ops):
                for q2, c2 in enumerate(ops):
                    settled = liouv.asymptotic_map(b2 @ inner @ c2.conj().T)
                    blocks[p1 * 4 + p2, q1 * 4 + q2] = prefactor * ground_block(settled, n)
    out = blocks.transpose(2, 0, 3, 1).reshape(g * 16, g * 16)
    return hermitize(out)


def atom_photon_reduction(joint: JointPhotonState, j: int) -> DensityMatrix:
    """Reduced state of atom j (1-based) and the detected photon.

    The subsystem order of the input is kept: (atom j) x photon, 8x8.
    """
    if joint.kind != "atom_photon":
        raise ValueError("reduction needs an atoms+photon joint state")
    n = joint.n_atoms
    if not 1 <= j <= n:
        raise ValueError(f"atom index {j} out of range 1..{n}")
    dims = (2,) * n + (4,)
    tensor = joint.matrix.reshape(dims + dims)
    k = n + 1
    keep = {j - 1, n}
    letters = [chr(ord("a") + i) for i in range(k)]
    bra, out_ket, out_bra = [], [], []
    code = ord("a") + k
    for pos in range(k):
        if pos in keep:
            fresh = chr(code)
            code += 1
            bra.append(fresh)
            out_ket.append(letters[pos])
            out_bra.append(fresh)
        else:
            bra.append(letters[pos])
    spec = "".join(letters) + "".join(bra) + "->" + "".join(out_ket + out_bra)
    reduced = np.einsum(spec, tensor).reshape(8, 8)
    return DensityMatrix(hermitize(reduced), space="joint")


def atom_photon_negativity(joint: JointPhotonState, j: int) -> float:
    """Logarithmic negativity between the photon and atom j."""
    reduced = atom_photon_reduction(joint, j)
    return log_negativity(reduced, BipartitionSpec(dims=(2, 4), side_a=(1,)))
