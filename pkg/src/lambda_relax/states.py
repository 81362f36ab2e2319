"""Hilbert-space conventions and operator primitives for lambda-type atom arrays.

Each atom has three levels: two degenerate ground states ``|+>``, ``|->`` and
one excited state ``|e>``.  Basis states of an N-atom array are strings over
``{+, -, e}`` with atom 1 leftmost, encoded big-endian in base 3 with the
fixed ordinal map ``+ -> 0``, ``- -> 1``, ``e -> 2``.  All rates are measured
in units of the single-atom directional decay rate gamma and positions are
dimensionless phases ``k0*z_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

MAX_ATOMS = 6

# absolute tolerances for state validation
MATRIX_ATOL = 1e-10
JOINT_TRACE_ATOL = 1e-8
JOINT_EIG_ATOL = 1e-9
GROUND_RESTRICT_ATOL = 1e-9

LEVEL_CHARS = "+-e"


class NumericalFailureError(RuntimeError):
    """A numerical routine left its guaranteed accuracy envelope."""


class AtomLevel(Enum):
    GPlus = 0
    GMinus = 1
    Excited = 2

    @property
    def char(self) -> str:
        return LEVEL_CHARS[self.value]


class Polarization(Enum):
    Plus = 0
    Minus = 1

    @property
    def ground_level(self) -> AtomLevel:
        return AtomLevel(self.value)

    @property
    def char(self) -> str:
        return "+" if self is Polarization.Plus else "-"


class Direction(Enum):
    Right = 0
    Left = 1

    @property
    def char(self) -> str:
        return ">" if self is Direction.Right else "<"


@dataclass(frozen=True)
class SystemConfig:
    """Physical instance: atom count, chirality and positions along the guide.

    Parameters
    ----------
    n_atoms : int
        Number of atoms, between 1 and 6.
    chirality : float
        Ratio s of the wrong-direction to right-direction emission rate,
        in [0, 1].  s = 0 locks each polarization to one propagation
        direction, s = 1 is the direction-symmetric (achiral) case.
    positions : tuple of float
        Dimensionless phases k0*z_j, non-decreasing.  Only differences
        enter the dynamics; equal entries describe co-located atoms
        (Bragg spacing 0).
    gamma : float
        Single-atom directional rate, the time unit.  Kept explicit for
        readability but fixed to 1 throughout.
    """

    n_atoms: int
    chirality: float
    positions: tuple[float, ...]
    gamma: float = 1.0

    def __post_init__(self):
        if not 1 <= self.n_atoms <= MAX_ATOMS:
            raise ValueError(f"n_atoms must be in 1..{MAX_ATOMS}, got {self.n_atoms}")
        if not 0.0 <= self.chirality <= 1.0:
            raise ValueError(f"chirality must be in [0, 1], got {self.chirality}")
        object.__setattr__(self, "positions", tuple(float(z) for z in self.positions))
        if len(self.positions) != self.n_atoms:
            raise ValueError("positions must have one entry per atom")
        if any(b < a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError("positions must be non-decreasing")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    @classmethod
    def equidistant(cls, n_atoms: int, spacing: float, chirality: float) -> "SystemConfig":
        """Array with uniform phase spacing k0*d between neighbours."""
        return cls(n_atoms, chirality, tuple(j * spacing for j in range(n_atoms)))

    @property
    def dim(self) -> int:
        return 3**self.n_atoms

    @property
    def ground_dim(self) -> int:
        return 2**self.n_atoms


def validate_ket(ket: str, n_atoms: int) -> str:
    """Check length and alphabet of a basis-state string."""
    if len(ket) != n_atoms:
        raise ValueError(f"ket {ket!r} has length {len(ket)}, expected {n_atoms}")
    bad = set(ket) - set(LEVEL_CHARS)
    if bad:
        raise ValueError(f"ket {ket!r} contains invalid characters {sorted(bad)}")
    return ket


def basis_index(ket: str, config: SystemConfig) -> int:
    """Row/column index of a basis state, big-endian base 3 (atom 1 most significant)."""
    validate_ket(ket, config.n_atoms)
    index = 0
    for ch in ket:
        index = 3 * index + LEVEL_CHARS.index(ch)
    return index


def index_to_ket(index: int, config: SystemConfig) -> str:
    """Inverse of :func:`basis_index`."""
    if not 0 <= index < config.dim:
        raise ValueError(f"index {index} out of range for {config.n_atoms} atoms")
    digits = []
    for _ in range(config.n_atoms):
        index, r = divmod(index, 3)
        digits.append(LEVEL_CHARS[r])
    return "".join(reversed(digits))


def ket_vector(ket: str, config: SystemConfig) -> np.ndarray:
    """Unit vector of a product basis state on the full 3^N space."""
    vec = np.zeros(config.dim, dtype=complex)
    vec[basis_index(ket, config)] = 1.0
    return vec


def excitation_counts(config: SystemConfig) -> np.ndarray:
    """Number of excited atoms for every basis index (length 3^N)."""
    counts = np.zeros(config.dim, dtype=int)
    for i in range(config.dim):
        counts[i] = index_to_ket(i, config).count("e")
    return counts


def ground_basis_index(ket: str) -> int:
    """Index of a ground-manifold string over {+, -}, big-endian binary (+ -> 0)."""
    bad = set(ket) - {"+", "-"}
    if bad:
        raise ValueError(f"ground ket {ket!r} contains invalid characters {sorted(bad)}")
    index = 0
    for ch in ket:
        index = 2 * index + ("+-".index(ch))
    return index


def ground_ket_vector(ket: str) -> np.ndarray:
    """Unit vector of a ground basis string on the 2^N qubit space."""
    vec = np.zeros(2 ** len(ket), dtype=complex)
    vec[ground_basis_index(ket)] = 1.0
    return vec


def ground_indices(n_atoms: int) -> np.ndarray:
    """Full-space indices of the 2^N ground basis states, in qubit order."""
    idx = np.zeros(2**n_atoms, dtype=int)
    for g in range(2**n_atoms):
        full = 0
        for bit in format(g, f"0{n_atoms}b"):
            full = 3 * full + int(bit)
        idx[g] = full
    return idx


# ---------------------------------------------------------------------------
# density matrices


def _space_tolerances(space: str) -> tuple[float, float, float]:
    # (hermiticity, trace, eigenvalue floor)
    if space == "joint":
        return (JOINT_TRACE_ATOL, JOINT_TRACE_ATOL, JOINT_EIG_ATOL)
    return (MATRIX_ATOL, MATRIX_ATOL, MATRIX_ATOL)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix plus a space tag.

    ``space`` is ``"full"`` (3^N), ``"ground"`` (2^N qubit manifold) or
    ``"joint"`` (composite atom/photon spaces).  The stored array is made
    read-only, so instances are safe to share between workers.
    """

    matrix: np.ndarray
    space: str = "full"

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        if self.space not in ("full", "ground", "joint"):
            raise ValueError(f"unknown space tag {self.space!r}")
        herm_tol, trace_tol, eig_tol = _space_tolerances(self.space)
        herm_err = np.max(np.abs(mat - mat.conj().T))
        if herm_err > herm_tol:
            raise ValueError(f"matrix not Hermitian: deviation {herm_err:.3e}")
        trace_err = abs(mat.trace() - 1.0)
        if trace_err > trace_tol:
            raise ValueError(f"trace deviates from 1 by {trace_err:.3e}")
        min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2).min())
        if min_eig < -eig_tol:
            raise ValueError(f"matrix not positive semidefinite: min eigenvalue {min_eig:.3e}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_atoms(self) -> int:
        base = {"full": 3, "ground": 2}.get(self.space)
        if base is None:
            raise ValueError("joint states carry no per-atom structure")
        n = round(math.log(self.dim, base))
        if base**n != self.dim:
            raise ValueError(f"dimension {self.dim} is not a power of {base}")
        return n

    def site_dim(self) -> int:
        return 3 if self.space == "full" else 2


def ket_density_matrix(ket: str, config: SystemConfig) -> DensityMatrix:
    """Projector onto a product basis state of the full space."""
    vec = ket_vector(ket, config)
    return DensityMatrix(np.outer(vec, vec.conj()), space="full")


def hermitize(mat: np.ndarray) -> np.ndarray:
    """Average away round-off asymmetry, (X + X^dag)/2."""
    return (mat + mat.conj().T) / 2


# ---------------------------------------------------------------------------
# jump operators


def _single_site_lower(sigma: Polarization) -> np.ndarray:
    op = np.zeros((3, 3), dtype=complex)
    op[sigma.ground_level.value, AtomLevel.Excited.value] = 1.0
    return op


def jump_operator(i: int, sigma: Polarization, config: SystemConfig) -> np.ndarray:
    """Lowering operator |sigma><e| on atom i (1-based), identity elsewhere."""
    if not 1 <= i <= config.n_atoms:
        raise ValueError(f"atom index {i} out of range 1..{config.n_atoms}")
    op = np.eye(1, dtype=complex)
    for site in range(1, config.n_atoms + 1):
        factor = _single_site_lower(sigma) if site == i else np.eye(3, dtype=complex)
        op = np.kron(op, factor)
    return op


def directional_rate(sigma: Polarization, delta: Direction, config: SystemConfig) -> float:
    """Emission rate of a sigma photon moving in direction delta.

    Time-reversal pairing: the (+, right) and (-, left) channels carry the
    full rate gamma, the two cross channels the reduced rate s*gamma.
    """
    aligned = (sigma is Polarization.Plus) == (delta is Direction.Right)
    return config.gamma if aligned else config.chirality * config.gamma


def collective_jump(sigma: Polarization, delta: Direction, config: SystemConfig) -> np.ndarray:
    """Collective lowering operator for a sigma photon emitted in direction delta.

    sqrt(rate) * sum_j b_{j,sigma} exp(-+ i k0 z_j), with the minus phase for
    right propagation and plus for left.
    """
    rate = directional_rate(sigma, delta, config)
    sign = -1.0 if delta is Direction.Right else 1.0
    op = np.zeros((config.dim, config.dim), dtype=complex)
    for j in range(1, config.n_atoms + 1):
        phase = np.exp(sign * 1j * config.positions[j - 1])
        op += phase * jump_operator(j, sigma, config)
    return np.sqrt(rate) * op


def excitation_number_operator(config: SystemConfig) -> np.ndarray:
    """Diagonal operator counting excited atoms."""
    return np.diag(excitation_counts(config).astype(complex))


# ---------------------------------------------------------------------------
# partial trace / transpose / ground restriction


def _as_matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on a subset of atoms.

    Parameters
    ----------
    rho : DensityMatrix
        State on the full or ground space of N atoms.
    keep : iterable of int
        1-based atom indices to retain; must be nonempty.

    Returns
    -------
    DensityMatrix on the same kind of space over the kept atoms, in the
    original atom order.
    """
    keep = sorted(set(keep))
    n = rho.n_atoms
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"keep indices {keep} out of range 1..{n}")
    d = rho.site_dim()
    tensor = rho.matrix.reshape((d,) * (2 * n))
    ket_letters = [chr(ord("a") + k) for k in range(n)]
    bra_letters = []
    out_ket, out_bra = [], []
    next_code = ord("a") + n
    for site in range(1, n + 1):
        if site in keep:
            letter = chr(next_code)
            next_code += 1
            bra_letters.append(letter)
            out_ket.append(ket_letters[site - 1])
            out_bra.append(letter)
        else:
            bra_letters.append(ket_letters[site - 1])
    spec = "".join(ket_letters) + "".join(bra_letters) + "->" + "".join(out_ket + out_bra)
    reduced = np.einsum(spec, tensor).reshape(d ** len(keep), d ** len(keep))
    return DensityMatrix(hermitize(reduced), space=rho.space)


def partial_transpose(mat, dims, transposed) -> np.ndarray:
    """Transpose the indices of selected tensor factors.

    Parameters
    ----------
    mat : array or DensityMatrix
        Square matrix on the tensor product of subsystems with dimensions
        ``dims``.
    dims : sequence of int
        Subsystem dimensions; their product must equal the matrix dimension.
    transposed : iterable of int
        0-based positions in ``dims`` whose ket/bra indices are swapped.

    The operation is an involution and preserves Hermiticity and trace.
    """
    mat = _as_matrix(mat)
    dims = tuple(int(d) for d in dims)
    k = len(dims)
    if int(np.prod(dims)) != mat.shape[0]:
        raise ValueError(f"dims {dims} do not factor dimension {mat.shape[0]}")
    transposed = set(transposed)
    if not transposed <= set(range(k)):
        raise ValueError(f"transposed positions {sorted(transposed)} out of range")
    tensor = mat.reshape(dims + dims)
    axes = list(range(2 * k))
    for pos in transposed:
        axes[pos], axes[k + pos] = axes[k + pos], axes[pos]
    return tensor.transpose(axes).reshape(mat.shape)


def ground_block(mat: np.ndarray, n_atoms: int) -> np.ndarray:
    """Raw 2^N x 2^N ground-manifold block of a full-space operator."""
    idx = ground_indices(n_atoms)
    return np.asarray(mat)[np.ix_(idx, idx)]


def restrict_to_ground(rho: DensityMatrix) -> DensityMatrix:
    """Project a fully relaxed state onto the qubit (ground) manifold.

    Requires the population outside the ground manifold to be below
    ``GROUND_RESTRICT_ATOL``; the returned 2^N state is renormalized.
    """
    if rho.space != "full":
        raise ValueError("restrict_to_ground expects a full-space state")
    n = rho.n_atoms
    block = ground_block(rho.matrix, n)
    outside = 1.0 - float(block.trace().real)
    if outside > GROUND_RESTRICT_ATOL:
        raise ValueError(
            f"population outside the ground manifold is {outside:.3e}; state not fully relaxed"
        )
    return DensityMatrix(hermitize(block / block.trace().real), space="ground")
