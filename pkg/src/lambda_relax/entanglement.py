"""Entanglement quantifiers: Wootters concurrence, logarithmic negativity, PPT.

Concurrence applies to two-qubit states; negativity and the positive partial
transpose test work for arbitrary bipartitions of a multipartite space, which
covers atom-atom, atom-photon (2 x 4) and photon-photon (4 x 4) splits.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .states import DensityMatrix, hermitize, partial_trace, partial_transpose

CLAMP = 1e-12  # values below this are round-off, reported as exactly 0

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class BipartitionSpec:
    """A bipartition of a tensor-product space.

    ``dims`` are the subsystem dimensions in storage order and ``side_a``
    the 0-based positions forming side A (a nonempty proper subset).
    """

    dims: tuple[int, ...]
    side_a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "side_a", tuple(sorted(set(int(i) for i in self.side_a))))
        if not self.side_a or len(self.side_a) >= len(self.dims):
            raise ValueError("side A must be a nonempty proper subset of the subsystems")
        if any(i < 0 or i >= len(self.dims) for i in self.side_a):
            raise ValueError(f"side A indices {self.side_a} out of range")


def _as_matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


_RANK_RTOL = 1e-14  # eigenvalues below this (relative) are round-off rank noise


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state, in [0, 1].

    The characteristic values l_i (decreasing) give
    C = max(0, l1 - l2 - l3 - l4).  They are computed as the singular
    values of the spin-flip overlap matrix psi^T (sy x sy) psi, where psi
    holds the sqrt-weighted eigenvectors of rho.  This equals the spectrum
    of sqrt(sqrt(rho) rho~ sqrt(rho)) but stays accurate to machine
    precision on rank-deficient states, where square-rooting the tiny
    eigenvalues of the Hermitian product would amplify round-off to 1e-8.
    """
    mat = _as_matrix(rho)
    if mat.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 two-qubit state, got {mat.shape}")
    mat = hermitize(mat)
    vals, vecs = np.linalg.eigh(mat)
    if float(vals.min()) < -1e-8:
        raise ValueError(f"state is not positive semidefinite: min eigenvalue {vals.min():.3e}")
    vals = np.clip(vals, 0.0, None)
    vals[vals < _RANK_RTOL * vals.max()] = 0.0
    psi = vecs * np.sqrt(vals)
    tau = psi.T @ _SPIN_FLIP @ psi
    lams = np.sort(np.linalg.svd(tau, compute_uv=False))[::-1]
    value = lams[0] - lams[1:].sum()
    if value < CLAMP:
        return 0.0
    return float(min(value, 1.0))


def _partial_transpose_spectrum(rho, split: BipartitionSpec) -> np.ndarray:
    mat = _as_matrix(rho)
    transposed = partial_transpose(mat, split.dims, split.side_a)
    return np.linalg.eigvalsh(hermitize(transposed))


def log_negativity(rho, split: BipartitionSpec) -> float:
    """log2 of the trace norm of the partial transpose across the split."""
    eigs = _partial_transpose_spectrum(rho, split)
    value = float(np.log2(np.abs(eigs).sum()))
    return 0.0 if value < CLAMP else value


def ppt_check(rho, split: BipartitionSpec) -> tuple[bool, float]:
    """Positive-partial-transpose test; returns (is_ppt, minimal eigenvalue)."""
    eigs = _partial_transpose_spectrum(rho, split)
    min_eig = float(eigs.min())
    return (min_eig >= -1e-10, min_eig)


def pairwise_concurrences(rho: DensityMatrix) -> np.ndarray:
    """Symmetric N x N matrix of two-qubit concurrences of a ground state.

    Entry (i, j) is the concurrence of the reduction onto atoms i+1, j+1;
    the diagonal is zero.
    """
    if rho.space != "ground":
        raise ValueError("pairwise concurrences are defined on the ground (qubit) manifold")
    n = rho.n_atoms
    if n < 2:
        raise ValueError("need at least two atoms")
    out = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            pair = partial_trace(rho, {i, j})
            out[i - 1, j - 1] = out[j - 1, i - 1] = concurrence(pair)
    return out


def atom_bipartitions(n_atoms: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All bipartitions of n qubits as (side_a, side_b) of 1-based atom labels.

    Side A is the lexicographically smaller half containing atom 1, so each
    split appears exactly once.
    """
    atoms = tuple(range(1, n_atoms + 1))
    splits = []
    for size in range(1, n_atoms):
        for side_a in combinations(atoms, size):
            side_b = tuple(a for a in atoms if a not in side_a)
            if 1 in side_a:
                splits.append((side_a, side_b))
    return splits


def bipartition_label(side: tuple[int, ...]) -> str:
    return "".join(str(a) for a in side)
