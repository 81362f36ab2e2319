"""Chiral Lindblad generator for a lambda-atom array and its relaxation maps.

The generator acts on operators of the full 3^N space,

    L[X] = sum_{ij,sigma} gamma_ij^(sigma) (b_{j,s} X b_{i,s}^+
                                            - b_{i,s}^+ b_{j,s} X)  + H.c.

Grouping the terms gives L = J + D with a jump part
J[X] = sum_c B_c X B_c^+ over the four collective channels
c = (polarization, direction) and a drift part D[X] = -(M X + X M^+),
M = sum_{ij,sigma} gamma_ij^(sigma) b_{i,s}^+ b_{j,s}.

Operator space splits into sectors labelled by the excited-atom count of
the ket and bra sides.  D preserves a sector (m, n) and is invertible away
from (0, 0) since every eigenvalue of M on an excited subspace has positive
real part, while J lowers (m, n) to (m-1, n-1).  Relaxation is therefore
block triangular, and the asymptotic map can be evaluated exactly by a
cascade of Sylvester solves instead of a fragile eigendecomposition of the
9^N superoperator; the dense spectral route is kept as a diagnostic backend
for N <= 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.integrate import solve_ivp

from .states import (
    DensityMatrix,
    Direction,
    NumericalFailureError,
    Polarization,
    SystemConfig,
    collective_jump,
    excitation_counts,
    hermitize,
    jump_operator,
)

NULL_SPACE_RTOL = 1e-9     # |lambda| < rtol * max|lambda| counts as kernel
DRAZIN_RESIDUAL_ATOL = 1e-8
LONG_TIME = 50.0           # in units of 1/gamma, for the integration backend
IVP_RTOL = 1e-11
IVP_ATOL = 1e-13


@dataclass(frozen=True)
class DecayMatrix:
    """Directional decay kernel gamma_ij for one photon polarization."""

    sigma: Polarization
    entries: np.ndarray


def decay_matrix(config: SystemConfig, sigma: Polarization) -> DecayMatrix:
    """N x N kernel gamma_ij^(sigma).

    Entry (i, j) carries the phase exp(i k0 |z_i - z_j|) times the rate of
    the channel connecting the pair: the full rate gamma when the photon
    travels from j to i along its locked direction, s*gamma for the reverse,
    and the mean of both on the diagonal.
    """
    g_right = config.gamma if sigma is Polarization.Plus else config.chirality * config.gamma
    g_left = config.chirality * config.gamma if sigma is Polarization.Plus else config.gamma
    n = config.n_atoms
    z = np.asarray(config.positions)
    entries = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            phase = np.exp(1j * abs(z[i] - z[j]))
            if i > j:
                rate = g_right
            elif i < j:
                rate = g_left
            else:
                rate = 0.5 * (g_right + g_left)
            entries[i, j] = phase * rate
    return DecayMatrix(sigma=sigma, entries=entries)


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition of the dense superoperator (diagnostic, N <= 3).

    ``right`` holds right eigenvectors as columns, ``left`` the matching
    left eigenvectors with Tr(V^+ U) biorthonormality, ``null_mask`` flags
    the zero modes (4^N of them).
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    null_mask: np.ndarray


class Liouvillian:
    """Relaxation generator bound to one :class:`SystemConfig`.

    Construction precomputes the jump operators, the four collective
    channels, the drift generator M and the excitation-sector bookkeeping.
    All methods are pure with respect to the instance and reentrant.
    """

    def __init__(self, config: SystemConfig):
        self.config = config
        self.dim = config.dim
        self.decay = {s: decay_matrix(config, s) for s in Polarization}

        self._b = {
            (i, s): jump_operator(i, s, config)
            for i in range(1, config.n_atoms + 1)
            for s in Polarization
        }
        self.channels = [(s, d) for s in Polarization for d in Direction]
        self._collective = {c: collective_jump(*c, config) for c in self.channels}
        self._collective_dag = {c: op.conj().T for c, op in self._collective.items()}

        drift = np.zeros((self.dim, self.dim), dtype=complex)
        for s in Polarization:
            g = self.decay[s].entries
            for i in range(1, config.n_atoms + 1):
                for j in range(1, config.n_atoms + 1):
                    drift += g[i - 1, j - 1] * (self._b[(i, s)].conj().T @ self._b[(j, s)])
        self._m = drift

        exc = excitation_counts(config)
        self._sector_idx = [np.where(exc == m)[0] for m in range(config.n_atoms + 1)]
        self._m_blocks = [self._m[np.ix_(ix, ix)] for ix in self._sector_idx]
        # smallest decay margin per excited subspace; zero means a dark state
        self._re_margin = [
            0.0 if m == 0 else float(np.linalg.eigvals(self._m_blocks[m]).real.min())
            for m in range(config.n_atoms + 1)
        ]
        self._spectral = None

    # -- basic action -------------------------------------------------

    def collective_operator(self, sigma: Polarization, delta: Direction) -> np.ndarray:
        """Precomputed collective jump operator for one emission channel."""
        return self._collective[(sigma, delta)]

    def jump_part(self, x: np.ndarray) -> np.ndarray:
        """sum_c B_c X B_c^+ over the four collective channels."""
        out = np.zeros_like(x, dtype=complex)
        for c in self.channels:
            out += self._collective[c] @ x @ self._collective_dag[c]
        return out

    def drift_part(self, x: np.ndarray) -> np.ndarray:
        """-(M X + X M^+), the sector-preserving half of the generator."""
        return -(self._m @ x + x @ self._m.conj().T)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Action of the full generator on an operator."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.dim, self.dim):
            raise ValueError(f"operator shape {x.shape} does not match dimension {self.dim}")
        return self.jump_part(x) + self.drift_part(x)

    # -- sector machinery ---------------------------------------------

    def _sector_solve(self, m: int, n: int, rhs: np.ndarray) -> np.ndarray:
        """Solve D[Y] = rhs inside sector (m, n), i.e. M_m Y + Y M_n^+ = -rhs.

        At isolated parameter points (Bragg-spaced achiral arrays with
        N >= 3) perfectly dark excited modes make the drift singular.  Dark
        modes are annihilated by every collective jump operator, so when
        the right-hand side never feeds them the solution is still unique
        up to an irrelevant kernel component and is obtained by least
        squares; a genuinely trapped mode leaves a residual and raises.
        """
        a = self._m_blocks[m]
        b = self._m_blocks[n].conj().T
        if self._re_margin[m] + self._re_margin[n] > 1e-10:
            return sla.solve_sylvester(a, b, -rhs)
        eye_a = np.eye(a.shape[0])
        eye_b = np.eye(b.shape[0])
        # row-major vec: vec(A Y + Y B) = (A x I + I x B^T) vec(Y)
        op = np.kron(a, eye_b) + np.kron(eye_a, b.T)
        y, *_ = np.linalg.lstsq(op, -rhs.ravel(), rcond=None)
        y = y.reshape(rhs.shape)
        residual = float(np.max(np.abs(a @ y + y @ b + rhs)))
        if residual > 1e-9 * max(1.0, float(np.max(np.abs(rhs)))):
            raise NumericalFailureError(
                f"drift generator is singular in sector ({m}, {n}) and the "
                f"relaxation flow feeds a non-decaying mode (residual {residual:.3e})"
            )
        return y

    def _block(self, x: np.ndarray, m: int, n: int) -> np.ndarray:
        return x[np.ix_(self._sector_idx[m], self._sector_idx[n])]

    def _embed(self, block: np.ndarray, m: int, n: int) -> np.ndarray:
        full = np.zeros((self.dim, self.dim), dtype=complex)
        full[np.ix_(self._sector_idx[m], self._sector_idx[n])] = block
        return full

    def _cascade_ground(self, x: np.ndarray) -> np.ndarray:
        """Ground-sector limit sum_m (-J D^-1)^m of the diagonal sectors of x."""
        n_atoms = self.config.n_atoms
        total = self._block(x, 0, 0).copy()
        for m in range(1, n_atoms + 1):
            cur = self._block(x, m, m)
            if not np.any(cur):
                continue
            for k in range(m, 0, -1):
                y = self._sector_solve(k, k, cur)
                cur = -self._block(self.jump_part(self._embed(y, k, k)), k - 1, k - 1)
            total += cur
        return total

    def asymptotic_map(self, x: np.ndarray, method: str = "cascade") -> np.ndarray:
        """Projection of an arbitrary operator onto the stationary subspace.

        Off-diagonal excitation sectors decay to zero, so only the diagonal
        chain contributes; the result is supported on the ground manifold.
        Backends: exact sector ``cascade`` (default), dense ``spectral``
        projection (N <= 3) and brute-force ``integrate`` to t = 50/gamma.
        """
        x = np.asarray(x, dtype=complex)
        if method == "cascade":
            return self._embed(self._cascade_ground(x), 0, 0)
        if method == "spectral":
            data = self.spectral_decompose()
            r_null = data.right[:, data.null_mask]
            weights = data.left[:, data.null_mask].conj().T @ x.ravel()
            return (r_null @ weights).reshape(self.dim, self.dim)
        if method == "integrate":
            return self.propagate(x, LONG_TIME / self.config.gamma)
        raise ValueError(f"unknown asymptotic backend {method!r}")

    def asymptotic_state(self, rho: DensityMatrix, method: str = "cascade") -> DensityMatrix:
        """Final state M_infinity[rho], supported on the ground manifold."""
        return DensityMatrix(hermitize(self.asymptotic_map(rho.matrix, method)), space="full")

    # -- Drazin inverse -----------------------------------------------

    def drazin_apply(self, x: np.ndarray) -> np.ndarray:
        """Kernel-excluded inverse: Y with L[Y] = X - P0[X] and P0[Y] = 0.

        P0 is the projection onto the stationary subspace (asymptotic_map).
        Solved by back-substitution down the excitation chains, mirroring
        the asymptotic cascade; the defining identity is re-checked and a
        residual above ``DRAZIN_RESIDUAL_ATOL`` raises.
        """
        x = np.asarray(x, dtype=complex)
        n_atoms = self.config.n_atoms
        y = np.zeros((self.dim, self.dim), dtype=complex)
        for sector_sum in range(2 * n_atoms, 0, -1):
            for m in range(min(sector_sum, n_atoms), -1, -1):
                n = sector_sum - m
                if n < 0 or n > n_atoms:
                    continue
                rhs = self._block(x, m, n)
                if m + 1 <= n_atoms and n + 1 <= n_atoms:
                    upper = self._block(y, m + 1, n + 1)
                    if np.any(upper):
                        rhs = rhs - self._block(
                            self.jump_part(self._embed(upper, m + 1, n + 1)), m, n
                        )
                if not np.any(rhs):
                    continue
                y[np.ix_(self._sector_idx[m], self._sector_idx[n])] = self._sector_solve(
                    m, n, rhs
                )
        # the loop never touches sector (0, 0); fix that free kernel
        # component so that P0[Y] = 0
        y[np.ix_(self._sector_idx[0], self._sector_idx[0])] = -self._cascade_ground(y)

        residual = self.apply(y) - (x - self.asymptotic_map(x))
        err = float(np.max(np.abs(residual)))
        if err > DRAZIN_RESIDUAL_ATOL:
            raise NumericalFailureError(f"Drazin solve residual {err:.3e}")
        return y

    # -- time evolution -----------------------------------------------

    def propagate(self, x: np.ndarray, t: float, method: str = "ivp") -> np.ndarray:
        """exp(L t) applied to an operator (raw, no state validation)."""
        if t < 0:
            raise ValueError("propagation time must be nonnegative")
        x = np.asarray(x, dtype=complex)
        if t == 0:
            return x.copy()
        if method == "spectral":
            data = self.spectral_decompose()
            # zero modes are exactly stationary and decaying modes cannot
            # grow; clamping removes 1e-15-level eigenvalue noise that would
            # explode exp(lambda t) at very large times
            vals = np.where(
                data.null_mask,
                0.0,
                np.minimum(data.eigenvalues.real, 0.0) + 1j * data.eigenvalues.imag,
            )
            weights = data.left.conj().T @ x.ravel()
            evolved = data.right @ (np.exp(vals * t) * weights)
            return evolved.reshape(self.dim, self.dim)
        if method != "ivp":
            raise ValueError(f"unknown evolution backend {method!r}")
        sol = solve_ivp(
            lambda _t, v: self.apply(v.reshape(self.dim, self.dim)).ravel(),
            (0.0, t),
            x.ravel(),
            method="RK45",
            rtol=IVP_RTOL,
            atol=IVP_ATOL,
        )
        if not sol.success:
            raise NumericalFailureError(f"time integration failed: {sol.message}")
        return sol.y[:, -1].reshape(self.dim, self.dim)

    def evolve(self, rho: DensityMatrix, t: float, method: str = "ivp") -> DensityMatrix:
        """State at time t under the relaxation dynamics."""
        return DensityMatrix(hermitize(self.propagate(rho.matrix, t, method)), space="full")

    # -- dense spectral backend ---------------------------------------

    def superoperator_matrix(self) -> np.ndarray:
        """Dense 9^N x 9^N matrix of the generator on row-major vectorized operators."""
        if self.config.n_atoms > 3:
            raise ValueError("dense superoperator is restricted to N <= 3")
        dim = self.dim
        eye = np.eye(dim, dtype=complex)
        mat = -np.kron(self._m, eye) - np.kron(eye, self._m.conj())
        for c in self.channels:
            b = self._collective[c]
            mat += np.kron(b, b.conj())
        return mat

    def spectral_decompose(self) -> SpectralData:
        """Eigenvalues and biorthonormal eigen-operator pairs of the generator."""
        if self._spectral is not None:
            return self._spectral
        mat = self.superoperator_matrix()
        vals, right = sla.eig(mat)
        try:
            right_inv = sla.inv(right)
        except sla.LinAlgError as exc:
            raise NumericalFailureError(f"defective eigenvector basis: {exc}") from exc
        ortho_err = float(np.max(np.abs(right_inv @ right - np.eye(right.shape[0]))))
        if ortho_err > 1e-8:
            raise NumericalFailureError(
                f"biorthonormalization failed, residual {ortho_err:.3e}"
            )
        max_mag = float(np.max(np.abs(vals)))
        null_mask = np.abs(vals) < NULL_SPACE_RTOL * max_mag
        expected = 4**self.config.n_atoms
        if int(null_mask.sum()) != expected:
            raise NumericalFailureError(
                f"null space dimension {int(null_mask.sum())} != {expected}"
            )
        if float(vals.real.max()) > 1e-10:
            raise NumericalFailureError(
                f"positive eigenvalue Re = {float(vals.real.max()):.3e} in a dissipative generator"
            )
        semisimple_err = float(np.max(np.abs(mat @ right[:, null_mask])))
        if semisimple_err > 1e-8:
            raise NumericalFailureError(
                f"zero eigenvalue not semisimple, |L U| = {semisimple_err:.3e}"
            )
        self._spectral = SpectralData(
            eigenvalues=vals,
            right=right,
            left=right_inv.conj().T,
            null_mask=null_mask,
        )
        return self._spectral

    def drazin_spectral(self, x: np.ndarray) -> np.ndarray:
        """Drazin inverse through the dense decomposition (diagnostic)."""
        data = self.spectral_decompose()
        inv_vals = np.where(data.null_mask, 0.0, 1.0 / np.where(data.null_mask, 1.0, data.eigenvalues))
        weights = data.left.conj().T @ np.asarray(x, dtype=complex).ravel()
        return (data.right @ (inv_vals * weights)).reshape(self.dim, self.dim)
