"""Closed-form final and conditioned states for two-atom arrays.

These expressions are exact at ideal chirality (s = 0) or in the fully
achiral case (s = 1) and serve as independent oracles for the numerical
relaxation pipeline.  The two-qubit matrices live on the ground manifold
in the basis (++, +-, -+, --).

The relative sign between the two branches of the entangled Bell component
is stored explicitly: both conventions are constructible, and the recorded
``VERIFIED_BELL_SIGN`` values are the ones the relaxation pipeline actually
produces (checked numerically by the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .states import DensityMatrix, ground_ket_vector, hermitize

# sign of the exp(2 i k0 d)|+-> branch relative to |-+> in the Bell component
VERIFIED_BELL_SIGN = {
    "chiral_ee": +1,
    "chiral_e_plus": -1,
    "chiral_ee_plus": +1,
}

_FINAL_CASES = ("achiral_ee", "chiral_ee", "chiral_e_plus")
_CONDITIONED_CASES = ("chiral_ee_plus", "achiral_ee_plus")


def _proj(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


def distance_bell_state(k0d: float, sign: int) -> np.ndarray:
    """(|-+> + sign * exp(2 i k0 d) |+->)/sqrt(2)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return (ground_ket_vector("-+") + sign * np.exp(2j * k0d) * ground_ket_vector("+-")) / np.sqrt(2)


def singlet_projector() -> np.ndarray:
    """Projector onto the two-qubit spin singlet."""
    return _proj((ground_ket_vector("+-") - ground_ket_vector("-+")) / np.sqrt(2))


def triplet_projector() -> np.ndarray:
    """Projector onto the two-qubit total-spin-1 subspace."""
    return np.eye(4) - singlet_projector()


def achiral_ee_final(k0d: float) -> np.ndarray:
    """Final state from |ee> in the achiral case, a spin-mixture Werner form."""
    s2 = np.sin(k0d) ** 2
    return (triplet_projector() + singlet_projector() * s2) / (3.0 + s2)


def chiral_ee_final(k0d: float, bell_sign: int | None = None) -> np.ndarray:
    """Final state from |ee> over an ideally chiral guide."""
    sign = VERIFIED_BELL_SIGN["chiral_ee"] if bell_sign is None else bell_sign
    out = (5.0 / 16.0) * (_proj(ground_ket_vector("++")) + _proj(ground_ket_vector("--")))
    out += (1.0 / 8.0) * _proj(ground_ket_vector("-+"))
    out += (1.0 / 4.0) * _proj(distance_bell_state(k0d, sign))
    return out


def chiral_e_plus_final(k0d: float, bell_sign: int | None = None) -> np.ndarray:
    """Final state from |e+> over an ideally chiral guide; concurrence 1/2."""
    sign = VERIFIED_BELL_SIGN["chiral_e_plus"] if bell_sign is None else bell_sign
    out = (1.0 / 4.0) * _proj(ground_ket_vector("++"))
    out += (1.0 / 4.0) * _proj(ground_ket_vector("-+"))
    out += (1.0 / 2.0) * _proj(distance_bell_state(k0d, sign))
    return out


def chiral_ee_plus_conditioned(k0d: float, bell_sign: int | None = None) -> np.ndarray:
    """State from |ee>, ideally chiral, conditioned on detecting a + photon."""
    sign = VERIFIED_BELL_SIGN["chiral_ee_plus"] if bell_sign is None else bell_sign
    out = (5.0 / 8.0) * _proj(ground_ket_vector("++"))
    out += (1.0 / 8.0) * _proj(ground_ket_vector("-+"))
    out += (1.0 / 4.0) * _proj(distance_bell_state(k0d, sign))
    return out


def achiral_ee_plus_conditioned(k0d: float) -> np.ndarray:
    """State from |ee>, achiral, conditioned on detecting a + photon."""
    s2 = np.sin(k0d) ** 2
    sym = (ground_ket_vector("+-") + ground_ket_vector("-+")) / np.sqrt(2)
    anti = (ground_ket_vector("+-") - ground_ket_vector("-+")) / np.sqrt(2)
    out = 2.0 * _proj(ground_ket_vector("++")) + _proj(sym) + s2 * _proj(anti)
    return out / (3.0 + s2)


def exact_final_state(case_id: str, k0d: float) -> DensityMatrix:
    """Closed-form unconditioned final state for a catalogued two-atom case."""
    builders = {
        "achiral_ee": achiral_ee_final,
        "chiral_ee": chiral_ee_final,
        "chiral_e_plus": chiral_e_plus_final,
    }
    if case_id not in builders:
        raise KeyError(f"unknown final-state case {case_id!r}; known: {_FINAL_CASES}")
    return DensityMatrix(hermitize(builders[case_id](k0d)), space="ground")


def exact_conditioned_state(case_id: str, k0d: float) -> DensityMatrix:
    """Closed-form +-photon-conditioned state for a catalogued case."""
    builders = {
        "chiral_ee_plus": chiral_ee_plus_conditioned,
        "achiral_ee_plus": achiral_ee_plus_conditioned,
    }
    if case_id not in builders:
        raise KeyError(f"unknown conditioned case {case_id!r}; known: {_CONDITIONED_CASES}")
    return DensityMatrix(hermitize(builders[case_id](k0d)), space="ground")


def exact_conditioned_concurrence(k0d: float) -> float:
    """Concurrence of the achiral +-conditioned state, cos^2/(4 - cos^2)."""
    c2 = np.cos(k0d) ** 2
    return float(c2 / (4.0 - c2))


@dataclass(frozen=True)
class ReferenceCase:
    """One catalogued closed-form result, evaluable at any spacing."""

    case_id: str
    n_atoms: int
    chirality: float
    initial: str
    conditioned_on: str | None
    description: str
    payload: Callable[[float], DensityMatrix]


CATALOG: dict[str, ReferenceCase] = {
    "achiral_ee": ReferenceCase(
        "achiral_ee", 2, 1.0, "ee", None,
        "final state from both atoms excited, achiral coupling",
        lambda k0d: exact_final_state("achiral_ee", k0d),
    ),
    "chiral_ee": ReferenceCase(
        "chiral_ee", 2, 0.0, "ee", None,
        "final state from both atoms excited, ideally chiral coupling",
        lambda k0d: exact_final_state("chiral_ee", k0d),
    ),
    "chiral_e_plus": ReferenceCase(
        "chiral_e_plus", 2, 0.0, "e+", None,
        "final state from the left atom excited, ideally chiral coupling",
        lambda k0d: exact_final_state("chiral_e_plus", k0d),
    ),
    "chiral_ee_plus": ReferenceCase(
        "chiral_ee_plus", 2, 0.0, "ee", "+",
        "state from both atoms excited, chiral, conditioned on a + photon",
        lambda k0d: exact_conditioned_state("chiral_ee_plus", k0d),
    ),
    "achiral_ee_plus": ReferenceCase(
        "achiral_ee_plus", 2, 1.0, "ee", "+",
        "state from both atoms excited, achiral, conditioned on a + photon",
        lambda k0d: exact_conditioned_state("achiral_ee_plus", k0d),
    ),
}


def catalog_summary(k0d: float) -> list[dict]:
    """Catalog entries with matrices evaluated at one spacing, for dumping."""
    entries = []
    for case in CATALOG.values():
        state = case.payload(k0d)
        entries.append(
            {
                "case_id": case.case_id,
                "n_atoms": case.n_atoms,
                "chirality": case.chirality,
                "initial": case.initial,
                "conditioned_on": case.conditioned_on,
                "description": case.description,
                "k0d": k0d,
                "matrix": [
                    [[float(z.real), float(z.imag)] for z in row] for row in state.matrix.tolist()
                ],
            }
        )
    return entries
