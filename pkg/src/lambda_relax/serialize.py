"""JSON serialization of states.

Matrices are stored row-major as a flat list of [re, im] pairs together
with the dimension and a space tag; joint photon states additionally carry
the photon-index legend so files are self-describing.
"""

from __future__ import annotations

import json

import numpy as np

from .detection import PHOTON_LEGEND, JointPhotonState
from .states import DensityMatrix


def _pack(matrix: np.ndarray) -> list[list[float]]:
    flat = np.asarray(matrix, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _unpack(data, dim: int) -> np.ndarray:
    flat = np.array([complex(re, im) for re, im in data])
    if flat.size != dim * dim:
        raise ValueError(f"data length {flat.size} does not match dim {dim}")
    return flat.reshape(dim, dim)


def density_matrix_to_dict(rho: DensityMatrix) -> dict:
    return {"dim": rho.dim, "space": rho.space, "data": _pack(rho.matrix)}


def density_matrix_from_dict(payload: dict) -> DensityMatrix:
    return DensityMatrix(_unpack(payload["data"], payload["dim"]), space=payload["space"])


def joint_state_to_dict(state: JointPhotonState) -> dict:
    return {
        "dim": state.matrix.shape[0],
        "space": "joint",
        "kind": state.kind,
        "n_atoms": state.n_atoms,
        "photon_legend": list(PHOTON_LEGEND),
        "data": _pack(state.matrix),
    }


def joint_state_from_dict(payload: dict) -> JointPhotonState:
    return JointPhotonState(
        _unpack(payload["data"], payload["dim"]),
        n_atoms=payload["n_atoms"],
        kind=payload["kind"],
    )


def to_json(obj, path=None) -> str:
    """Serialize a DensityMatrix or JointPhotonState, optionally to a file."""
    if isinstance(obj, DensityMatrix):
        payload = density_matrix_to_dict(obj)
    elif isinstance(obj, JointPhotonState):
        payload = joint_state_to_dict(obj)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    text = json.dumps(payload)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def from_json(text: str):
    """Inverse of :func:`to_json` for strings."""
    payload = json.loads(text)
    if payload.get("space") == "joint" and "kind" in payload:
        return joint_state_from_dict(payload)
    return density_matrix_from_dict(payload)
