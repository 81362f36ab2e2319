import json

import numpy as np

from conftest import random_density
from lambda_relax.detection import one_photon_joint
from lambda_relax.liouvillian import Liouvillian
from lambda_relax.serialize import from_json, to_json
from lambda_relax.states import DensityMatrix, SystemConfig, ket_density_matrix


def test_density_matrix_round_trip(rng):
    for space, dim in (("full", 9), ("ground", 4)):
        dm = DensityMatrix(random_density(rng, dim), space=space)
        text = to_json(dm)
        payload = json.loads(text)
        assert payload["dim"] == dim
        assert payload["space"] == space
        assert len(payload["data"]) == dim * dim
        back = from_json(text)
        assert back.space == space
        assert np.allclose(back.matrix, dm.matrix)


def test_joint_state_round_trip_carries_legend():
    liouv = Liouvillian(SystemConfig.equidistant(1, 0.0, 0.0))
    joint = one_photon_joint(ket_density_matrix("e", liouv.config), liouv)
    payload = json.loads(to_json(joint))
    assert payload["space"] == "joint"
    assert payload["kind"] == "atom_photon"
    assert payload["photon_legend"] == ["(+,right)", "(+,left)", "(-,right)", "(-,left)"]
    back = from_json(to_json(joint))
    assert np.allclose(back.matrix, joint.matrix)
    assert back.n_atoms == 1


def test_file_output(tmp_path, rng):
    dm = DensityMatrix(random_density(rng, 4), space="ground")
    path = tmp_path / "state.json"
    to_json(dm, path)
    with open(path) as fh:
        back = from_json(fh.read())
    assert np.allclose(back.matrix, dm.matrix)
