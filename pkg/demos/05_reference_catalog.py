"""Cross-check the numerical pipeline against the closed-form catalog."""

import numpy as np

from lambda_relax import (
    CATALOG,
    Liouvillian,
    Polarization,
    SystemConfig,
    condition_on_polarization,
    ket_density_matrix,
    one_photon_joint,
    restrict_to_ground,
)

print("closed-form catalog vs numerical relaxation, max entrywise deviation:\n")
for case in CATALOG.values():
    config = SystemConfig.equidistant(case.n_atoms, 1.1, case.chirality)
    liouv = Liouvillian(config)
    rho0 = ket_density_matrix(case.initial, config)
    if case.conditioned_on is None:
        numeric = restrict_to_ground(liouv.asymptotic_state(rho0)).matrix
    else:
        joint = one_photon_joint(rho0, liouv)
        numeric = condition_on_polarization(joint, Polarization.Plus).matrix
    exact = case.payload(1.1).matrix
    dev = np.max(np.abs(numeric - exact))
    print(f"  {case.case_id:18s} {case.description}")
    print(f"  {'':18s} deviation {dev:.2e}\n")
