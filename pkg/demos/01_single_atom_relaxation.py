"""A single excited lambda atom: exponential decay and the photon it leaves behind.

The excited state decays into both ground states at equal rates, so the
final atomic state is unpolarized, and the emitted photon stays maximally
entangled with the atom it came from.
"""

import numpy as np

from lambda_relax import (
    Liouvillian,
    SystemConfig,
    atom_photon_negativity,
    ket_density_matrix,
    one_photon_joint,
)

config = SystemConfig.equidistant(1, 0.0, chirality=0.0)
liouv = Liouvillian(config)
rho0 = ket_density_matrix("e", config)

print("excited population over time (expected exp(-2t)):")
for t in (0.0, 0.25, 0.5, 1.0, 2.0):
    rho_t = liouv.evolve(rho0, t)
    print(f"  t = {t:4.2f}:  p_e = {rho_t.matrix[2, 2].real:.6f}   exp(-2t) = {np.exp(-2 * t):.6f}")

final = liouv.asymptotic_state(rho0)
print("\nfinal state populations (+, -, e):", np.real(np.diag(final.matrix)).round(12))

joint = one_photon_joint(rho0, liouv)
print("\njoint atom-photon state after detecting the photon:")
print("  purity:", np.real(np.trace(joint.matrix @ joint.matrix)).round(12))
print("  atom-photon logarithmic negativity:", round(atom_photon_negativity(joint, 1), 12))
print("  (a pure Bell pair between the atomic qubit and the photon channel)")
