"""
Bound states from the transfer matrix
=====================================

The impurity binds up to two states per reflection parity: one in the gap
around E = 0 and its sublattice partner at E + pi. Their energies follow in
closed form; a dense diagonalization of a 201-site ring confirms them.
"""

import numpy as np

from phasewalk import diagonalize_ring, solve_bound_states

theta, phi = np.pi / 4, np.pi

for b in solve_bound_states(theta, phi):
    print("parity %+d  E = %+.6f pi  lambda = %+.6f  1/l = %.4f"
          % (b.parity, b.energy / np.pi, b.lam, b.inverse_length))

spec = diagonalize_ring(theta, phi, 201)
print("ring states flagged as bound:", np.round(spec.bound_energies / np.pi, 6), "(units of pi)")

# symmetric states live on (0, pi + 2 theta), anti-symmetric on (pi - 2 theta, 2 pi)
for phi in (0.25 * np.pi, np.pi, 1.75 * np.pi):
    parities = sorted({b.parity for b in solve_bound_states(theta, phi)})
    print("phi = %.2f pi: parities %s" % (phi / np.pi, parities))
