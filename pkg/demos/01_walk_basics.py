"""
Walking on a line with a phase impurity
=======================================

A walker starts at the origin with coin up. Each step applies the impurity
phase at n = 0, tosses the coin and shifts up-components right and
down-components left.
"""

import numpy as np

from phasewalk import WalkConfig, evolve, localized_state, position_distribution

theta = np.pi / 4
t = 100

# standard walk: two ballistic peaks, almost nothing left at the origin
cfg = WalkConfig.for_steps(theta, 0.0, t)
p = position_distribution(evolve(localized_state([1, 0], cfg), cfg, t))
print("phi = 0   : P_0 = %.4f, peak at n = %d" % (p[cfg.lattice_half_width],
                                                  cfg.sites[np.argmax(p)]))

# phi = pi traps a finite weight near the impurity
cfg = WalkConfig.for_steps(theta, np.pi, t)
p = position_distribution(evolve(localized_state([1, 0], cfg), cfg, t))
print("phi = pi  : P_0 = %.4f" % p[cfg.lattice_half_width])

# odd step counts leave the even sites empty and vice versa
p_odd = position_distribution(evolve(localized_state([1, 0], cfg), cfg, t + 1))
print("after %d steps, weight on even sites: %.2e" % (t + 1, p_odd[cfg.sites % 2 == 0].sum()))
