"""
Trace-distance non-Markovianity
===============================

Two walks started from orthogonal coin states; the coin's reduced states
are compared step by step and every increase of their trace distance is
counted. The pair is optimized over the Bloch sphere.
"""

import numpy as np

from phasewalk import blp_measure

theta = np.pi / 4
for k in (0.0, 0.25, 0.5, 1.0):
    res = blp_measure(theta, k * np.pi, (150, 300), grid=16)
    print("phi = %.2f pi:  N(150) = %6.2f  N(300) = %6.2f  best pair gamma = %.3f pi"
          % (k, res[0].measure, res[1].measure, res[1].gamma / np.pi))
