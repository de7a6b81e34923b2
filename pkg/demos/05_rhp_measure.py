"""
Entanglement-based non-Markovianity
===================================

The coin starts maximally entangled with a static ancilla. Revivals of the
concurrence signal information flowing back from the position space. At
phi = pi the revivals beat at the splitting of the two in-gap bound states.
"""

import numpy as np

from phasewalk import rhp_measure, solve_bound_states

theta = np.pi / 4
for k in (1 / 3, 1.0):
    s = rhp_measure(theta, k * np.pi, 300)
    print("phi = %.3f pi:  I(300) = %.3f  C(300) = %.3f" % (k, s.measure, s.values[-1]))

gap = [b.energy for b in solve_bound_states(theta, np.pi) if b.in_gap]
dE = abs(gap[0] - gap[1])
C = rhp_measure(theta, np.pi, 500).values[100:]
amp = np.abs(np.fft.rfft(C - C.mean()))
period = 1 / np.fft.rfftfreq(len(C))[1:]
slow = period >= 3
print("beat period %.2f steps, expected 2 pi / dE = %.2f"
      % (period[slow][np.argmax(amp[1:][slow])], 2 * np.pi / dE))
