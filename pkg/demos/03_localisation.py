"""
Localisation versus impurity phase
==================================

The coin-averaged distribution after 150 steps is compared with the
long-time prediction built from the bound states alone.
"""

import numpy as np

from phasewalk import effective_inverse_localisation_length, localisation_row

theta = np.pi / 4
print("  phi/pi   1/l_eff   PR_num   PR_an    P0_num   P0_an")
for k in np.linspace(0, 2, 9):
    r = localisation_row(theta, k * np.pi, 150)
    print("  %5.2f   %7.4f   %.4f   %.4f   %.4f   %.4f" % (
        k, effective_inverse_localisation_length(theta, k * np.pi),
        r.pr_numeric, r.pr_analytic, r.p0_numeric, r.p0_analytic))
