"""Discrete-time quantum walk on the line with a phase impurity at the origin.

Submodules
----------
walk          state representation and exact step-by-step evolution
spectral      ring diagonalization, dispersion of the clean walk
bound_states  transfer-matrix bound states and their analytic consequences
localisation  coin-averaged distributions, participation ratio, <P_0>
open_system   reduced coin dynamics, trace-distance and entanglement measures
cli           command-line sweeps writing CSV
"""

from .walk import (
    Boundary,
    WalkConfig,
    WalkerState,
    localized_state,
    step,
    evolve,
    position_distribution,
)
from .bound_states import (
    BoundState,
    solve_bound_states,
    effective_inverse_localisation_length,
)
from .spectral import diagonalize_ring
from .localisation import averaged_distribution, participation_ratio, localisation_row
from .open_system import blp_measure, rhp_measure, concurrence, trace_distance

__version__ = "0.1.0"
