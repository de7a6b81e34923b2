"""
Coin-averaged localisation diagnostics.

Averaging the position distribution over every initial coin state at the
origin is the same as evolving the maximally mixed coin, which in turn equals
the mean over any orthonormal pair of coin states. All functions here use
such a pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import bound_states as bs
from .walk import WalkConfig, step_array

__all__ = [
    "AveragedDistribution",
    "averaged_distribution",
    "participation_ratio",
    "mean_origin_probability",
    "LocalisationRow",
    "localisation_row",
    "default_phi_grid",
]

DEFAULT_STEPS = 150
DEFAULT_GRID = 256
# even steps averaged for <P_0>: the last 50 steps of the walk
DEFAULT_ORIGIN_WINDOW = 25

_Z_PAIR = (np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex))


def default_phi_grid(n: int = DEFAULT_GRID) -> NDArray[np.float64]:
    """``n`` uniform points on ``[0, 2 pi)``."""
    return 2 * np.pi * np.arange(n) / n


@dataclass(frozen=True)
class AveragedDistribution:
    p_mean: NDArray[np.float64]
    t: int
    pair_used: tuple[NDArray[np.complex128], NDArray[np.complex128]]
    sites: NDArray[np.int64]
    # P_0 after each of the last few even step counts, oldest first
    origin_history: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))

    def at(self, n: int) -> float:
        return float(self.p_mean[n + len(self.sites) // 2])


def _check_pair(pair) -> tuple[NDArray, NDArray]:
    a, b = (np.asarray(v, dtype=np.complex128).reshape(2) for v in pair)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    if abs(np.vdot(a, b)) > 1e-10:
        raise ValueError(f"coin pair is not orthogonal: |<a|b>| = {abs(np.vdot(a, b)):.3g}")
    return a, b


def averaged_distribution(
    theta: float,
    phi: float,
    t: int = DEFAULT_STEPS,
    pair: tuple[ArrayLike, ArrayLike] | None = None,
    origin_window: int = 1,
) -> AveragedDistribution:
    """Mean of the position distributions of two orthogonal coins started at 0.

    ``origin_window`` is the number of even step counts ``<= t`` at which
    ``P_0`` is recorded for :func:`mean_origin_probability`.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    a, b = _check_pair(_Z_PAIR if pair is None else pair)
    cfg = WalkConfig.for_steps(theta, phi, t)
    L = cfg.lattice_half_width
    psi = np.zeros((2, 2, cfg.n_sites), dtype=np.complex128)
    psi[0, :, L] = a
    psi[1, :, L] = b
    last_even = t - (t % 2)
    first_rec = last_even - 2 * (origin_window - 1)
    history = []
    if first_rec <= 0:
        history.append(_origin_prob(psi, L))
    for k in range(1, t + 1):
        psi = step_array(psi, theta, phi)
        if k % 2 == 0 and k >= first_rec:
            history.append(_origin_prob(psi, L))
    p = 0.5 * np.sum(np.abs(psi) ** 2, axis=(0, 1))
    return AveragedDistribution(p, t, (a, b), cfg.sites, np.asarray(history[-origin_window:]))


def _origin_prob(psi, L):
    return 0.5 * float(np.sum(np.abs(psi[:, :, L]) ** 2))


def participation_ratio(dist) -> float:
    """``sum_n p_n^2``: 1 for a point mass, ``1/N`` for a flat spread over ``N`` sites."""
    p = dist.p_mean if isinstance(dist, AveragedDistribution) else np.asarray(dist, dtype=float)
    return float(np.sum(p ** 2))


def mean_origin_probability(avg: AveragedDistribution) -> float:
    """Mean of the recorded even-step origin probabilities.

    Odd step counts leave the origin empty (sublattice alternation), so only
    even steps enter, matching the analytic envelope.
    """
    if avg.origin_history.size == 0:
        return avg.at(0)
    return float(np.mean(avg.origin_history))


@dataclass(frozen=True)
class LocalisationRow:
    phi: float
    pr_numeric: float
    pr_analytic: float
    p0_numeric: float
    p0_analytic: float


def localisation_row(theta: float, phi: float, t: int = DEFAULT_STEPS,
                     origin_window: int = DEFAULT_ORIGIN_WINDOW) -> LocalisationRow:
    """Numeric and bound-subspace predictions of PR and ``<P_0>`` at one phase."""
    avg = averaged_distribution(theta, phi, t, origin_window=origin_window)
    return LocalisationRow(
        phi=float(phi),
        pr_numeric=participation_ratio(avg),
        pr_analytic=bs.analytic_participation_ratio(theta, phi),
        p0_numeric=mean_origin_probability(avg),
        p0_analytic=bs.analytic_origin_probability(theta, phi),
    )
