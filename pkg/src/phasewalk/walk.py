"""
Coined walk on the line with a phase impurity at the origin.

One step is ``W = T C P``: the impurity phase ``P`` first, then the coin
``C = exp(-i theta sigma_x)``, then the conditional shift ``T`` (up moves
right, down moves left). Other orderings exist in the literature; this one is
fixed throughout the package.

Amplitudes live in a dense complex array of shape ``(2, 2L + 1)``: row 0 is
the up coin, row 1 the down coin, and column ``n + L`` is site ``n``.
"""

from __future__ import annotations

import enum
from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import BoundaryOverflowError, NumericalError

__all__ = [
    "Boundary",
    "WalkConfig",
    "WalkerState",
    "localized_state",
    "apply_coin",
    "apply_phase",
    "apply_shift",
    "step",
    "evolve",
    "position_distribution",
    "apply_sublattice",
    "apply_reflection",
    "coin_matrix",
    "step_array",
]

UP, DOWN = 0, 1

NORM_CHECK_INTERVAL = 100
NORM_TOLERANCE = 1e-9


class Boundary(enum.Enum):
    OPEN_PADDED = "open"
    RING = "ring"


@dataclass(frozen=True)
class WalkConfig:
    """Parameters of the impurity walk.

    Parameters
    ----------
    theta : float
        Coin angle; the coin rotates the spin by ``2 theta`` about x.
    phi : float
        Phase picked up at the origin before every coin toss.
    lattice_half_width : int
        Sites run over ``-L..L``.
    boundary : Boundary
        ``OPEN_PADDED`` raises if amplitude would leave the lattice;
        ``RING`` wraps around.
    """

    theta: float
    phi: float = 0.0
    lattice_half_width: int = 2
    boundary: Boundary = Boundary.OPEN_PADDED

    def __post_init__(self):
        if self.lattice_half_width < 1:
            raise ValueError(f"lattice_half_width must be >= 1, got {self.lattice_half_width}")
        if not (np.isfinite(self.theta) and np.isfinite(self.phi)):
            raise ValueError("theta and phi must be finite")

    @classmethod
    def for_steps(cls, theta: float, phi: float, t_max: int) -> "WalkConfig":
        """Open lattice wide enough that ``t_max`` steps never touch the edge."""
        return cls(theta, phi, lattice_half_width=t_max + 2)

    @property
    def n_sites(self) -> int:
        return 2 * self.lattice_half_width + 1

    @property
    def sites(self) -> NDArray[np.int64]:
        L = self.lattice_half_width
        return np.arange(-L, L + 1)


@dataclass(frozen=True)
class WalkerState:
    amplitudes: NDArray[np.complex128]
    time: int = 0
    boundary: Boundary = field(default=Boundary.OPEN_PADDED)

    def __post_init__(self):
        a = self.amplitudes
        if a.ndim != 2 or a.shape[0] != 2 or a.shape[1] % 2 != 1:
            raise ValueError(f"amplitudes must have shape (2, 2L+1), got {a.shape}")

    @property
    def half_width(self) -> int:
        return self.amplitudes.shape[1] // 2

    @property
    def sites(self) -> NDArray[np.int64]:
        L = self.half_width
        return np.arange(-L, L + 1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def site(self, n: int) -> NDArray[np.complex128]:
        """Coin spinor at site ``n``."""
        return self.amplitudes[:, n + self.half_width]

    def with_amplitudes(self, amplitudes, time=None) -> "WalkerState":
        return replace(self, amplitudes=amplitudes, time=self.time if time is None else time)


def localized_state(coin: ArrayLike, config: WalkConfig, site: int = 0) -> WalkerState:
    """State ``|coin> (x) |site>``; the coin spinor is normalized."""
    coin = np.asarray(coin, dtype=np.complex128).reshape(2)
    nrm = np.linalg.norm(coin)
    if nrm == 0:
        raise ValueError("coin spinor has zero norm")
    L = config.lattice_half_width
    if abs(site) > L:
        raise ValueError(f"site {site} outside lattice of half-width {L}")
    a = np.zeros((2, config.n_sites), dtype=np.complex128)
    a[:, site + L] = coin / nrm
    return WalkerState(a, 0, config.boundary)


def coin_matrix(theta: float) -> NDArray[np.complex128]:
    """``exp(-i theta sigma_x) = cos(theta) I - i sin(theta) sigma_x``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


# Array-level kernels. They accept any leading batch axes: (..., 2, n_sites).

def _coin(a: NDArray, theta: float) -> NDArray:
    c, s = np.cos(theta), np.sin(theta)
    up, dn = a[..., UP, :], a[..., DOWN, :]
    return np.stack([c * up - 1j * s * dn, -1j * s * up + c * dn], axis=-2)


def _phase(a: NDArray, phi: float) -> NDArray:
    out = a.copy()
    out[..., a.shape[-1] // 2] *= np.exp(1j * phi)
    return out


def _shift(a: NDArray, ring: bool) -> NDArray:
    if not ring and (np.any(a[..., UP, -1] != 0) or np.any(a[..., DOWN, 0] != 0)):
        raise BoundaryOverflowError("amplitude would be shifted past the lattice edge")
    out = np.empty_like(a)
    out[..., UP, :] = np.roll(a[..., UP, :], 1, axis=-1)
    out[..., DOWN, :] = np.roll(a[..., DOWN, :], -1, axis=-1)
    return out


def step_array(a: NDArray, theta: float, phi: float, ring: bool = False) -> NDArray:
    """One step ``T C P`` on a raw amplitude array of shape ``(..., 2, 2L+1)``."""
    return _shift(_coin(_phase(a, phi), theta), ring)


def apply_coin(state: WalkerState, theta: float) -> WalkerState:
    return state.with_amplitudes(_coin(state.amplitudes, theta))


def apply_phase(state: WalkerState, phi: float) -> WalkerState:
    return state.with_amplitudes(_phase(state.amplitudes, phi))


def apply_shift(state: WalkerState) -> WalkerState:
    """Conditional shift; raises ``BoundaryOverflowError`` on an open lattice
    if up-amplitude sits at ``n = L`` or down-amplitude at ``n = -L``."""
    return state.with_amplitudes(_shift(state.amplitudes, state.boundary is Boundary.RING))


def step(state: WalkerState, config: WalkConfig) -> WalkerState:
    a = step_array(state.amplitudes, config.theta, config.phi,
                   ring=state.boundary is Boundary.RING)
    return state.with_amplitudes(a, state.time + 1)


def evolve(
    state: WalkerState,
    config: WalkConfig,
    t: int,
    callback: Callable[[WalkerState], None] | None = None,
) -> WalkerState:
    """Apply ``t`` steps.

    ``callback`` (if given) sees the state after every step. The norm is
    checked every ``NORM_CHECK_INTERVAL`` steps and a drift beyond
    ``NORM_TOLERANCE`` raises ``NumericalError``.
    """
    if t < 0:
        raise ValueError(f"number of steps must be non-negative, got {t}")
    ring = state.boundary is Boundary.RING
    a = state.amplitudes
    norm0 = np.linalg.norm(a)
    for k in range(1, t + 1):
        a = step_array(a, config.theta, config.phi, ring)
        if k % NORM_CHECK_INTERVAL == 0 and abs(np.linalg.norm(a) - norm0) > NORM_TOLERANCE:
            raise NumericalError(f"norm drifted to {np.linalg.norm(a)!r} after {k} steps")
        if callback is not None:
            callback(state.with_amplitudes(a, state.time + k))
    return state.with_amplitudes(a, state.time + t)


def position_distribution(state: WalkerState) -> NDArray[np.float64]:
    """``P_n = sum_c |a_{c,n}|^2``, indexed like ``state.sites``."""
    return np.sum(np.abs(state.amplitudes) ** 2, axis=0)


def apply_sublattice(state: WalkerState) -> WalkerState:
    """Multiply site ``n`` by ``(-1)^n``."""
    sign = np.where(state.sites % 2 == 0, 1.0, -1.0)
    return state.with_amplitudes(state.amplitudes * sign)


def apply_reflection(state: WalkerState) -> WalkerState:
    """``sigma_x`` on the coin together with ``n -> -n``."""
    return state.with_amplitudes(state.amplitudes[::-1, ::-1].copy())
