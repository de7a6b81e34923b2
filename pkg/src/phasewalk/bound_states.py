"""
Impurity bound states from the transfer-matrix recursion.

A stationary state ``W|E> = exp(-iE)|E>`` with coefficients
``alpha_n`` (up) and ``beta_n`` (down) obeys

    (alpha_{n+1}, beta_n) = T(phi_n) (alpha_n, beta_{n-1})

with ``T`` the 2x2 transfer matrix below. Reflection parity forces
``alpha_{-n} = p beta_n``; away from the origin the pair decays as
``lambda^n`` with ``|lambda| < 1``. Each parity supports at most one state in
the gap around ``E = 0`` plus its sublattice partner at ``E + pi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DegenerateParameterError,
    ExtendedStateError,
    SingularCoinError,
    TruncationError,
)
from .walk import Boundary, WalkerState, apply_sublattice

__all__ = [
    "BoundState",
    "transfer_matrix",
    "transfer_eigenvalue",
    "quasi_energy",
    "validity_residual",
    "solve_bound_states",
    "parity_lambdas",
    "localisation_length",
    "effective_inverse_localisation_length",
    "bound_state_amplitudes",
    "bound_rx",
    "bound_overlap",
    "analytic_mean_distribution",
    "analytic_origin_probability",
    "analytic_participation_ratio",
]

VALIDITY_TOL = 1e-10
# |lambda| closer to 1 than this counts as a band-edge (extended) state.
EDGE_TOL = 1e-9
# largest half-width bound_state_amplitudes will tabulate
MAX_HALF_WIDTH = 1_000_000


def wrap_angle(x):
    """Map onto the principal branch (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    y = np.where(y == -np.pi, np.pi, y)
    return float(y) if np.ndim(y) == 0 else y


@dataclass(frozen=True)
class BoundState:
    """One impurity-localised eigenstate of the step operator.

    ``seed`` is ``(alpha_1, beta_0)``; all other coefficients follow from it,
    ``lam`` and the parity. ``norm_const`` is ``|C|^2`` for the seed written as
    ``C (sin theta, sin E - i sqrt(sin^2 theta - sin^2 E))``.
    """

    parity: int
    energy: float
    lam: float
    seed: tuple[complex, complex]
    norm_const: float
    theta: float
    phi: float

    @property
    def sublattice_partner_energy(self) -> float:
        return wrap_angle(self.energy + np.pi)

    @property
    def in_gap(self) -> bool:
        """True for the member of the sublattice pair near ``E = 0``."""
        return abs(self.energy) < np.pi / 2

    @property
    def inverse_length(self) -> float:
        return localisation_length(self.lam)


def _check_theta(theta: float) -> None:
    if np.isclose(np.cos(theta), 0.0, atol=1e-14):
        raise SingularCoinError("transfer matrix is singular at cos(theta) = 0")


def transfer_matrix(theta: float, E: float, phi_site: float = 0.0) -> NDArray[np.complex128]:
    """Transfer matrix mapping ``(alpha_n, beta_{n-1})`` to ``(alpha_{n+1}, beta_n)``."""
    _check_theta(theta)
    sec, tan = 1.0 / np.cos(theta), np.tan(theta)
    ph = np.exp(1j * (E + phi_site))
    return np.array([[ph * sec, -1j * tan], [1j * tan, sec / ph]], dtype=np.complex128)


def transfer_eigenvalue(theta: float, E: float) -> float:
    """Decaying eigenvalue of ``T(theta, E, 0)``.

    The two eigenvalues are ``(cos E -+ sqrt(sin^2 theta - sin^2 E)) / cos theta``
    and multiply to one; the one with ``|lambda| <= 1`` is returned. Near
    ``E = 0`` this is the ``-`` root, near ``E = pi`` the ``+`` root (the
    sublattice partner, ``lambda -> -lambda``).
    """
    _check_theta(theta)
    disc = np.sin(theta) ** 2 - np.sin(E) ** 2
    if disc < -1e-14:
        raise ExtendedStateError(
            f"|sin E| > |sin theta| (E={E!r}, theta={theta!r}): energy lies in a band")
    root = np.sqrt(max(disc, 0.0))
    sign = 1.0 if np.cos(E) * np.cos(theta) >= 0 else -1.0
    return float((np.cos(E) - sign * root) / np.cos(theta))


def quasi_energy(theta: float, phi: float, parity: int) -> float:
    """Closed-form candidate energy for ``parity`` in the gap around zero.

    ``cot E = p (1 - sin(theta - p phi) sin theta) / (sin theta cos(theta - p phi))``
    taken on the branch ``E in (-pi/2, pi/2]``. The candidate is physical only if
    :func:`validity_residual` vanishes.
    """
    s = np.sin(theta)
    num = parity * (1.0 - np.sin(theta - parity * phi) * s)
    den = s * np.cos(theta - parity * phi)
    # arccot(num/den) on (-pi/2, pi/2] without dividing by a vanishing den
    return float(np.arctan2(den, num)) if num >= 0 else float(np.arctan2(-den, -num))


def validity_residual(theta: float, phi: float, parity: int, E: float) -> float:
    """``sin(E + phi - p theta) - p sqrt(sin^2 theta - sin^2 E) / sin theta``."""
    disc = max(np.sin(theta) ** 2 - np.sin(E) ** 2, 0.0)
    return float(np.sin(E + phi - parity * theta) - parity * np.sqrt(disc) / np.sin(theta))


def _is_valid(theta: float, phi: float, parity: int, E: float) -> bool:
    # The candidate solves the squared condition, so the two branches differ
    # only in the sign of p sin(E + phi - p theta). Near the band edge the
    # square root amplifies rounding (~eps / sqrt(disc)), so the residual
    # tolerance widens there while the sign test keeps the branches apart.
    disc = max(np.sin(theta) ** 2 - np.sin(E) ** 2, 0.0)
    tol = VALIDITY_TOL + 1e-15 / max(np.sqrt(disc), 1e-300)
    if abs(validity_residual(theta, phi, parity, E)) > tol:
        return False
    return parity * np.sin(E + phi - parity * theta) >= 0.0


def _seed(theta: float, E: float, lam: float) -> tuple[complex, complex]:
    # Eigenvector of T with eigenvalue lam, scaled so |alpha_1|^2 + |beta_0|^2
    # closes the geometric norm series: 2 (|a1|^2 + |b0|^2) / (1 - lam^2) = 1.
    s = np.sin(theta)
    a1 = s
    b0 = 1j * s * s / (lam * np.cos(theta) - np.exp(-1j * E))
    scale = np.sqrt((1.0 - lam ** 2) / 2.0) / np.hypot(abs(a1), abs(b0))
    return complex(a1 * scale), complex(b0 * scale)


def _validate_params(theta: float, phi: float) -> None:
    if not (0.0 < theta < np.pi / 2):
        raise DegenerateParameterError(
            f"theta must lie in (0, pi/2) for a gapped, non-singular walk; got {theta!r}")
    if not np.isfinite(phi):
        raise ValueError("phi must be finite")


def solve_bound_states(theta: float, phi: float) -> list[BoundState]:
    """All bound states for the given coin angle and impurity phase.

    Returns 0, 2 or 4 states: for each supported parity the in-gap state
    (``|E| < theta``) followed by its sublattice partner at ``E + pi``.
    Parity ``+1`` comes first.
    """
    _validate_params(theta, phi)
    phi = float(np.mod(phi, 2 * np.pi))
    out = []
    for parity in (+1, -1):
        E = quasi_energy(theta, phi, parity)
        if abs(E) >= theta:
            continue
        if not _is_valid(theta, phi, parity, E):
            continue
        lam = transfer_eigenvalue(theta, E)
        if abs(lam) >= 1.0 - EDGE_TOL:
            continue
        seed = _seed(theta, E, lam)
        norm_const = (1.0 - lam ** 2) / (4.0 * np.sin(theta) ** 2)
        gap = BoundState(parity, wrap_angle(E), lam, seed, norm_const, theta, phi)
        partner = BoundState(parity, wrap_angle(E + np.pi), -lam,
                             (-seed[0], seed[1]), norm_const, theta, phi)
        out += [gap, partner]
    return out


def parity_lambdas(theta: float, phi: float) -> dict[int, float]:
    """``|lambda|`` of the in-gap state per parity; an absent parity maps to 1.

    Setting ``lambda^2 = 1`` for a missing parity makes its terms in the
    overlap and mean-distribution formulas vanish continuously at the edge of
    its existence window.
    """
    lams = {+1: 1.0, -1: 1.0}
    for b in solve_bound_states(theta, phi):
        if b.in_gap:
            lams[b.parity] = abs(b.lam)
    return lams


def localisation_length(lam: float) -> float:
    """Inverse localisation length ``-ln|lambda|`` (positive for bound states)."""
    a = abs(lam)
    if not (0.0 < a < 1.0):
        raise ValueError(f"need 0 < |lambda| < 1 for a bound state, got {lam!r}")
    return float(-np.log(a))


def effective_inverse_localisation_length(theta: float, phi: float) -> float:
    """Sum of ``-ln|lambda|`` over every bound state (partners included).

    Extended states contribute nothing in the infinite-chain limit.
    """
    return float(sum(b.inverse_length for b in solve_bound_states(theta, phi)))


def _required_half_width(lam: float, tol: float = 1e-10) -> int:
    a = abs(lam)
    if a == 0.0:
        return 1
    return int(np.ceil(np.log(tol) / np.log(a))) + 1


def bound_state_amplitudes(bound: BoundState, n_max: int | None = None) -> WalkerState:
    """Wavefunction of ``bound`` on sites ``-n_max..n_max``.

    Built from the seed via ``(alpha_{n+1}, beta_n) = lambda^n (alpha_1, beta_0)``
    and mirrored with ``alpha_{-n} = p beta_n``. The state is normalized over
    the infinite chain; ``n_max`` must be large enough that the discarded tail
    weighs less than 1e-10 (default: just that large). States needing more
    than ``MAX_HALF_WIDTH`` sites per side raise :class:`TruncationError`.
    """
    need = _required_half_width(bound.lam)
    if need > MAX_HALF_WIDTH:
        raise TruncationError(
            f"|lambda|={abs(bound.lam):.10g} needs {need} sites per side; the state is too "
            f"close to the band edge to tabulate (limit {MAX_HALF_WIDTH})")
    if n_max is None:
        n_max = need
    elif n_max < need:
        raise TruncationError(
            f"n_max={n_max} leaves a tail above 1e-10 for |lambda|={abs(bound.lam):.6g}; "
            f"need at least {need}")
    lam, p = bound.lam, bound.parity
    a1, b0 = bound.seed
    n = np.arange(0, n_max + 1)
    beta_pos = b0 * lam ** n                              # beta_0 .. beta_nmax
    alpha_pos = np.concatenate([[p * b0], a1 * lam ** (n[1:] - 1)])  # alpha_0 .. alpha_nmax
    amp = np.zeros((2, 2 * n_max + 1), dtype=np.complex128)
    amp[0, n_max:] = alpha_pos
    amp[1, n_max:] = beta_pos
    # alpha_{-n} = p beta_n, beta_{-n} = p alpha_n
    amp[0, :n_max] = p * beta_pos[:0:-1]
    amp[1, :n_max] = p * alpha_pos[:0:-1]
    return WalkerState(amp, 0, Boundary.OPEN_PADDED)


def bound_rx(bound: BoundState) -> float:
    """x-component of the coin Bloch vector of a bound state.

    ``r_x = p/2 [2 lambda cos(E + phi - p theta) + (1 - lambda^2)]``; ``r_y`` and
    ``r_z`` vanish. Sublattice partners share the value since both ``lambda``
    and the cosine flip sign.
    """
    p, lam, E = bound.parity, bound.lam, bound.energy
    return float(p * 0.5 * (2 * lam * np.cos(E + bound.phi - p * bound.theta) + (1 - lam ** 2)))


def bound_overlap(gamma: float, eta: float, theta: float, phi: float) -> float:
    """Weight of ``(cos(g/2), e^{i eta} sin(g/2)) (x) |0>`` on the bound subspace."""
    lams = parity_lambdas(theta, phi)
    lp2, lm2 = lams[+1] ** 2, lams[-1] ** 2
    return float(((2 - lp2 - lm2) - (lp2 - lm2) * np.sin(gamma) * np.cos(eta)) / 2)


def analytic_mean_distribution(
    theta: float, phi: float, n_max: int, sublattice: str = "even"
) -> NDArray[np.float64]:
    """Long-time coin-averaged distribution restricted to the bound subspace.

    Returns an array over sites ``-n_max..n_max``. The walk alternates between
    sublattices, so after an even (odd) number of steps only even (odd) sites
    carry weight; ``sublattice`` selects which envelope is returned. Either
    one sums to the average bound weight ``[(1 - l+^2) + (1 - l-^2)] / 2``.
    """
    if sublattice not in ("even", "odd"):
        raise ValueError("sublattice must be 'even' or 'odd'")
    lams = parity_lambdas(theta, phi)
    n = np.arange(-n_max, n_max + 1)
    p = np.zeros(n.shape, dtype=float)
    an = np.abs(n)
    for lam in lams.values():
        l2 = lam ** 2
        if l2 >= 1.0:
            continue
        nz = an > 0
        p[nz] += 0.25 * l2 ** (an[nz] - 1) * (1 + l2) * (1 - l2) ** 2
        p[~nz] += 0.5 * (1 - l2) ** 2
    keep = (n % 2 == 0) if sublattice == "even" else (n % 2 == 1)
    return np.where(keep, p, 0.0)


def analytic_origin_probability(theta: float, phi: float) -> float:
    """``<P_0> = [(1 - l+^2)^2 + (1 - l-^2)^2] / 2``."""
    lams = parity_lambdas(theta, phi)
    return float(sum(0.5 * (1 - lam ** 2) ** 2 for lam in lams.values()))


def analytic_participation_ratio(theta: float, phi: float) -> float:
    """Participation ratio of the even-step bound-subspace envelope."""
    lams = parity_lambdas(theta, phi)
    lmax = max((v for v in lams.values() if v < 1.0), default=0.0)
    n_max = max(_required_half_width(lmax, 1e-14), 2)
    p = analytic_mean_distribution(theta, phi, n_max, "even")
    return float(np.sum(p ** 2))


def sublattice_partner_state(state: WalkerState) -> WalkerState:
    """Partner eigenstate at ``E + pi`` (same parity)."""
    return apply_sublattice(state)
