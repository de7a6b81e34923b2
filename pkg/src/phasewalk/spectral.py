"""
Dense diagonalization of the one-step operator on a ring.

This module builds the step matrix directly from its definition rather than
through :mod:`phasewalk.walk`, so it serves as an independent check of both
the time evolution and the analytic bound-state solver.

Quasi-energies follow ``W = exp(-iH)``: an eigenvalue ``w`` of ``W`` gives
``E = -arg(w)`` on the principal branch ``(-pi, pi]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .errors import DegenerateParameterError, DiagonalizationError

__all__ = [
    "QuasiEnergySpectrum",
    "ring_sites",
    "step_matrix",
    "momentum_step_matrix",
    "dispersion",
    "diagonalize_ring",
    "ideal_coin_bloch",
]

DEFAULT_RING_SIZE = 201


@dataclass(frozen=True)
class QuasiEnergySpectrum:
    """Spectrum of the ring step operator, sorted by quasi-energy.

    ``eigenvectors[:, j]`` is the eigenstate of ``energies[j]`` in the basis
    ordered ``(coin, site)`` with sites as in :func:`ring_sites`.
    ``bound_mask`` flags states whose IPR exceeds ``ipr_threshold``.
    """

    energies: NDArray[np.float64]
    eigenvectors: NDArray[np.complex128]
    ipr: NDArray[np.float64]
    sites: NDArray[np.int64]
    ipr_threshold: float

    @property
    def bound_mask(self) -> NDArray[np.bool_]:
        return self.ipr > self.ipr_threshold

    @property
    def bound_energies(self) -> NDArray[np.float64]:
        return self.energies[self.bound_mask]

    def state(self, j: int) -> NDArray[np.complex128]:
        """Eigenvector ``j`` reshaped to ``(2, N)``."""
        return self.eigenvectors[:, j].reshape(2, -1)


def ring_sites(N: int) -> NDArray[np.int64]:
    """Site labels of an ``N``-site ring, with the impurity at label 0.

    Odd ``N`` gives the symmetric window ``-(N-1)/2 .. (N-1)/2``; even ``N``
    runs from ``-N/2`` to ``N/2 - 1``.
    """
    return np.arange(N) - N // 2


def step_matrix(theta: float, phi: float, N: int) -> NDArray[np.complex128]:
    """``W = T C P`` on an ``N``-site ring as a dense ``2N x 2N`` matrix."""
    if N < 3:
        raise ValueError(f"ring needs at least 3 sites, got {N}")
    sites = ring_sites(N)
    origin = int(np.flatnonzero(sites == 0)[0])
    phase = np.ones(N, dtype=np.complex128)
    phase[origin] = np.exp(1j * phi)
    c, s = np.cos(theta), np.sin(theta)
    coin = np.array([[c, -1j * s], [-1j * s, c]])
    right = np.roll(np.eye(N), 1, axis=0)   # |n> -> |n+1>
    left = np.roll(np.eye(N), -1, axis=0)   # |n> -> |n-1>
    P = np.diag(phase)
    W = np.block([
        [coin[0, 0] * right @ P, coin[0, 1] * right @ P],
        [coin[1, 0] * left @ P, coin[1, 1] * left @ P],
    ])
    return W


def momentum_step_matrix(theta: float, k: float) -> NDArray[np.complex128]:
    """Bloch block ``diag(e^{ik}, e^{-ik}) exp(-i theta sigma_x)`` of the standard walk.

    Uses ``|c,k> = sum_n e^{-ikn} |c,n>``, for which the shift multiplies the up
    component by ``e^{ik}`` and the down component by ``e^{-ik}``.
    """
    c, s = np.cos(theta), np.sin(theta)
    return np.diag([np.exp(1j * k), np.exp(-1j * k)]) @ np.array([[c, -1j * s], [-1j * s, c]])


def dispersion(theta: float, k: float) -> tuple[float, float]:
    """The two quasi-energies at quasi-momentum ``k``.

    Returns ``(E, -E)`` with ``E = arccos(cos theta cos k)`` in ``[0, pi]``,
    i.e. the eigenphases of :func:`momentum_step_matrix`. The other sign in
    ``cos E = -cos theta cos k`` is the same set of values at ``k + pi``.
    """
    E = float(np.arccos(np.clip(np.cos(theta) * np.cos(k), -1.0, 1.0)))
    return E, -E


def diagonalize_ring(
    theta: float,
    phi: float,
    N: int = DEFAULT_RING_SIZE,
    ipr_threshold: float | None = None,
) -> QuasiEnergySpectrum:
    """Diagonalize the step operator on an ``N``-site ring.

    States with inverse participation ratio ``sum_n P_n^2`` above
    ``ipr_threshold`` (default ``5/N``) are flagged as bound candidates.
    """
    W = step_matrix(theta, phi, N)
    try:
        w, V = scipy.linalg.eig(W)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise DiagonalizationError(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise DiagonalizationError("eigensolver returned non-finite eigenvalues")
    E = -np.angle(w)
    E = np.where(E <= -np.pi, E + 2 * np.pi, E)
    order = np.argsort(E, kind="stable")
    E, V = E[order], V[:, order]
    # W is normal, but degenerate eigenspaces from a general solver need not be
    # orthonormal; a QR pass within each cluster restores that.
    V = _orthonormalize_clusters(E, V)
    probs = np.abs(V.reshape(2, N, -1)) ** 2
    P = probs.sum(axis=0)
    ipr = np.sum(P ** 2, axis=0)
    thr = 5.0 / N if ipr_threshold is None else ipr_threshold
    return QuasiEnergySpectrum(E, V, ipr, ring_sites(N), thr)


def _orthonormalize_clusters(E, V, tol=1e-8):
    V = V / np.linalg.norm(V, axis=0)
    start = 0
    n = len(E)
    while start < n:
        stop = start + 1
        while stop < n and E[stop] - E[stop - 1] < tol:
            stop += 1
        if stop - start > 1:
            q, _ = np.linalg.qr(V[:, start:stop])
            V[:, start:stop] = q
        start = stop
    return V


def ideal_coin_bloch(theta: float, k: float) -> NDArray[np.float64]:
    """Bloch vector of the coin part of the standard-walk eigenstate at ``k``.

    ``r = (cos k sin theta, -sin k sin theta, -sin k cos theta) / sin E(k)``
    for the branch ``E = +arccos(cos theta cos k)``, eigenvalue ``e^{-iE}``.
    """
    E, _ = dispersion(theta, k)
    sE = np.sin(E)
    if abs(sE) < 1e-12:
        raise DegenerateParameterError(f"sin E(k) = 0 at theta={theta!r}, k={k!r}")
    return np.array([np.cos(k) * np.sin(theta), -np.sin(k) * np.sin(theta),
                     -np.sin(k) * np.cos(theta)]) / sE
