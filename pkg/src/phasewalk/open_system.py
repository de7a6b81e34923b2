"""
Reduced coin dynamics and non-Markovianity witnesses.

Position is traced out and the coin treated as an open system. Because the
walk is linear, every reduced quantity for walks started at the origin
follows from two evolutions, of ``|up,0>`` and ``|down,0>``: with
``psi_i(n)`` the coin spinor at site ``n`` after starting from basis coin
``i``, the coin map acts as

    Lambda_t(|i><j|) = sum_n psi_i(n) psi_j(n)^dagger.

The BLP measure over a whole grid of initial pairs and the coin-ancilla state
for the RHP measure are both read off these operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .walk import UP, DOWN, WalkConfig, WalkerState, step_array

__all__ = [
    "PAULI",
    "CoinDensityMatrix",
    "CoinAncillaState",
    "MeasureSeries",
    "BLPResult",
    "BlochAverage",
    "coin_state",
    "reduced_coin",
    "bloch_vector",
    "density_from_bloch",
    "trace_distance",
    "coin_map_history",
    "bloch_map_history",
    "bloch_history",
    "accumulate_increases",
    "pair_trace_distances",
    "blp_measure",
    "mean_bloch_x",
    "bell_state",
    "coin_ancilla_initial",
    "evolve_with_ancilla",
    "concurrence",
    "rhp_measure",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

BLP_GRID = 64
BLP_REFINE = 8
DEFAULT_TIMES = (150, 300, 500)


# --------------------------------------------------------------------------
# states and reduced density matrices

@dataclass(frozen=True)
class CoinDensityMatrix:
    """Reduced coin state, ``rho = (I + r . sigma) / 2``."""

    rho: NDArray[np.complex128]

    @property
    def bloch(self) -> NDArray[np.float64]:
        return bloch_vector(self.rho)

    @classmethod
    def from_bloch(cls, r: ArrayLike) -> "CoinDensityMatrix":
        return cls(density_from_bloch(r))


@dataclass(frozen=True)
class CoinAncillaState:
    """Amplitudes indexed ``(coin, ancilla, site)``; the ancilla never moves."""

    amplitudes: NDArray[np.complex128]
    time: int = 0

    @property
    def half_width(self) -> int:
        return self.amplitudes.shape[-1] // 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def coin_state(gamma: float, eta: float) -> NDArray[np.complex128]:
    """``cos(gamma/2) |up> + e^{i eta} sin(gamma/2) |down>``."""
    return np.array([np.cos(gamma / 2), np.exp(1j * eta) * np.sin(gamma / 2)],
                    dtype=np.complex128)


def bloch_vector(rho: ArrayLike) -> NDArray[np.float64]:
    rho = np.asarray(rho)
    return np.real(np.einsum("kij,...ji->...k", PAULI, rho))


def density_from_bloch(r: ArrayLike) -> NDArray[np.complex128]:
    r = np.asarray(r, dtype=float)
    return 0.5 * (np.eye(2) + np.einsum("...k,kij->...ij", r, PAULI))


def reduced_coin(state: WalkerState | CoinAncillaState) -> NDArray[np.complex128]:
    """Trace out position.

    A walker state gives the 2x2 coin matrix; a coin-ancilla state gives the
    4x4 matrix in the basis ``(coin, ancilla)`` = ``uu, ud, du, dd``.
    """
    a = state.amplitudes
    if isinstance(state, CoinAncillaState):
        flat = a.reshape(4, -1)
        return flat @ flat.conj().T
    return a @ a.conj().T


def trace_distance(rho1: ArrayLike, rho2: ArrayLike) -> float:
    """Half the trace norm of ``rho1 - rho2``.

    For qubits the difference is traceless, so its eigenvalues are
    ``+-|Delta r|/2`` and the distance is ``|r1 - r2| / 2``; larger matrices
    go through a Hermitian eigensolve.
    """
    d = np.asarray(rho1) - np.asarray(rho2)
    if d.shape == (2, 2):
        return float(0.5 * np.linalg.norm(bloch_vector(d)))
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))


# --------------------------------------------------------------------------
# coin map from two basis evolutions

def _basis_evolution(theta, phi, t_max, callback):
    cfg = WalkConfig.for_steps(theta, phi, t_max)
    L = cfg.lattice_half_width
    psi = np.zeros((2, 2, cfg.n_sites), dtype=np.complex128)
    psi[UP, UP, L] = 1.0
    psi[DOWN, DOWN, L] = 1.0
    callback(0, psi)
    for k in range(1, t_max + 1):
        psi = step_array(psi, theta, phi)
        callback(k, psi)


def coin_map_history(theta: float, phi: float, t_max: int) -> NDArray[np.complex128]:
    """``K[t, i, j] = Lambda_t(|i><j|)`` for ``t = 0..t_max``.

    Shape ``(t_max + 1, 2, 2, 2, 2)``; the last two axes hold the 2x2 output.
    """
    K = np.empty((t_max + 1, 2, 2, 2, 2), dtype=np.complex128)

    def record(k, psi):
        K[k] = np.einsum("icn,jdn->ijcd", psi, psi.conj())

    _basis_evolution(theta, phi, t_max, record)
    return K


def bloch_map_history(K: NDArray[np.complex128]) -> tuple[NDArray, NDArray]:
    """Affine Bloch-vector form ``r_t = M_t r_0 + b_t`` of the coin map.

    Returns ``(M, b)`` with shapes ``(T, 3, 3)`` and ``(T, 3)``.
    """
    # Lambda(I) and Lambda(sigma_k) as 2x2 matrices
    lam_I = K[:, 0, 0] + K[:, 1, 1]
    lam_s = np.einsum("kij,tijcd->tkcd", PAULI, K)
    b = 0.5 * np.real(np.einsum("lab,tba->tl", PAULI, lam_I))
    M = 0.5 * np.real(np.einsum("lab,tkba->tlk", PAULI, lam_s))
    return M, b


def bloch_history(theta: float, phi: float, t_max: int, coin: ArrayLike) -> NDArray[np.float64]:
    """Coin Bloch vector at ``t = 0..t_max`` for the walk started at ``coin (x) |0>``."""
    c = np.asarray(coin, dtype=np.complex128).reshape(2)
    c = c / np.linalg.norm(c)
    K = coin_map_history(theta, phi, t_max)
    rho = np.einsum("i,j,tijcd->tcd", c, c.conj(), K)
    return bloch_vector(rho)


# --------------------------------------------------------------------------
# BLP

@dataclass(frozen=True)
class MeasureSeries:
    """Per-step witness values and the running sum of their increases."""

    values: NDArray[np.float64]
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def increments(self) -> NDArray[np.float64]:
        return np.diff(self.values)

    @property
    def accumulated(self) -> NDArray[np.float64]:
        """Running measure, aligned with ``values`` (starts at 0)."""
        return accumulate_increases(self.values)

    @property
    def measure(self) -> float:
        return float(self.accumulated[-1])


def accumulate_increases(values: ArrayLike) -> NDArray[np.float64]:
    """Running sum of the positive step-to-step increases, starting at 0."""
    v = np.asarray(values, dtype=float)
    inc = np.clip(np.diff(v, axis=-1), 0.0, None)
    zero = np.zeros(v.shape[:-1] + (1,))
    return np.concatenate([zero, np.cumsum(inc, axis=-1)], axis=-1)


def _directions(gamma, eta):
    gamma, eta = np.broadcast_arrays(np.asarray(gamma, float), np.asarray(eta, float))
    return np.stack([np.sin(gamma) * np.cos(eta), np.sin(gamma) * np.sin(eta), np.cos(gamma)],
                    axis=-1)


def pair_trace_distances(M: NDArray, gamma, eta) -> NDArray[np.float64]:
    """Trace distance between the walks started from antipodal coins.

    For the pair with initial Bloch vectors ``+-n`` the distance at step ``t``
    is ``|M_t n|``. Output shape is ``broadcast(gamma, eta).shape + (T,)``.
    """
    n = _directions(gamma, eta)
    return np.linalg.norm(np.einsum("tlk,...k->...tl", M, n), axis=-1)


@dataclass(frozen=True)
class BLPResult:
    """Best orthogonal pair found on the grid and its trace-distance series.

    The pair is the coin ``(gamma, eta)`` and its antipode
    ``(pi - gamma, eta + pi)``.
    """

    measure: float
    gamma: float
    eta: float
    series: MeasureSeries
    t_max: int

    @property
    def pair(self) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
        return coin_state(self.gamma, self.eta), coin_state(np.pi - self.gamma, self.eta + np.pi)


def blp_grid(n: int = BLP_GRID) -> tuple[NDArray, NDArray]:
    """Default search grid: ``gamma = i pi / n`` (``i = 0..n``), ``eta = 2 pi j / n``."""
    return np.linspace(0.0, np.pi, n + 1), 2 * np.pi * np.arange(n) / n


def blp_measure(
    theta: float,
    phi: float,
    t_max: int | tuple[int, ...] = 500,
    grid: int | tuple[NDArray, NDArray] = BLP_GRID,
    refine: int = BLP_REFINE,
    K: NDArray | None = None,
) -> BLPResult | list[BLPResult]:
    """Trace-distance measure maximized over orthogonal initial coin pairs.

    Sums the positive increments of ``D`` between consecutive steps. The
    maximum over the ``(gamma, eta)`` grid is refined once on a
    ``refine x refine`` grid spanning the neighbouring cells. Passing several
    horizons in ``t_max`` reuses one evolution and returns one result each.
    """
    times = (t_max,) if np.ndim(t_max) == 0 else tuple(t_max)
    T = max(times)
    if K is None:
        K = coin_map_history(theta, phi, T)
    M, _ = bloch_map_history(K[: T + 1])
    if isinstance(grid, int):
        gammas, etas = blp_grid(grid)
    else:
        gammas, etas = (np.asarray(g, float) for g in grid)
    G, H = np.meshgrid(gammas, etas, indexing="ij")
    acc = accumulate_increases(pair_trace_distances(M, G, H))  # (ng, ne, T+1)
    dg = gammas[1] - gammas[0] if len(gammas) > 1 else np.pi
    de = etas[1] - etas[0] if len(etas) > 1 else 2 * np.pi

    results = []
    for t in times:
        vals = acc[..., t]
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        g0, e0, best = G[i, j], H[i, j], vals[i, j]
        if refine > 1:
            rg = np.clip(g0 + np.linspace(-dg, dg, refine), 0.0, np.pi)
            re = e0 + np.linspace(-de, de, refine)
            RG, RE = np.meshgrid(rg, re, indexing="ij")
            racc = accumulate_increases(pair_trace_distances(M[: t + 1], RG, RE))[..., t]
            k, l = np.unravel_index(np.argmax(racc), racc.shape)
            if racc[k, l] > best:
                g0, e0, best = RG[k, l], RE[k, l], racc[k, l]
        D = pair_trace_distances(M[: t + 1], g0, e0)
        e0 = float(np.mod(e0, 2 * np.pi))
        series = MeasureSeries(D, "trace_distance",
                               {"theta": theta, "phi": phi, "gamma": float(g0), "eta": e0})
        results.append(BLPResult(float(best), float(g0), e0, series, t))
    return results[0] if np.ndim(t_max) == 0 else results


@dataclass(frozen=True)
class BlochAverage:
    mean: float
    even: float
    odd: float


def mean_bloch_x(
    theta: float,
    phi: float,
    initial: ArrayLike,
    window: tuple[int, int] = (400, 500),
    history: NDArray | None = None,
) -> BlochAverage:
    """Time average of ``r_x`` over steps ``window[0]+1 .. window[1]``.

    The even- and odd-step sub-averages separate the period-two sublattice
    oscillation. ``history`` may carry a precomputed Bloch history.
    """
    t0, t1 = window
    if not 0 <= t0 < t1:
        raise ValueError(f"bad window {window}")
    r = bloch_history(theta, phi, t1, initial) if history is None else history
    ts = np.arange(t0 + 1, t1 + 1)
    rx = r[ts, 0]
    return BlochAverage(float(rx.mean()), float(rx[ts % 2 == 0].mean()),
                        float(rx[ts % 2 == 1].mean()))


# --------------------------------------------------------------------------
# RHP

_KET_RIGHT = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)
_KET_LEFT = np.array([1, -1], dtype=np.complex128) / np.sqrt(2)


def bell_state(basis: str = "x") -> NDArray[np.complex128]:
    """Coin-ancilla Bell state as a 2x2 array ``[coin, ancilla]``.

    ``"x"``: ``(|left>_C |down>_A + |right>_C |up>_A) / sqrt 2``, coin in the
    sigma_x eigenbasis. ``"z"``: ``(|up,up> + |down,down>) / sqrt 2``.
    """
    if basis == "x":
        return (np.outer(_KET_LEFT, [0, 1]) + np.outer(_KET_RIGHT, [1, 0])) / np.sqrt(2)
    if basis == "z":
        return np.eye(2, dtype=np.complex128) / np.sqrt(2)
    raise ValueError(f"basis must be 'x' or 'z', got {basis!r}")


def coin_ancilla_initial(config: WalkConfig, basis: str = "x") -> CoinAncillaState:
    a = np.zeros((2, 2, config.n_sites), dtype=np.complex128)
    a[:, :, config.lattice_half_width] = bell_state(basis)
    return CoinAncillaState(a)


def evolve_with_ancilla(
    theta: float,
    phi: float,
    t_max: int,
    basis: str = "x",
) -> NDArray[np.complex128]:
    """Coin-ancilla density matrices ``rho_t`` for ``t = 0..t_max``.

    The walk acts on coin and position; the ancilla is a spectator. Output
    shape ``(t_max + 1, 4, 4)`` in the basis ``uu, ud, du, dd``.
    """
    cfg = WalkConfig.for_steps(theta, phi, t_max)
    state = coin_ancilla_initial(cfg, basis)
    out = np.empty((t_max + 1, 4, 4), dtype=np.complex128)
    out[0] = reduced_coin(state)
    # move the ancilla index in front so the kernel sees (ancilla, coin, site)
    a = np.swapaxes(state.amplitudes, 0, 1)
    for k in range(1, t_max + 1):
        a = step_array(a, theta, phi)
        out[k] = reduced_coin(CoinAncillaState(np.swapaxes(a, 0, 1), k))
    return out


_YY = np.kron(SIGMA_Y, SIGMA_Y)


def concurrence(rho: ArrayLike) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    ``C = max(0, s1 - s2 - s3 - s4)`` with ``s_i`` the decreasing square roots
    of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)``. These are obtained from
    the Hermitian matrix ``sqrt(rho) (Y x Y) rho* (Y x Y) sqrt(rho)``, which
    has the same spectrum.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    rho = 0.5 * (rho + rho.conj().T)
    w, v = np.linalg.eigh(rho)
    sq = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    tilde = _YY @ rho.conj() @ _YY
    R = sq @ tilde @ sq
    mu = np.linalg.eigvalsh(0.5 * (R + R.conj().T))
    s = np.sort(np.sqrt(np.clip(mu, 0.0, None)))[::-1]
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def rhp_measure(theta: float, phi: float, t_max: int = 500, basis: str = "x") -> MeasureSeries:
    """Entanglement measure: positive concurrence increases, Bell-state start."""
    rhos = evolve_with_ancilla(theta, phi, t_max, basis)
    C = np.array([concurrence(r) for r in rhos])
    return MeasureSeries(C, "concurrence", {"theta": theta, "phi": phi, "basis": basis})
