"""
Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every criterion is checked at its stated tolerance. A criterion made of
several sub-checks reports each of them, so a failure names what failed.
"""

import time

import numpy as np
import pytest

from phasewalk import bound_states as bs
from phasewalk import open_system as osys
from phasewalk.localisation import default_phi_grid, localisation_row
from phasewalk.spectral import diagonalize_ring
from phasewalk.walk import WalkConfig, WalkerState, apply_reflection, apply_sublattice, step

Q = np.pi / 4
SX = np.array([[0, 1], [1, 0]])


def report(acceptance, k, checks, extra=""):
    """``checks`` maps sub-check name -> (ok, detail)."""
    ok = all(c[0] for c in checks.values())
    failed = [f"{name} ({detail})" for name, (good, detail) in checks.items() if not good]
    summary = f"{len(checks) - len(failed)}/{len(checks)} sub-checks"
    if extra:
        summary += f"; {extra}"
    if failed:
        summary += "; failed: " + "; ".join(failed)
    acceptance[k] = (ok, summary)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {summary}")
    assert ok, summary


def slope_jumps(f):
    s = np.diff(f)
    return np.abs(np.diff(s))  # jump at interior point i is index i - 1


def kink_at(f, i):
    """Slope jump at grid point ``i`` against the jumps at ``i +- 1``."""
    J = slope_jumps(f)
    here, nb = J[i - 1], max(J[i - 2], J[i])
    return here > 5 * nb, f"jump {here:.3g} vs neighbours {nb:.3g}"


# ------------------------------------------------------------------ 1

def test_criterion_1_spectrum_agreement(acceptance):
    t0 = time.perf_counter()
    phis = (np.arange(64) + 0.5) * 2 * np.pi / 64
    worst, missing = 0.0, 0
    compared = 0
    for phi in phis:
        spec = diagonalize_ring(Q, phi, 201)
        flagged = spec.bound_energies
        for b in bs.solve_bound_states(Q, phi):
            if abs(b.lam) > 0.95:
                continue
            compared += 1
            if flagged.size == 0:
                missing += 1
                continue
            d = np.min(np.abs(np.angle(np.exp(1j * (flagged - b.energy)))))
            worst = max(worst, d)
    dt = time.perf_counter() - t0
    report(acceptance, 1, {
        "energies within 1e-6": (worst < 1e-6 and missing == 0,
                                 f"worst {worst:.2e}, unmatched {missing}"),
        "runtime < 2 min": (dt < 120, f"{dt:.1f} s"),
    }, f"{compared} states compared, worst {worst:.1e}, {dt:.1f} s")


# ------------------------------------------------------------------ 2

def _exists(theta, phi, parity):
    return any(b.parity == parity for b in bs.solve_bound_states(theta, phi))


def test_criterion_2_existence_windows(acceptance):
    d = 1e-3
    checks = {}
    for name, theta in (("pi/6", np.pi / 6), ("pi/4", Q), ("pi/3", np.pi / 3)):
        # symmetric exactly on (0, 2 pi - 2 theta)
        sym_edge = 2 * np.pi - 2 * theta
        anti_edge = 2 * theta
        cases = [
            (+1, d, True), (+1, 2 * np.pi - d, False),
            (+1, sym_edge - d, True), (+1, sym_edge + d, False),
            (-1, anti_edge - d, False), (-1, anti_edge + d, True),
            (-1, 2 * np.pi - d, True), (-1, d, False),
        ]
        bad = [f"p={p:+d} phi={phi / np.pi:.4f}pi expected {want}"
               for p, phi, want in cases if _exists(theta, phi, p) != want]
        checks[f"theta={name}"] = (not bad, ", ".join(bad) or "ok")
    report(acceptance, 2, checks)


# ------------------------------------------------------------------ 3

def test_criterion_3_eigenstates(acceptance):
    checks = {}
    states = bs.solve_bound_states(Q, np.pi)
    checks["four states"] = (len(states) == 4, f"{len(states)} found")
    for b in states:
        s = bs.bound_state_amplitudes(b)
        a = np.pad(s.amplitudes, ((0, 0), (1, 1)))
        cfg = WalkConfig(Q, np.pi, s.half_width + 1)
        out = step(WalkerState(a), cfg).amplitudes
        err = np.max(np.abs(out - np.exp(-1j * b.energy) * a))
        checks[f"p={b.parity:+d} E={b.energy / np.pi:+.4f}pi"] = (err < 1e-8, f"{err:.1e}")
    report(acceptance, 3, checks)


# ------------------------------------------------------------------ 4

def test_criterion_4_localisation_curve(acceptance):
    t0 = time.perf_counter()
    phis = default_phi_grid(256)
    i_half, i_pi, i_3half = 64, 128, 192
    rows = [localisation_row(Q, phi, 150) for phi in phis]
    pr = np.array([r.pr_numeric for r in rows])
    pra = np.array([r.pr_analytic for r in rows])
    leff = np.array([bs.effective_inverse_localisation_length(Q, phi) for phi in phis])
    dt = time.perf_counter() - t0

    mirror = lambda f: np.max(np.abs(f[1:] - f[1:][::-1]))
    checks = {
        "l_eff symmetric": (mirror(leff) < 1e-6, f"{mirror(leff):.1e}"),
        "PR symmetric": (mirror(pr) < 1e-6, f"{mirror(pr):.1e}"),
        "l_eff max at pi": (np.argmax(leff) == i_pi,
                            f"argmax {phis[np.argmax(leff)] / np.pi:.4f}pi"),
        "PR max at pi": (np.argmax(pr) == i_pi,
                         f"argmax {phis[np.argmax(pr)] / np.pi:.4f}pi, "
                         f"PR there {pr.max():.6f} vs {pr[i_pi]:.6f} at pi"),
    }
    for name, f in (("l_eff", leff), ("PR", pr)):
        for label, i in (("pi/2", i_half), ("3pi/2", i_3half)):
            checks[f"{name} kink at {label}"] = kink_at(f, i)
    below = pra - pr
    checks["PR_numeric >= PR_analytic"] = (np.all(below <= 0), f"max excess {below.max():.2e}")
    win = (phis > 0.6 * np.pi) & (phis < 1.4 * np.pi)
    diff = np.max(np.abs(pr - pra)[win])
    checks["|PR diff| < 2e-2 on (0.6pi, 1.4pi)"] = (diff < 2e-2, f"{diff:.2e}")
    checks["runtime < 5 min"] = (dt < 300, f"{dt:.1f} s")
    report(acceptance, 4, checks, f"{dt:.1f} s")


# ------------------------------------------------------------------ 5

def test_criterion_5_origin_probability(acceptance):
    checks = {}
    for k in (0.75, 1.0, 1.25):
        row = localisation_row(Q, k * np.pi, 150)
        lam = bs.parity_lambdas(Q, k * np.pi)
        ref = 0.5 * ((1 - lam[+1] ** 2) ** 2 + (1 - lam[-1] ** 2) ** 2)
        err = abs(row.p0_numeric - ref)
        checks[f"phi={k}pi"] = (err < 1e-3, f"{row.p0_numeric:.5f} vs {ref:.5f}")
    report(acceptance, 5, checks)


# ------------------------------------------------------------------ 6

def test_criterion_6_gap_and_concurrence_spectrum(acceptance):
    gap = {b.parity: b.energy for b in bs.solve_bound_states(Q, np.pi) if b.in_gap}
    dE = abs(gap[+1] - gap[-1])
    C = osys.rhp_measure(Q, np.pi, 500).values[100:501]
    amp = np.abs(np.fft.rfft(C - C.mean()))
    freq = np.fft.rfftfreq(len(C))
    period = np.full_like(freq, np.inf)
    period[1:] = 1 / freq[1:]
    top = period[np.argmax(amp)]
    # bins next to the period-2 line carry its leakage; look beyond them
    slow = period >= 3
    second = period[slow][np.argmax(amp[slow])]
    target = 2 * np.pi / dE
    report(acceptance, 6, {
        "|dE - 0.205pi| < 0.005pi": (abs(dE - 0.205 * np.pi) < 0.005 * np.pi,
                                     f"dE = {dE / np.pi:.4f}pi"),
        "dominant period 2": (abs(top - 2) < 0.05, f"{top:.3f}"),
        "second period 2pi/dE +- 0.5": (abs(second - target) < 0.5 and abs(second - 9.8) < 0.5,
                                        f"{second:.2f} vs {target:.2f}"),
    }, f"dE = {dE / np.pi:.4f}pi, periods {top:.3f} and {second:.2f}")


# ------------------------------------------------------------------ 7

def test_criterion_7_blp(acceptance):
    t0 = time.perf_counter()
    phis = default_phi_grid(64)
    times = (150, 300, 500)
    res = [osys.blp_measure(Q, phi, times) for phi in phis]
    dt = time.perf_counter() - t0
    N = np.array([[r.measure for r in rs] for rs in res])  # (phi, t)
    i_pi, i_half, i_3half = 32, 16, 48
    checks = {}
    for j, t in enumerate(times):
        checks[f"max at pi, t={t}"] = (np.argmax(N[:, j]) == i_pi,
                                       f"argmax {phis[np.argmax(N[:, j])] / np.pi:.4f}pi")
    ratio = N[i_pi, 2] / N[i_pi, 1]
    checks["linear growth"] = (abs(ratio / (5 / 3) - 1) < 0.1, f"ratio {ratio:.4f}")
    best = res[i_pi][2]
    dg, de = np.pi / 64, 2 * np.pi / 64
    eta = np.mod(best.eta, np.pi)
    near_eta = min(eta, np.pi - eta) <= de
    checks["sigma_x pair at pi"] = (abs(best.gamma - np.pi / 2) <= dg and near_eta,
                                    f"gamma {best.gamma / np.pi:.4f}pi, eta {best.eta / np.pi:.4f}pi")
    for label, i in (("pi/2", i_half), ("3pi/2", i_3half)):
        for j, t in enumerate(times):
            v = N[i - 1:i + 2, j]
            checks[f"local min at {label}, t={t}"] = (
                v[1] < v[0] and v[1] < v[2], " / ".join(f"{x:.3f}" for x in v))
    checks["runtime < 15 min"] = (dt < 900, f"{dt:.1f} s, 1 process")
    report(acceptance, 7, checks, f"N(pi) = {N[i_pi, 2]:.2f} at t=500, {dt:.1f} s")


# ------------------------------------------------------------------ 8

def test_criterion_8_rhp(acceptance):
    I_pi = osys.rhp_measure(Q, np.pi, 500).accumulated
    checks = {}
    for name, k in (("pi/4", 0.25), ("pi/3", 1 / 3), ("11pi/6", 11 / 6)):
        v = osys.rhp_measure(Q, k * np.pi, 500).measure
        checks[f"I({name}) < 0.05 I(pi)"] = (v < 0.05 * I_pi[500],
                                            f"{v:.3f} vs {0.05 * I_pi[500]:.3f}")
    ratio = I_pi[500] / I_pi[300]
    checks["linear growth"] = (abs(ratio / (5 / 3) - 1) < 0.1, f"ratio {ratio:.4f}")
    report(acceptance, 8, checks, f"I(pi) = {I_pi[500]:.2f} at t=500")


# ------------------------------------------------------------------ 9

def test_criterion_9_property_suites(acceptance):
    rng = np.random.default_rng(20261016)
    n = 100
    fails = {k: 0 for k in ("unitarity", "S and R", "det T", "T inverse", "partial trace",
                            "Werner concurrence", "F bound projection", "P_n closure")}

    def random_state(L=6):
        a = rng.normal(size=(2, 2 * L + 1)) + 1j * rng.normal(size=(2, 2 * L + 1))
        a[:, [0, -1]] = 0
        return WalkerState(a / np.linalg.norm(a))

    def unitary(m):
        q, r = np.linalg.qr(rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)))
        return q * (np.diag(r) / np.abs(np.diag(r)))

    for _ in range(n):
        theta, phi = rng.uniform(0, 2 * np.pi, 2)
        s = random_state()
        cfg = WalkConfig(theta, phi, s.half_width)
        w = step(s, cfg)
        fails["unitarity"] += abs(w.norm() - 1) > 1e-12
        e1 = np.max(np.abs(step(apply_sublattice(s), cfg).amplitudes
                           + apply_sublattice(w).amplitudes))
        e2 = np.max(np.abs(step(apply_reflection(s), cfg).amplitudes
                           - apply_reflection(w).amplitudes))
        fails["S and R"] += max(e1, e2) > 1e-12

        th = rng.uniform(0.05, np.pi / 2 - 0.05)
        T = bs.transfer_matrix(th, rng.uniform(-np.pi, np.pi), rng.uniform(0, 2 * np.pi))
        fails["det T"] += abs(np.linalg.det(T) - 1) > 1e-9
        fails["T inverse"] += np.max(np.abs(np.linalg.inv(T) - SX @ T @ SX)) > 1e-9

        rho = s.amplitudes @ s.amplitudes.conj().T
        fails["partial trace"] += (np.linalg.eigvalsh(rho).min() < -1e-12
                                   or abs(np.trace(rho) - 1) > 1e-12)

        p = rng.uniform()
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        U = np.kron(unitary(2), unitary(2))
        rw = U @ (p * np.outer(bell, bell) + (1 - p) * np.eye(4) / 4) @ U.conj().T
        fails["Werner concurrence"] += abs(osys.concurrence(rw) - max(0, (3 * p - 1) / 2)) > 1e-7

        # redraw parameters whose states sit so close to a window edge that
        # their wavefunctions would need more than 1e5 sites per side
        while True:
            th, ph = rng.uniform(0.05, np.pi / 2 - 0.05), rng.uniform(0, 2 * np.pi)
            if all(bs._required_half_width(b.lam) <= 10**5 for b in bs.solve_bound_states(th, ph)):
                break
        g, e = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        psi = osys.coin_state(g, e)
        proj = sum(abs(np.vdot(bs.bound_state_amplitudes(b).site(0), psi)) ** 2
                   for b in bs.solve_bound_states(th, ph))
        fails["F bound projection"] += abs(proj - bs.bound_overlap(g, e, th, ph)) > 1e-8

        lams = bs.parity_lambdas(th, ph)
        m = max(bs._required_half_width(max((l for l in lams.values() if l < 1), default=0.0),
                                        1e-17), 2)
        total = sum(1 - l ** 2 for l in lams.values()) / 2
        pe = bs.analytic_mean_distribution(th, ph, m, "even").sum()
        po = bs.analytic_mean_distribution(th, ph, m, "odd").sum()
        fails["P_n closure"] += max(abs(pe - total), abs(po - total)) > 1e-10

    report(acceptance, 9, {k: (v == 0, f"{v}/{n} failed") for k, v in fails.items()},
           f"{n} randomized cases each")
