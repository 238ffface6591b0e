"""Adiabatic-elimination analytics: dark/bright eigensystem, effective
two-level models for the 01 and 11 channels, and accumulated-phase
extraction.

These reductions serve as an independent oracle for the full dynamics
(they are integrated with scipy rather than the package's own kernels)
and never enter any cost function.
"""

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import pulses
from .dynamics import IntegratorError


@dataclass
class DarkBrightDecomposition:
    """Adiabatic eigensystem of the single-atom three-level Hamiltonian."""

    alpha: float
    dark: np.ndarray
    bright_plus: np.ndarray
    bright_minus: np.ndarray
    lambda_d: float
    lambda_plus: float
    lambda_minus: float


@dataclass
class EffectiveTwoLevel:
    """Reduced two-level system: H = (rabi/2)|b><a| + h.c. + detuning|b><b|."""

    rabi: float
    detuning: float
    basis: tuple
    shift_1: float = 0.0
    shift_r: float = 0.0


def dark_bright(omega_p, omega_c, delta0):
    """Dark and bright adiabatic states with leading-order eigenvalues.

    Valid for |delta0| >> omega_p, omega_c (a warning is emitted
    otherwise).  The + eigenvalue uses (1 + alpha^2) * omega_c^2 / (4
    delta0); the dimensionally consistent form of the leading-order
    expansion."""
    if omega_c == 0:
        raise ValueError("dark_bright: omega_c = 0 leaves alpha undefined")
    if abs(delta0) < 10.0 * max(abs(omega_p), abs(omega_c)):
        warnings.warn("dark_bright outside the large-detuning regime",
                      stacklevel=2)
    alpha = omega_p / omega_c
    norm = np.sqrt(1.0 + alpha * alpha)
    dark = np.array([-1.0 / norm, 0.0, alpha / norm])
    plus = np.array([alpha / norm, norm * omega_c / (2.0 * delta0),
                     1.0 / norm])
    minus = np.array([-alpha * omega_c / (2.0 * delta0), 1.0,
                      -omega_c / (2.0 * delta0)])
    plus = plus / np.linalg.norm(plus)
    minus = minus / np.linalg.norm(minus)
    lam_plus = (1.0 + alpha * alpha) * omega_c * omega_c / (4.0 * delta0)
    return DarkBrightDecomposition(alpha, dark, plus, minus,
                                   0.0, lam_plus, -delta0)


def h_eff_single(omega_p, omega_c, delta0, delta_small=0.0):
    """Two-level reduction of the single-atom lambda system.

    Rabi = omega_p*omega_c/(2*delta0); the 01-channel detuning is
    delta' = delta_small + (omega_c^2 - omega_p^2)/(4*delta0)."""
    rabi = omega_p * omega_c / (2.0 * delta0)
    shift_1 = omega_p * omega_p / (4.0 * delta0)
    shift_r = delta_small + omega_c * omega_c / (4.0 * delta0)
    return EffectiveTwoLevel(rabi, shift_r - shift_1, ("01", "0r"),
                             shift_1, shift_r)


def h_eff_11(omega_p, omega_c, delta0, delta_small, blockade):
    """Blockaded 11-channel reduction: coupling |11> <-> |chi> with
    Rabi sqrt(2)*Rabi_single and a blockade-leakage detuning correction."""
    single = h_eff_single(omega_p, omega_c, delta0, delta_small)
    rabi = np.sqrt(2.0) * single.rabi
    corr = single.rabi ** 2 / (delta_small
                               + omega_c * omega_c / delta0 + 2.0 * blockade)
    return EffectiveTwoLevel(rabi, single.detuning - corr, ("11", "chi"))


def _effective_rhs(channel, p, delta_small):
    def rhs(t, y):
        wp = pulses.omega_p(t, p)
        wc = pulses.omega_c(t, p)
        dd = pulses.detuning(t, p)
        if channel == "01":
            two = h_eff_single(wp, wc, dd, delta_small)
        else:
            two = h_eff_11(wp, wc, dd, delta_small, p.blockade)
        h01 = 0.5 * two.rabi
        return np.array([-1j * h01 * y[1],
                         -1j * (h01 * y[0] + two.detuning * y[1])])
    return rhs


def evolve_effective(channel, p, eps_delta=0.0, n_t=201, rtol=1e-10,
                     atol=1e-12):
    """Integrate the reduced two-level dynamics over the gate.

    channel is "01" or "11".  The small two-photon detuning of the
    reduction maps to -eps_delta, matching the sign with which eps_delta
    enters the full Hamiltonian (verified against full dynamics by test).
    Returns (times, return population over time, accumulated phase over
    time); the phase trajectory is unwrapped continuously, so its last
    entry is the total accumulated phase.
    """
    if channel not in ("01", "11"):
        raise ValueError("channel must be '01' or '11'")
    ts = np.linspace(-p.tg / 2, p.tg / 2, n_t)
    y0 = np.array([1.0 + 0.0j, 0.0j])
    rhs = _effective_rhs(channel, p, -eps_delta)
    pops = np.empty(n_t)
    phases = np.empty(n_t)
    y = y0
    pops[0] = 1.0
    phases[0] = 0.0
    for i in range(1, n_t):
        sol = solve_ivp(rhs, (ts[i - 1], ts[i]), y, method="DOP853",
                        rtol=rtol, atol=atol)
        if not sol.success:
            raise IntegratorError("effective-model integration failed",
                                  ts[i])
        y = sol.y[:, -1]
        pops[i] = abs(y[0]) ** 2
        phases[i] = np.angle(y[0])
    return ts, pops, np.unwrap(phases)


def eigenbranch_integrals(p, n_t=4001):
    """Quadrature of the instantaneous three-level eigenvalues over the
    gate, grouped into (dark, bright, far) adiabatic branches.  Under the
    sign-reversed detuning schedule each integral is close to zero.
    Returns (integrals dict, integral of |far branch| for scale)."""
    ts = np.linspace(-p.tg / 2, p.tg / 2, n_t)
    lam = np.empty((n_t, 3))
    for i, t in enumerate(ts):
        wp = pulses.omega_p(t, p)
        wc = pulses.omega_c(t, p)
        dd = pulses.detuning(t, p)
        h = np.array([[0.0, wp / 2.0, 0.0],
                      [wp / 2.0, -dd, wc / 2.0],
                      [0.0, wc / 2.0, 0.0]])
        vals = np.linalg.eigvalsh(h)
        # classify: far branch ~ -+Delta0, dark exactly 0, bright small
        far = vals[np.argmax(np.abs(vals))]
        rest = sorted(np.delete(vals, np.argmax(np.abs(vals))),
                      key=abs)
        lam[i] = (rest[0], rest[1], far)
    names = ("dark", "bright", "far")
    integrals = {n: float(np.trapezoid(lam[:, k], ts))
                 for k, n in enumerate(names)}
    scale = float(np.trapezoid(np.abs(lam[:, 2]), ts))
    return integrals, scale


def write_effective_csv(path, p, eps_delta=0.0, n_t=201):
    """Dump (t_us, pop_01, phase_01, pop_11, phase_11) trajectories."""
    ts, pop01, ph01 = evolve_effective("01", p, eps_delta, n_t)
    _, pop11, ph11 = evolve_effective("11", p, eps_delta, n_t)
    with open(path, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["t_us", "pop_01", "phase_01", "pop_11", "phase_11"])
        for i, t in enumerate(ts):
            wr.writerow([f"{t:.6f}", f"{pop01[i]:.9f}", f"{ph01[i]:.9f}",
                         f"{pop11[i]:.9f}", f"{ph11[i]:.9f}"])
