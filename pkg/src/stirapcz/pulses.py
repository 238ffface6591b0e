"""Double-STIRAP control fields.

The pump envelope is antisymmetric in time (the pi phase flip of the
second STIRAP sequence) and the Stokes envelope is symmetric; the
intermediate detuning changes sign at t = 0.  The simulation time axis is
t in [-Tg/2, +Tg/2] with Tg = 2*(t2 + 3*omega).
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import constants as C


@dataclass(frozen=True)
class PulseParams:
    """Waveform parameters: the optimizable triple (t1, t2, omega) in us
    plus the fixed amplitudes, detuning and blockade strength in rad/us."""

    t1: float
    t2: float
    omega: float
    omega_p_max: float = C.OMEGA_P_MAX
    omega_c_max: float = C.OMEGA_C_MAX
    delta0: float = C.DELTA0
    blockade: float = C.BLOCKADE

    def __post_init__(self):
        if not (self.omega > 0 and 0 < self.t1 < self.t2):
            raise ValueError("require omega > 0 and 0 < t1 < t2")
        if not (self.omega_p_max > 0 and self.omega_c_max > 0):
            raise ValueError("peak amplitudes must be positive")

    @property
    def tg(self):
        """Gate duration Tg = 2*(t2 + 3*omega)."""
        return 2.0 * (self.t2 + 3.0 * self.omega)

    @classmethod
    def preset(cls, name, **kwargs):
        t1, t2, w = C.PRESETS[name]
        return cls(t1, t2, w, **kwargs)


@dataclass
class WaveformSample:
    """Instantaneous control fields (rad/us)."""

    omega_p: complex
    omega_c: complex
    delta: float


def omega_p(t, p):
    """Pump envelope; odd in t."""
    t = np.asarray(t, dtype=float)
    a = (t + p.t1) / p.omega
    b = (t - p.t1) / p.omega
    out = p.omega_p_max * (np.exp(-0.5 * a * a) - np.exp(-0.5 * b * b))
    return out if out.ndim else float(out)


def omega_c(t, p):
    """Stokes envelope; even in t."""
    t = np.asarray(t, dtype=float)
    a = (t + p.t2) / p.omega
    b = (t - p.t2) / p.omega
    out = p.omega_c_max * (np.exp(-0.5 * a * a) + np.exp(-0.5 * b * b))
    return out if out.ndim else float(out)


def detuning(t, p, eps_delta_big=0.0):
    """Intermediate detuning schedule: +(Delta0 + eps) before the midpoint,
    -(Delta0 + eps) from t = 0 on."""
    sign = np.where(np.asarray(t, dtype=float) < 0.0, 1.0, -1.0)
    out = sign * (p.delta0 + eps_delta_big)
    return out if out.ndim else float(out)


def beam_factor(pos, waist, rayleigh):
    """Gaussian-beam intensity envelope at position (x, y, z) in um for a
    beam with equal x/y waists propagating along z.  Always <= 1."""
    x, y, z = pos
    g = 1.0 + (z / rayleigh) ** 2
    return np.exp(-(x * x) / (waist * waist * g)
                  - (y * y) / (waist * waist * g)) / g ** 0.5


def atom_scalings(e):
    """Static waveform multipliers per atom implied by an ErrorSample:
    ((pump_c, stokes_c), (pump_t, stokes_t))."""
    out = []
    for pos in (e.pos_c, e.pos_t):
        fp = beam_factor(pos, C.WAIST_P, C.RAYLEIGH_P)
        fc = beam_factor(pos, C.WAIST_C, C.RAYLEIGH_C)
        out.append(((1.0 + e.eps_omega_p) * fp, (1.0 + e.eps_omega_c) * fc))
    return tuple(out)


def apply_modifiers(w, t, e, atom=0):
    """Noise-modified waveform sample for one atom: amplitude-error and
    beam-inhomogeneity scalings plus the optional Doppler phase factors
    exp(i*eps*t).  Doppler handled as constant detuning shifts does not
    pass through here (it enters the Hamiltonian diagonal instead)."""
    sp, sc = atom_scalings(e)[atom]
    wp = w.omega_p * sp
    wc = w.omega_c * sc
    rp, rc = e.phase_rates
    if rp != 0.0:
        wp = wp * np.exp(1j * rp * t)
    if rc != 0.0:
        wc = wc * np.exp(1j * rc * t)
    return WaveformSample(wp, wc, w.delta)


def sample(t, p, e=None, atom=0):
    """Waveform sample at time t, optionally noise-modified."""
    w = WaveformSample(omega_p(t, p), omega_c(t, p),
                       detuning(t, p, 0.0 if e is None else e.eps_delta_big))
    if e is None:
        return w
    return apply_modifiers(w, t, e, atom)


def write_waveform_csv(path, p, n=501):
    """Dump (t_us, omega_p, omega_c, delta) over the gate window."""
    ts = np.linspace(-p.tg / 2, p.tg / 2, n)
    with open(path, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["t_us", "omega_p", "omega_c", "delta"])
        for t in ts:
            wr.writerow([f"{t:.6f}", f"{omega_p(t, p):.6f}",
                         f"{omega_c(t, p):.6f}", f"{detuning(t, p):.6f}"])
