"""Stochastic error models and the Monte-Carlo averaging harness.

Every noise channel is quasi-static: one value per gate run, constant
over its duration.  All sampling is driven by a seeded generator so any
experiment is reproducible from (seed, configuration).
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import constants as C
from . import metrics, pulses
from .dynamics import (DecayConstants, ErrorSample, IntegratorError,
                       IntegratorOptions)


@dataclass(frozen=True)
class DistributionSpec:
    """Bounded noise law on [-eps, eps]: gaussian (truncated), uniform or
    ushaped (arcsine)."""

    kind: str
    eps: float
    sigma_fraction: float = 0.5

    def __post_init__(self):
        if self.kind not in ("gaussian", "uniform", "ushaped"):
            raise ValueError("unknown distribution kind %r" % (self.kind,))
        if self.eps < 0 or self.sigma_fraction <= 0:
            raise ValueError("eps must be >= 0 and sigma_fraction > 0")


def sample_detuning_error(spec, rng):
    """One draw from a DistributionSpec; never falls outside [-eps, eps]."""
    if spec.eps == 0.0:
        return 0.0
    if spec.kind == "uniform":
        return rng.uniform(-spec.eps, spec.eps)
    if spec.kind == "ushaped":
        return spec.eps * math.sin(math.pi * (rng.uniform(0.0, 1.0) - 0.5))
    sigma = spec.sigma_fraction * spec.eps
    while True:  # truncated normal by resampling
        v = rng.normal(0.0, sigma)
        if abs(v) <= spec.eps:
            return v


def velocity_rms(temp_mk, mass=C.MASS_RB87):
    """Thermal 1D rms velocity (m/s) at temperature temp_mk (mK)."""
    if temp_mk < 0:
        raise ValueError("temperature must be nonnegative")
    return math.sqrt(C.KB * temp_mk * 1e-3 / mass)


def sample_doppler(temp_mk, rng, mass=C.MASS_RB87):
    """Doppler detuning errors (eps_Delta, eps_delta) in rad/us.

    The atom velocity is normal with the thermal rms; the intermediate
    shift uses the pump wavevector alone, the two-photon shift the
    counterpropagating effective wavevector.  Numerically k [rad/um]
    times v [m/s] already lands in rad/us."""
    v = rng.normal(0.0, velocity_rms(temp_mk, mass)) if temp_mk > 0 else 0.0
    return C.K_P * v, C.K_EFF * v


def ac_stark_detuning(eps_omega_p, eps_omega_c, p, n_t=801):
    """Amplitude-noise-induced two-photon detuning from the ac Stark shift.

    Returns (times, eps_delta(t), max |eps_delta|) built from the
    unperturbed waveforms; the static compensated part is excluded."""
    ts = np.linspace(-p.tg / 2, p.tg / 2, n_t)
    wp = pulses.omega_p(ts, p)
    wc = pulses.omega_c(ts, p)
    eps = (wp ** 2 / (2.0 * p.delta0) * eps_omega_p
           - wc ** 2 / (2.0 * p.delta0) * eps_omega_c)
    return ts, eps, float(np.abs(eps).max())


def position_sigmas(temp_mk, trap_freqs=C.TRAP_FREQS, mass=C.MASS_RB87):
    """Thermal position spread (um) per trap axis."""
    v = velocity_rms(temp_mk, mass)
    return tuple(v / w for w in trap_freqs)


def sample_positions(temp_mk, rng, trap_freqs=C.TRAP_FREQS,
                     mass=C.MASS_RB87):
    """Gaussian atom positions for both atoms plus their beam factors.

    Returns ((pos_c, pos_t), ((fp_c, fc_c), (fp_t, fc_t))) with positions
    in um and one intensity factor per (atom, laser)."""
    sig = position_sigmas(temp_mk, trap_freqs, mass)
    positions = []
    factors = []
    for _ in range(2):
        pos = tuple(rng.normal(0.0, s) if s > 0 else 0.0 for s in sig)
        positions.append(pos)
        factors.append((pulses.beam_factor(pos, C.WAIST_P, C.RAYLEIGH_P),
                        pulses.beam_factor(pos, C.WAIST_C, C.RAYLEIGH_C)))
    return tuple(positions), tuple(factors)


def sample_phase_dephasing(gamma_z, rng):
    """Dephasing rate pair, each uniform on [0, gamma_z]."""
    if gamma_z < 0:
        raise ValueError("gamma_z must be nonnegative")
    if gamma_z == 0.0:
        return 0.0, 0.0
    return rng.uniform(0.0, gamma_z), rng.uniform(0.0, gamma_z)


def interaction_deviation(fraction, b, rng, c6=C.C6, r0=C.R0):
    """Blockade-strength fluctuation uniform on [-fraction*b, fraction*b]
    plus the implied interatomic-distance deviation delta_r (um)."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    db = rng.uniform(-fraction * b, fraction * b) if fraction > 0 else 0.0
    delta_r = r0 ** 7 * (fraction * b) / (6.0 * c6)
    return db, delta_r


@dataclass(frozen=True)
class NoiseConfig:
    """Which noise channels act during a run and with what bounds.

    Unset channels (None / 0) contribute nothing.  doppler_as_phase
    switches the Doppler model from constant detuning shifts to the
    time-dependent phase-factor representation (cross-check path)."""

    detuning: DistributionSpec | None = None
    doppler_temp_mk: float | None = None
    doppler_as_phase: bool = False
    amplitude_bound: float = 0.0
    positions_temp_mk: float | None = None
    dephasing_gamma_z: float = 0.0
    interaction_fraction: float = 0.0
    decays: bool = False

    def sample(self, rng, pulse=None):
        """Draw one ErrorSample from the configured channels."""
        eps_delta = 0.0
        eps_big_const = 0.0
        phase_rates = (0.0, 0.0)
        if self.detuning is not None:
            eps_delta += sample_detuning_error(self.detuning, rng)
        if self.doppler_temp_mk is not None:
            eps_big, eps_two = sample_doppler(self.doppler_temp_mk, rng)
            if self.doppler_as_phase:
                # gauge-equivalent phase factors: -k_p*v on the pump term,
                # (k_p - k_eff)*v = +k_c*v on the counterpropagating Stokes
                phase_rates = (-eps_big, eps_big - eps_two)
            else:
                eps_delta += eps_two
                eps_big_const += eps_big
        eps_wp = eps_wc = 0.0
        if self.amplitude_bound > 0.0:
            eps_wp = rng.uniform(-self.amplitude_bound, self.amplitude_bound)
            eps_wc = rng.uniform(-self.amplitude_bound, self.amplitude_bound)
        pos_c = pos_t = (0.0, 0.0, 0.0)
        if self.positions_temp_mk is not None:
            (pos_c, pos_t), _ = sample_positions(self.positions_temp_mk, rng)
        g1, g2 = sample_phase_dephasing(self.dephasing_gamma_z, rng)
        db = 0.0
        if self.interaction_fraction > 0.0:
            db, _ = interaction_deviation(self.interaction_fraction,
                                          C.BLOCKADE, rng)
        return ErrorSample(eps_delta=eps_delta,
                           eps_delta_big_const=eps_big_const,
                           phase_rates=phase_rates,
                           eps_omega_p=eps_wp, eps_omega_c=eps_wc,
                           gamma1=g1, gamma2=g2,
                           pos_c=pos_c, pos_t=pos_t, delta_b=db)


@dataclass
class MonteCarloResult:
    mean_paper: float
    mean_phase: float | None
    stderr_paper: float
    stderr_phase: float | None
    n_samples: int
    n_failed: int
    samples: list


def monte_carlo_fidelity(p, cfg, n, seed, opts=IntegratorOptions(),
                         compute_phase=True, paper_mode="sqrt"):
    """Average gate fidelity over n independent error realizations.

    Deterministic given (seed, cfg, n).  All samples are drawn first from
    the seeded stream; failed integrations are excluded and counted."""
    if n < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    errors = [cfg.sample(rng) for _ in range(n)]
    d = DecayConstants() if cfg.decays else None
    vals_paper = []
    vals_phase = []
    log = []
    n_failed = 0
    for e in errors:
        try:
            res = metrics.gate_result(p, e, d, opts,
                                      compute_phase=compute_phase,
                                      paper_mode=paper_mode)
        except IntegratorError:
            n_failed += 1
            continue
        vals_paper.append(res.fidelity_paper)
        if compute_phase:
            vals_phase.append(res.fidelity_phase)
        log.append({"error": e, "fidelity_paper": res.fidelity_paper,
                    "fidelity_phase": res.fidelity_phase})

    def _stats(vals):
        if not vals:
            return float("nan"), float("nan")
        arr = np.asarray(vals)
        se = arr.std(ddof=1) / math.sqrt(arr.size) if arr.size > 1 else 0.0
        return float(arr.mean()), float(se)

    mean_p, se_p = _stats(vals_paper)
    if compute_phase:
        mean_f, se_f = _stats(vals_phase)
    else:
        mean_f = se_f = None
    return MonteCarloResult(mean_p, mean_f, se_p, se_f,
                            len(vals_paper), n_failed, log)


def write_experiment_csv(path, rows):
    """rows: iterable of (x_value, mean_infidelity, stderr, n, n_failed)."""
    with open(path, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["x_value", "mean_infidelity", "stderr",
                     "n_samples", "n_failed"])
        for row in rows:
            wr.writerow([f"{row[0]:.6g}", f"{row[1]:.9e}", f"{row[2]:.3e}",
                         row[3], row[4]])


def write_distribution_csv(path, spec, n=2000, bins=41, seed=0):
    """Histogram profile of a DistributionSpec for figure reproduction."""
    rng = np.random.default_rng(seed)
    draws = [sample_detuning_error(spec, rng) for _ in range(n)]
    hist, edges = np.histogram(draws, bins=bins,
                               range=(-spec.eps, spec.eps), density=True)
    with open(path, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["eps_center", "density"])
        for h, lo, hi in zip(hist, edges[:-1], edges[1:]):
            wr.writerow([f"{0.5 * (lo + hi):.6g}", f"{h:.6g}"])
