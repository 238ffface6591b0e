"""Two-atom Hamiltonian, Lindblad dissipator and master-equation evolution.

Reference operators are assembled densely in numpy for inspection and
testing; the integrators themselves consume a compact layout (diagonals,
sparse coupling terms, jump lists) handled by the compiled kernels in
``_kernels``.  Every run covers t in [-Tg/2, +Tg/2] and is split at t = 0
where the intermediate detuning reverses sign.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from . import constants as C
from . import pulses, qla
from .constants import DIM2, L0, L1, LD, LP, LR, N_LEVELS


@dataclass(frozen=True)
class DecayConstants:
    """Spontaneous-decay rates (1/us) and branching ratios."""

    gamma_r: float = C.GAMMA_R
    gamma_p: float = C.GAMMA_P
    branch_r: tuple = (0.059, 0.055, 0.886)    # |r> -> |0>, |1>, |d>
    branch_p: tuple = (0.1354, 0.2504, 0.6142)  # |p> -> |0>, |1>, |d>

    def __post_init__(self):
        if self.gamma_r < 0 or self.gamma_p < 0:
            raise ValueError("decay rates must be nonnegative")
        for br in (self.branch_r, self.branch_p):
            if self.gamma_r or self.gamma_p:
                if abs(sum(br) - 1.0) > 1e-4:
                    raise ValueError("branching ratios must sum to 1")

    @classmethod
    def none(cls):
        """No spontaneous decay."""
        return cls(gamma_r=0.0, gamma_p=0.0)

    def jumps(self):
        """Single-atom jump channels as (source, destination, rate)."""
        out = []
        dests = (L0, L1, LD)
        for src, gamma, br in ((LP, self.gamma_p, self.branch_p),
                               (LR, self.gamma_r, self.branch_r)):
            if gamma > 0.0:
                for dst, b in zip(dests, br):
                    out.append((src, dst, gamma * b))
        return out


@dataclass(frozen=True)
class ErrorSample:
    """One realization of all quasi-static noise channels.

    eps_delta is the two-photon detuning error (on |r>), eps_delta_big the
    intermediate detuning error that reverses sign together with Delta0,
    and eps_delta_big_const a constant intermediate shift that does not
    (the Doppler case).  phase_rates carries the alternate Doppler
    representation as exp(i*eps*t) phase factors on (pump, Stokes).
    All angular frequencies in rad/us, positions in um.
    """

    eps_delta: float = 0.0
    eps_delta_big: float = 0.0
    eps_delta_big_const: float = 0.0
    phase_rates: tuple = (0.0, 0.0)
    eps_omega_p: float = 0.0
    eps_omega_c: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    pos_c: tuple = (0.0, 0.0, 0.0)
    pos_t: tuple = (0.0, 0.0, 0.0)
    delta_b: float = 0.0

    def __post_init__(self):
        vals = [self.eps_delta, self.eps_delta_big, self.eps_delta_big_const,
                self.eps_omega_p, self.eps_omega_c, self.gamma1, self.gamma2,
                self.delta_b, *self.phase_rates, *self.pos_c, *self.pos_t]
        if not np.all(np.isfinite(vals)):
            raise ValueError("ErrorSample fields must be finite")

    @property
    def symmetric(self):
        """True when control and target atoms see identical fields."""
        return self.pos_c == self.pos_t


@dataclass(frozen=True)
class IntegratorOptions:
    """method "dopri5" (adaptive) or "rk4" (fixed step dt)."""

    method: str = "dopri5"
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    max_step: float | None = None  # default omega/20
    dt: float = 5e-5

    def __post_init__(self):
        if self.method not in ("dopri5", "rk4"):
            raise ValueError("unknown integrator method %r" % (self.method,))
        if self.rel_tol <= 0 or self.abs_tol <= 0 or self.dt <= 0:
            raise ValueError("tolerances and dt must be positive")


class IntegratorError(RuntimeError):
    """Adaptive step-size control failed; carries the failure time."""

    def __init__(self, message, t):
        super().__init__(f"{message} at t = {t:.6f} us")
        self.t = t


ZERO_ERRORS = ErrorSample()
_STATUS_MSG = {K.ERR_UNDERFLOW: "step size underflow",
               K.ERR_MAXSTEPS: "step budget exhausted"}


# ---------------------------------------------------------------------------
# dense reference operators

def single_atom_h(t, p, e=ZERO_ERRORS, atom=0):
    """5x5 single-atom Hamiltonian at time t (|d> stays uncoupled)."""
    w = pulses.sample(t, p, e, atom)
    h = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    h[LP, L1] = 0.5 * w.omega_p
    h[LR, LP] = 0.5 * w.omega_c
    h = h + h.conj().T
    h[LR, LR] = -e.eps_delta
    # w.delta carries the sign-reversed Delta0 + eps_delta_big; the
    # constant (non-reversed) intermediate shift is added on top
    h[LP, LP] = -w.delta - e.eps_delta_big_const
    return h


def two_atom_h(t, p, e=ZERO_ERRORS):
    """25x25 Hamiltonian: tensor sum of the single-atom parts plus the
    blockade shift (B + delta_b) on |rr>."""
    eye = np.eye(N_LEVELS)
    h = (qla.kron(single_atom_h(t, p, e, 0), eye)
         + qla.kron(eye, single_atom_h(t, p, e, 1)))
    rr = qla.flat_index(LR, LR)
    h[rr, rr] += p.blockade + e.delta_b
    return h


def jump_operators(d, e=ZERO_ERRORS):
    """Two-atom jump operators (decay and dephasing) as dense matrices."""
    eye = np.eye(N_LEVELS)
    ops = []
    singles = []
    for src, dst, rate in d.jumps():
        op = np.zeros((N_LEVELS, N_LEVELS))
        op[dst, src] = np.sqrt(rate)
        singles.append(op)
    for gamma, lo, hi in ((e.gamma1, L1, LP), (e.gamma2, LP, LR)):
        if gamma > 0.0:
            op = np.zeros((N_LEVELS, N_LEVELS))
            op[hi, hi] = np.sqrt(gamma / 2.0)
            op[lo, lo] = -np.sqrt(gamma / 2.0)
            singles.append(op)
    for op in singles:
        ops.append(qla.kron(op, eye))
        ops.append(qla.kron(eye, op))
    return ops


def lindblad_rhs(rho, t, p, e=ZERO_ERRORS, d=None):
    """Reference Lindblad right-hand side (pure numpy, used for testing
    the compiled kernels)."""
    if d is None:
        d = DecayConstants()
    h = two_atom_h(t, p, e)
    out = -1j * (h @ rho - rho @ h)
    for op in jump_operators(d, e):
        opd = op.conj().T
        anti = opd @ op
        out += op @ rho @ opd - 0.5 * (anti @ rho + rho @ anti)
    return out


# ---------------------------------------------------------------------------
# kernel problem layouts

def _coupling_terms(e, pump_rows, pump_cols, stokes_rows, stokes_cols,
                    scalings):
    """Assemble the sparse coupling-term arrays for one or two atoms."""
    rows, cols, ptr, pulse_id, scale, rate = [], [], [0], [], [], []
    rp, rc = e.phase_rates
    for (prows, pcols, srows, scols), (sp, sc) in zip(
            zip(pump_rows, pump_cols, stokes_rows, stokes_cols), scalings):
        rows += prows
        cols += pcols
        ptr.append(len(rows))
        pulse_id.append(0)
        scale.append(0.5 * sp)
        rate.append(rp)
        rows += srows
        cols += scols
        ptr.append(len(rows))
        pulse_id.append(1)
        scale.append(0.5 * sc)
        rate.append(rc)
    return (np.array(pulse_id, np.int64), np.array(scale, np.complex128),
            np.array(rate, np.float64), np.array(ptr, np.int64),
            np.array(rows, np.int64), np.array(cols, np.int64))


def two_atom_layout(p, e=ZERO_ERRORS):
    """(d0, df, terms...) arrays describing H(t) on the full 25-dim space."""
    d0 = np.zeros(DIM2, np.complex128)
    df = np.zeros(DIM2, np.float64)
    for i in range(DIM2):
        c, t = qla.level_pair(i)
        for lvl in (c, t):
            if lvl == LR:
                d0[i] += -e.eps_delta
            elif lvl == LP:
                d0[i] += -e.eps_delta_big_const
                df[i] += -(p.delta0 + e.eps_delta_big)
    rr = qla.flat_index(LR, LR)
    d0[rr] += p.blockade + e.delta_b

    span = range(N_LEVELS)
    pump_rows = ([qla.flat_index(LP, m) for m in span],
                 [qla.flat_index(m, LP) for m in span])
    pump_cols = ([qla.flat_index(L1, m) for m in span],
                 [qla.flat_index(m, L1) for m in span])
    stokes_rows = ([qla.flat_index(LR, m) for m in span],
                   [qla.flat_index(m, LR) for m in span])
    stokes_cols = ([qla.flat_index(LP, m) for m in span],
                   [qla.flat_index(m, LP) for m in span])
    terms = _coupling_terms(e, pump_rows, pump_cols, stokes_rows, stokes_cols,
                            pulses.atom_scalings(e))
    return d0, df, terms


def channel_layout_single(p, e=ZERO_ERRORS, atom=1):
    """3-dim {1, p, r} layout for the decay-free 01/10 channels."""
    d0 = np.array([0.0, -e.eps_delta_big_const, -e.eps_delta], np.complex128)
    df = np.array([0.0, -(p.delta0 + e.eps_delta_big), 0.0], np.float64)
    terms = _coupling_terms(e, ([1],), ([0],), ([2],), ([1],),
                            (pulses.atom_scalings(e)[atom],))
    return d0, df, terms


def channel_layout_pair(p, e=ZERO_ERRORS):
    """9-dim {1, p, r} x {1, p, r} layout for the decay-free 11 channel."""
    d0 = np.zeros(9, np.complex128)
    df = np.zeros(9, np.float64)
    for a in range(3):
        for b in range(3):
            i = 3 * a + b
            for lvl in (a, b):
                if lvl == 2:
                    d0[i] += -e.eps_delta
                elif lvl == 1:
                    d0[i] += -e.eps_delta_big_const
                    df[i] += -(p.delta0 + e.eps_delta_big)
    d0[8] += p.blockade + e.delta_b
    pump_rows = ([3 + m for m in range(3)], [3 * m + 1 for m in range(3)])
    pump_cols = ([m for m in range(3)], [3 * m for m in range(3)])
    stokes_rows = ([6 + m for m in range(3)], [3 * m + 2 for m in range(3)])
    stokes_cols = ([3 + m for m in range(3)], [3 * m + 1 for m in range(3)])
    terms = _coupling_terms(e, pump_rows, pump_cols, stokes_rows, stokes_cols,
                            pulses.atom_scalings(e))
    return d0, df, terms


def dissipator_arrays(d, e=ZERO_ERRORS):
    """Elementwise damping matrix A and jump-gain lists for the kernels.

    A[i, j] collects -0.5*(Gamma_i + Gamma_j) from the decay channels plus
    the diagonal dephasing contribution -0.5*sum_k (d_i - d_j)^2.
    """
    jumps = (DecayConstants.none() if d is None else d).jumps()
    loss = np.zeros(N_LEVELS)
    for src, _, rate in jumps:
        loss[src] += rate
    gamma_i = np.zeros(DIM2)
    for i in range(DIM2):
        c, t = qla.level_pair(i)
        gamma_i[i] = loss[c] + loss[t]
    a = -0.5 * (gamma_i[:, None] + gamma_i[None, :])

    deph = []
    for gamma, lo, hi in ((e.gamma1, L1, LP), (e.gamma2, LP, LR)):
        if gamma > 0.0:
            v = np.zeros(N_LEVELS)
            v[hi] = np.sqrt(gamma / 2.0)
            v[lo] = -np.sqrt(gamma / 2.0)
            deph.append(v)
    for v in deph:
        for which in (0, 1):
            dv = np.zeros(DIM2)
            for i in range(DIM2):
                c, t = qla.level_pair(i)
                dv[i] = v[c] if which == 0 else v[t]
            a += -0.5 * (dv[:, None] - dv[None, :]) ** 2

    atom_l, src_l, dst_l, rate_l = [], [], [], []
    for which in (0, 1):
        for src, dst, rate in jumps:
            atom_l.append(which)
            dst_l.append(dst)
            src_l.append(src)
            rate_l.append(rate)
    return (a, np.array(atom_l, np.int64), np.array(dst_l, np.int64),
            np.array(src_l, np.int64), np.array(rate_l, np.float64))


def single_atom_layout(p, e=ZERO_ERRORS, atom=1):
    """5-dim (0, 1, p, r, d) layout for one driven atom."""
    d0 = np.zeros(N_LEVELS, np.complex128)
    df = np.zeros(N_LEVELS, np.float64)
    d0[LR] = -e.eps_delta
    d0[LP] = -e.eps_delta_big_const
    df[LP] = -(p.delta0 + e.eps_delta_big)
    terms = _coupling_terms(e, ([LP],), ([L1],), ([LR],), ([LP],),
                            (pulses.atom_scalings(e)[atom],))
    return d0, df, terms


def dissipator_arrays_single(d, e=ZERO_ERRORS):
    """Single-atom counterpart of dissipator_arrays (5x5, direct indexing)."""
    jumps = (DecayConstants.none() if d is None else d).jumps()
    loss = np.zeros(N_LEVELS)
    for src, _, rate in jumps:
        loss[src] += rate
    a = -0.5 * (loss[:, None] + loss[None, :])
    for gamma, lo, hi in ((e.gamma1, L1, LP), (e.gamma2, LP, LR)):
        if gamma > 0.0:
            v = np.zeros(N_LEVELS)
            v[hi] = np.sqrt(gamma / 2.0)
            v[lo] = -np.sqrt(gamma / 2.0)
            a += -0.5 * (v[:, None] - v[None, :]) ** 2
    atom_l = [2] * len(jumps)
    dst_l = [dst for _, dst, _ in jumps]
    src_l = [src for src, _, _ in jumps]
    rate_l = [rate for _, _, rate in jumps]
    return (a, np.array(atom_l, np.int64), np.array(dst_l, np.int64),
            np.array(src_l, np.int64), np.array(rate_l, np.float64))


# ---------------------------------------------------------------------------
# propagation drivers

def _segments(tg, t_eval):
    """Breakpoints covering [-tg/2, tg/2] including 0 and requested times."""
    pts = {-tg / 2, 0.0, tg / 2}
    if t_eval is not None:
        for t in t_eval:
            if not -tg / 2 <= t <= tg / 2:
                raise ValueError("t_eval outside the gate window")
            pts.add(float(t))
    return sorted(pts)


def _pp(p):
    return np.array([p.t1, p.t2, p.omega, p.omega_p_max, p.omega_c_max])


def evolve_state(psi0, p, e=ZERO_ERRORS, opts=IntegratorOptions(),
                 layout=None, t_eval=None):
    """Closed-system propagation of a state vector over the gate.

    layout defaults to the full 25-dim two-atom space; the channel layouts
    above can be passed for reduced runs.  Returns the final state, or
    (final state, states at t_eval) when t_eval is given.
    """
    d0, df, terms = two_atom_layout(p, e) if layout is None else layout
    pp = _pp(p)
    max_step = opts.max_step if opts.max_step is not None else p.omega / 20.0
    y = np.asarray(psi0, np.complex128).copy()
    snaps = []
    pts = _segments(p.tg, t_eval)
    for a, b in zip(pts[:-1], pts[1:]):
        if opts.method == "rk4":
            y = K.rk4_state(y, a, b, opts.dt, d0, df, pp, *terms)
        else:
            y, status, _ = K.dopri5_state(y, a, b, opts.rel_tol, opts.abs_tol,
                                          max_step, d0, df, pp, *terms)
            if status != K.OK:
                raise IntegratorError(_STATUS_MSG[status], b)
        if t_eval is not None and b in set(float(t) for t in t_eval):
            snaps.append(y.copy())
    if t_eval is not None:
        return y, snaps
    return y


def evolve(rho0, p, e=ZERO_ERRORS, d=None, opts=IntegratorOptions(),
           t_eval=None):
    """Integrate the two-atom master equation from -Tg/2 to +Tg/2.

    Returns the final 25x25 density matrix, or (final, snapshots) when
    t_eval is given.  The density matrix is re-hermitized after every
    accepted step inside the kernel.
    """
    d0, df, terms = two_atom_layout(p, e)
    diss = dissipator_arrays(d, e)
    pp = _pp(p)
    max_step = opts.max_step if opts.max_step is not None else p.omega / 20.0
    rho = np.asarray(rho0, np.complex128).copy()
    if rho.shape != (DIM2, DIM2):
        raise ValueError("expected a 25x25 density matrix")
    snaps = []
    pts = _segments(p.tg, t_eval)
    for a, b in zip(pts[:-1], pts[1:]):
        if opts.method == "rk4":
            rho = K.rk4_density(rho, a, b, opts.dt, d0, df, pp, *terms, *diss)
        else:
            rho, status, _ = K.dopri5_density(
                rho, a, b, opts.rel_tol, opts.abs_tol, max_step,
                d0, df, pp, *terms, *diss)
            if status != K.OK:
                raise IntegratorError(_STATUS_MSG[status], b)
        if t_eval is not None and b in set(float(t) for t in t_eval):
            snaps.append(rho.copy())
    if t_eval is not None:
        return rho, snaps
    return rho


def evolve_single(rho0, p, e=ZERO_ERRORS, d=None, opts=IntegratorOptions(),
                  atom=1, t_eval=None):
    """Single-atom 5x5 master-equation evolution (the partner atom sits in
    an uncoupled qubit level for the 01/10 channels, so the two-atom
    problem factorizes)."""
    d0, df, terms = single_atom_layout(p, e, atom)
    diss = dissipator_arrays_single(d, e)
    pp = _pp(p)
    max_step = opts.max_step if opts.max_step is not None else p.omega / 20.0
    rho = np.asarray(rho0, np.complex128).copy()
    if rho.shape != (N_LEVELS, N_LEVELS):
        raise ValueError("expected a 5x5 density matrix")
    snaps = []
    pts = _segments(p.tg, t_eval)
    for a, b in zip(pts[:-1], pts[1:]):
        if opts.method == "rk4":
            rho = K.rk4_density(rho, a, b, opts.dt, d0, df, pp, *terms, *diss)
        else:
            rho, status, _ = K.dopri5_density(
                rho, a, b, opts.rel_tol, opts.abs_tol, max_step,
                d0, df, pp, *terms, *diss)
            if status != K.OK:
                raise IntegratorError(_STATUS_MSG[status], b)
        if t_eval is not None and b in set(float(t) for t in t_eval):
            snaps.append(rho.copy())
    if t_eval is not None:
        return rho, snaps
    return rho


def channel_amplitudes(p, e=ZERO_ERRORS, opts=IntegratorOptions()):
    """Decay-free return amplitudes (a01, a10, a11) of the three coupled
    computational inputs.  a_j = <j|psi_j(Tg/2)>; |00> is uncoupled and
    contributes amplitude 1.  This is the fast path behind all
    closed-system fidelity evaluation."""
    y0 = np.zeros(3, np.complex128)
    y0[0] = 1.0
    a01 = evolve_state(y0, p, e, opts, layout=channel_layout_single(p, e, 1))[0]
    if e.symmetric:
        a10 = a01
    else:
        a10 = evolve_state(y0, p, e, opts,
                           layout=channel_layout_single(p, e, 0))[0]
    y0 = np.zeros(9, np.complex128)
    y0[0] = 1.0
    a11 = evolve_state(y0, p, e, opts, layout=channel_layout_pair(p, e))[0]
    return complex(a01), complex(a10), complex(a11)
