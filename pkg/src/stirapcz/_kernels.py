"""Compiled propagation kernels for the gate simulator.

Everything here is numba-jitted and deliberately low level: the rest of the
package builds problem arrays (diagonals, sparse coupling terms, jump lists)
and hands them to these integrators.  Two integration methods are provided,
an adaptive embedded Dormand-Prince 5(4) pair and a fixed-step classical RK4,
for both state vectors and density matrices.

Hamiltonian layout shared by all kernels::

    H(t) = diag(d0 + s(t) * df)
           + sum_k pulse_k(t) * scale_k * exp(i*rate_k*t) * C_k  + h.c.

with s(t) = +1 for t < 0 and -1 for t >= 0 (the mid-gate detuning reversal),
pulse_k(t) one of the two STIRAP envelopes, and C_k a sparse 0/1 coupling
pattern given in COO form.
"""

import numpy as np
from numba import njit

# status codes returned by the adaptive integrators
OK = 0
ERR_UNDERFLOW = 1  # step size collapsed below h_min
ERR_MAXSTEPS = 2


@njit(cache=True, inline="always")
def _pulse_pair(t, t1, t2, w, wp_max, wc_max):
    """STIRAP envelopes at time t: antisymmetric pump, symmetric Stokes."""
    a = (t + t1) / w
    b = (t - t1) / w
    wp = wp_max * (np.exp(-0.5 * a * a) - np.exp(-0.5 * b * b))
    a = (t + t2) / w
    b = (t - t2) / w
    wc = wc_max * (np.exp(-0.5 * a * a) + np.exp(-0.5 * b * b))
    return wp, wc


@njit(cache=True)
def _rhs_state(t, y, out, d0, df, pp,
               term_pulse, term_scale, term_rate, term_ptr, coo_r, coo_c):
    """out = -i H(t) y for the sparse Hamiltonian layout."""
    n = y.shape[0]
    s = 1.0 if t < 0.0 else -1.0
    wp, wc = _pulse_pair(t, pp[0], pp[1], pp[2], pp[3], pp[4])
    for i in range(n):
        out[i] = -1j * (d0[i] + s * df[i]) * y[i]
    for k in range(term_pulse.shape[0]):
        f = wp if term_pulse[k] == 0 else wc
        amp = f * term_scale[k]
        if term_rate[k] != 0.0:
            amp = amp * np.exp(1j * term_rate[k] * t)
        ca = np.conj(amp)
        for e in range(term_ptr[k], term_ptr[k + 1]):
            r = coo_r[e]
            c = coo_c[e]
            out[r] += -1j * amp * y[c]
            out[c] += -1j * ca * y[r]


@njit(cache=True)
def _rhs_density(t, R, out, d0, df, pp,
                 term_pulse, term_scale, term_rate, term_ptr, coo_r, coo_c,
                 A, jump_atom, jump_i, jump_j, jump_rate):
    """out = -i[H(t), R] + dissipator(R).

    A is the precomputed elementwise (real) matrix holding the anticommutator
    losses and diagonal-dephasing terms; jump_* lists the single-atom decay
    channels sqrt(rate)|i><j| on atom 0 (control) or 1 (target) of a 5-level
    pair basis (flat index 5*c + t).  jump_atom = 2 addresses R directly by
    (i, j) for single-atom (non-tensor) runs.
    """
    n = R.shape[0]
    s = 1.0 if t < 0.0 else -1.0
    wp, wc = _pulse_pair(t, pp[0], pp[1], pp[2], pp[3], pp[4])
    for i in range(n):
        for j in range(n):
            out[i, j] = (-1j * (d0[i] + s * df[i] - d0[j] - s * df[j])
                         + A[i, j]) * R[i, j]
    for k in range(term_pulse.shape[0]):
        f = wp if term_pulse[k] == 0 else wc
        amp = f * term_scale[k]
        if term_rate[k] != 0.0:
            amp = amp * np.exp(1j * term_rate[k] * t)
        ca = np.conj(amp)
        for e in range(term_ptr[k], term_ptr[k + 1]):
            r = coo_r[e]
            c = coo_c[e]
            for j in range(n):
                out[r, j] += -1j * amp * R[c, j]
                out[c, j] += -1j * ca * R[r, j]
            for i in range(n):
                out[i, c] += 1j * amp * R[i, r]
                out[i, r] += 1j * ca * R[i, c]
    # spontaneous-decay gain terms (population refill)
    for q in range(jump_atom.shape[0]):
        rate = jump_rate[q]
        ii = jump_i[q]
        jj = jump_j[q]
        if jump_atom[q] == 0:
            for m in range(5):
                for kk in range(5):
                    out[5 * ii + m, 5 * ii + kk] += rate * R[5 * jj + m, 5 * jj + kk]
        elif jump_atom[q] == 1:
            for m in range(5):
                for kk in range(5):
                    out[5 * m + ii, 5 * kk + ii] += rate * R[5 * m + jj, 5 * kk + jj]
        else:
            out[ii, ii] += rate * R[jj, jj]


# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
_A21 = 0.2
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
# 4th-order error weights (b - b_hat)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)


@njit(cache=True)
def dopri5_state(y0, t0, t1, rtol, atol, max_step,
                 d0, df, pp,
                 term_pulse, term_scale, term_rate, term_ptr, coo_r, coo_c):
    """Adaptive DP54 propagation of y' = -iH(t)y over [t0, t1].

    Returns (y, status, n_steps).  The caller is responsible for splitting
    the run at the detuning-reversal time t = 0.
    """
    n = y0.shape[0]
    y = y0.copy()
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    k5 = np.empty(n, np.complex128)
    k6 = np.empty(n, np.complex128)
    k7 = np.empty(n, np.complex128)
    yt = np.empty(n, np.complex128)
    y5 = np.empty(n, np.complex128)
    t = t0
    span = t1 - t0
    h = min(1e-4, max_step, span)
    hmin = span * 1e-14
    _rhs_state(t, y, k1, d0, df, pp, term_pulse, term_scale, term_rate,
               term_ptr, coo_r, coo_c)
    nsteps = 0
    while t < t1:
        if h > max_step:
            h = max_step
        if t + h > t1:
            h = t1 - t
        if h < hmin:
            return y, ERR_UNDERFLOW, nsteps
        for i in range(n):
            yt[i] = y[i] + h * _A21 * k1[i]
        _rhs_state(t + _C2 * h, yt, k2, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        for i in range(n):
            yt[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
        _rhs_state(t + _C3 * h, yt, k3, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        for i in range(n):
            yt[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
        _rhs_state(t + _C4 * h, yt, k4, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        for i in range(n):
            yt[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i]
                                + _A54 * k4[i])
        _rhs_state(t + _C5 * h, yt, k5, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        for i in range(n):
            yt[i] = y[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i]
                                + _A64 * k4[i] + _A65 * k5[i])
        _rhs_state(t + h, yt, k6, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        for i in range(n):
            y5[i] = y[i] + h * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i]
                                + _B5 * k5[i] + _B6 * k6[i])
        _rhs_state(t + h, y5, k7, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        errsum = 0.0
        for i in range(n):
            e = h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i]
                     + _E6 * k6[i] + _E7 * k7[i])
            ay = abs(y[i])
            ay5 = abs(y5[i])
            sc = atol + rtol * (ay if ay > ay5 else ay5)
            q = abs(e) / sc
            errsum += q * q
        err = np.sqrt(errsum / n)
        if err <= 1.0:
            t += h
            for i in range(n):
                y[i] = y5[i]
                k1[i] = k7[i]
            nsteps += 1
            if nsteps > 100_000_000:
                return y, ERR_MAXSTEPS, nsteps
        fac = 0.9 * err ** -0.2 if err > 0.0 else 5.0
        if fac < 0.2:
            fac = 0.2
        elif fac > 5.0:
            fac = 5.0
        h *= fac
    return y, OK, nsteps


@njit(cache=True)
def rk4_state(y0, t0, t1, dt,
              d0, df, pp,
              term_pulse, term_scale, term_rate, term_ptr, coo_r, coo_c):
    """Fixed-step classical RK4 oracle for the state-vector path."""
    n = y0.shape[0]
    y = y0.copy()
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    yt = np.empty(n, np.complex128)
    nstep = int(np.ceil((t1 - t0) / dt))
    h = (t1 - t0) / nstep
    t = t0
    for _ in range(nstep):
        _rhs_state(t, y, k1, d0, df, pp, term_pulse, term_scale, term_rate,
                   term_ptr, coo_r, coo_c)
        for i in range(n):
            yt[i] = y[i] + 0.5 * h * k1[i]
        _rhs_state(t + 0.5 * h, yt, k2, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        for i in range(n):
            yt[i] = y[i] + 0.5 * h * k2[i]
        _rhs_state(t + 0.5 * h, yt, k3, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        for i in range(n):
            yt[i] = y[i] + h * k3[i]
        _rhs_state(t + h, yt, k4, d0, df, pp, term_pulse, term_scale,
                   term_rate, term_ptr, coo_r, coo_c)
        for i in range(n):
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        t += h
    return y


@njit(cache=True)
def dopri5_density(R0, t0, t1, rtol, atol, max_step,
                   d0, df, pp,
                   term_pulse, term_scale, term_rate, term_ptr, coo_r, coo_c,
                   A, jump_atom, jump_i, jump_j, jump_rate):
    """Adaptive DP54 propagation of the Lindblad equation over [t0, t1].

    The density matrix is re-hermitized after every accepted step.
    Returns (R, status, n_steps).
    """
    n = R0.shape[0]
    R = R0.copy()
    k1 = np.empty((n, n), np.complex128)
    k2 = np.empty((n, n), np.complex128)
    k3 = np.empty((n, n), np.complex128)
    k4 = np.empty((n, n), np.complex128)
    k5 = np.empty((n, n), np.complex128)
    k6 = np.empty((n, n), np.complex128)
    k7 = np.empty((n, n), np.complex128)
    Rt = np.empty((n, n), np.complex128)
    R5 = np.empty((n, n), np.complex128)
    t = t0
    span = t1 - t0
    h = min(1e-4, max_step, span)
    hmin = span * 1e-14
    _rhs_density(t, R, k1, d0, df, pp, term_pulse, term_scale, term_rate,
                 term_ptr, coo_r, coo_c, A, jump_atom, jump_i, jump_j, jump_rate)
    nsteps = 0
    while t < t1:
        if h > max_step:
            h = max_step
        if t + h > t1:
            h = t1 - t
        if h < hmin:
            return R, ERR_UNDERFLOW, nsteps
        for i in range(n):
            for j in range(n):
                Rt[i, j] = R[i, j] + h * _A21 * k1[i, j]
        _rhs_density(t + _C2 * h, Rt, k2, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        for i in range(n):
            for j in range(n):
                Rt[i, j] = R[i, j] + h * (_A31 * k1[i, j] + _A32 * k2[i, j])
        _rhs_density(t + _C3 * h, Rt, k3, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        for i in range(n):
            for j in range(n):
                Rt[i, j] = R[i, j] + h * (_A41 * k1[i, j] + _A42 * k2[i, j]
                                          + _A43 * k3[i, j])
        _rhs_density(t + _C4 * h, Rt, k4, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        for i in range(n):
            for j in range(n):
                Rt[i, j] = R[i, j] + h * (_A51 * k1[i, j] + _A52 * k2[i, j]
                                          + _A53 * k3[i, j] + _A54 * k4[i, j])
        _rhs_density(t + _C5 * h, Rt, k5, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        for i in range(n):
            for j in range(n):
                Rt[i, j] = R[i, j] + h * (_A61 * k1[i, j] + _A62 * k2[i, j]
                                          + _A63 * k3[i, j] + _A64 * k4[i, j]
                                          + _A65 * k5[i, j])
        _rhs_density(t + h, Rt, k6, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        for i in range(n):
            for j in range(n):
                R5[i, j] = R[i, j] + h * (_B1 * k1[i, j] + _B3 * k3[i, j]
                                          + _B4 * k4[i, j] + _B5 * k5[i, j]
                                          + _B6 * k6[i, j])
        _rhs_density(t + h, R5, k7, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        errsum = 0.0
        for i in range(n):
            for j in range(n):
                e = h * (_E1 * k1[i, j] + _E3 * k3[i, j] + _E4 * k4[i, j]
                         + _E5 * k5[i, j] + _E6 * k6[i, j] + _E7 * k7[i, j])
                ay = abs(R[i, j])
                ay5 = abs(R5[i, j])
                sc = atol + rtol * (ay if ay > ay5 else ay5)
                q = abs(e) / sc
                errsum += q * q
        err = np.sqrt(errsum / (n * n))
        if err <= 1.0:
            t += h
            for i in range(n):
                R[i, i] = R5[i, i].real + 0.0j
                for j in range(i + 1, n):
                    v = 0.5 * (R5[i, j] + np.conj(R5[j, i]))
                    R[i, j] = v
                    R[j, i] = np.conj(v)
            _rhs_density(t, R, k1, d0, df, pp, term_pulse, term_scale,
                         term_rate, term_ptr, coo_r, coo_c, A, jump_atom,
                         jump_i, jump_j, jump_rate)
            nsteps += 1
            if nsteps > 100_000_000:
                return R, ERR_MAXSTEPS, nsteps
        fac = 0.9 * err ** -0.2 if err > 0.0 else 5.0
        if fac < 0.2:
            fac = 0.2
        elif fac > 5.0:
            fac = 5.0
        h *= fac
    return R, OK, nsteps


@njit(cache=True)
def rk4_density(R0, t0, t1, dt,
                d0, df, pp,
                term_pulse, term_scale, term_rate, term_ptr, coo_r, coo_c,
                A, jump_atom, jump_i, jump_j, jump_rate):
    """Fixed-step classical RK4 oracle for the Lindblad path."""
    n = R0.shape[0]
    R = R0.copy()
    k1 = np.empty((n, n), np.complex128)
    k2 = np.empty((n, n), np.complex128)
    k3 = np.empty((n, n), np.complex128)
    k4 = np.empty((n, n), np.complex128)
    Rt = np.empty((n, n), np.complex128)
    nstep = int(np.ceil((t1 - t0) / dt))
    h = (t1 - t0) / nstep
    t = t0
    for _ in range(nstep):
        _rhs_density(t, R, k1, d0, df, pp, term_pulse, term_scale, term_rate,
                     term_ptr, coo_r, coo_c, A, jump_atom, jump_i, jump_j,
                     jump_rate)
        for i in range(n):
            for j in range(n):
                Rt[i, j] = R[i, j] + 0.5 * h * k1[i, j]
        _rhs_density(t + 0.5 * h, Rt, k2, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        for i in range(n):
            for j in range(n):
                Rt[i, j] = R[i, j] + 0.5 * h * k2[i, j]
        _rhs_density(t + 0.5 * h, Rt, k3, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        for i in range(n):
            for j in range(n):
                Rt[i, j] = R[i, j] + h * k3[i, j]
        _rhs_density(t + h, Rt, k4, d0, df, pp, term_pulse, term_scale,
                     term_rate, term_ptr, coo_r, coo_c, A, jump_atom, jump_i,
                     jump_j, jump_rate)
        for i in range(n):
            for j in range(n):
                R[i, j] += (h / 6.0) * (k1[i, j] + 2.0 * k2[i, j]
                                        + 2.0 * k3[i, j] + k4[i, j])
        t += h
    return R
