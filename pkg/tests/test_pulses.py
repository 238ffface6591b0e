import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stirapcz import pulses
from stirapcz.constants import WAIST_P, RAYLEIGH_P
from stirapcz.pulses import PulseParams


def test_gate_window(p_to):
    assert p_to.tg == pytest.approx(2.0 * (p_to.t2 + 3.0 * p_to.omega))


def test_validation_rejects_bad_params():
    with pytest.raises(ValueError):
        PulseParams(t1=0.9, t2=0.5, omega=0.16)   # needs t1 < t2
    with pytest.raises(ValueError):
        PulseParams(t1=0.4, t2=0.9, omega=-0.1)


def test_pump_antisymmetric_stokes_symmetric(p_to):
    ts = np.linspace(0.01, p_to.tg / 2, 57)
    assert np.allclose(pulses.omega_p(-ts, p_to), -pulses.omega_p(ts, p_to))
    assert np.allclose(pulses.omega_c(-ts, p_to), pulses.omega_c(ts, p_to))


def test_amplitudes_bounded(p_der):
    ts = np.linspace(-p_der.tg / 2, p_der.tg / 2, 2001)
    assert np.abs(pulses.omega_p(ts, p_der)).max() <= p_der.omega_p_max + 1e-9
    assert pulses.omega_c(ts, p_der).max() <= p_der.omega_c_max + 1e-9
    assert pulses.omega_c(ts, p_der).min() >= 0.0


def test_detuning_sign_reversal(p_to):
    assert pulses.detuning(-0.1, p_to) == pytest.approx(p_to.delta0)
    assert pulses.detuning(0.1, p_to) == pytest.approx(-p_to.delta0)
    eps = 2.0
    assert pulses.detuning(-0.1, p_to, eps) == pytest.approx(p_to.delta0
                                                             + eps)
    assert pulses.detuning(0.1, p_to, eps) == pytest.approx(-p_to.delta0
                                                            - eps)


def test_beam_factor_peaks_on_axis():
    assert pulses.beam_factor((0.0, 0.0, 0.0), WAIST_P, RAYLEIGH_P) == 1.0
    off = pulses.beam_factor((2.0, 1.0, 30.0), WAIST_P, RAYLEIGH_P)
    assert 0.0 < off < 1.0


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-20, 20), y=st.floats(-20, 20), z=st.floats(-500, 500))
def test_beam_factor_never_exceeds_peak(x, y, z):
    f = pulses.beam_factor((x, y, z), WAIST_P, RAYLEIGH_P)
    assert 0.0 < f <= 1.0


def test_waveform_csv(tmp_path, p_to):
    path = tmp_path / "wf.csv"
    pulses.write_waveform_csv(path, p_to, n=11)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t_us,omega_p,omega_c,delta"
    assert len(lines) == 12
