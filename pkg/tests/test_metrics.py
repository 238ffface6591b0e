import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stirapcz import metrics, qla
from stirapcz.constants import TWO_PI
from stirapcz.dynamics import DecayConstants, ErrorSample, IntegratorOptions


def test_fidelity_modes():
    truth = (1.0, 0.81, 0.81, 0.64)
    assert metrics.gate_fidelity_paper(truth, "mean") == pytest.approx(0.815)
    assert metrics.gate_fidelity_paper(truth, "sqrt") == pytest.approx(0.9)
    assert metrics.gate_fidelity_paper(truth, "sqrt_squared") \
        == pytest.approx(0.81)
    with pytest.raises(ValueError):
        metrics.gate_fidelity_paper(truth, "geometric")
    with pytest.raises(ValueError):
        metrics.gate_fidelity_paper((1.0, 1.0, 1.0, 2.0))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4))
def test_fidelity_mode_ordering(truth):
    """Root-mean of roots never falls below the plain mean on [0, 1]."""
    sqrt = metrics.gate_fidelity_paper(truth, "sqrt")
    mean = metrics.gate_fidelity_paper(truth, "mean")
    assert sqrt + 1e-12 >= mean


def test_element_fidelity_requires_unit_target():
    rho = qla.density_from_ket(qla.computational_state(0))
    with pytest.raises(ValueError):
        metrics.element_fidelity(rho, 2.0 * qla.computational_state(0))


def test_perfect_cz_amplitudes():
    """Amplitudes of an exact CZ gate give unit phase fidelity and pi
    phases under the reported convention."""
    a = np.exp(-1j * np.pi)
    assert metrics._phase_fidelity_from_amplitudes(a, a, a) \
        == pytest.approx(1.0)
    assert metrics._phase(a) == pytest.approx(np.pi)


def test_closed_gate_result_to(p_to, fast_opts):
    res = metrics.gate_result(p_to, opts=fast_opts)
    assert res.fidelity_phase > 0.9999
    assert res.fidelity_paper > 0.99999
    assert res.phi01 == pytest.approx(np.pi, abs=1e-4)
    assert res.truth_table[0] == 1.0
    assert res.amplitudes is not None


def test_phi01_equals_phi10_closed(p_der, fast_opts):
    res = metrics.gate_result(p_der, ErrorSample(eps_delta=TWO_PI * 0.4),
                              opts=fast_opts)
    assert abs(res.phi01 - res.phi10) < 1e-6


def test_density_path_matches_closed_path(p_to):
    """With all decay rates zero the master-equation route must agree with
    the state-vector fast path."""
    opts = IntegratorOptions(rel_tol=1e-7, abs_tol=1e-9)
    closed = metrics.gate_result(p_to, opts=opts)
    # a tiny dephasing entry forces the density-matrix route
    e = ErrorSample(gamma1=1e-300)
    dens = metrics.gate_result(p_to, e, DecayConstants.none(), opts=opts)
    assert dens.fidelity_paper == pytest.approx(closed.fidelity_paper,
                                                abs=1e-6)
    assert dens.fidelity_phase == pytest.approx(closed.fidelity_phase,
                                                abs=1e-6)
    assert dens.phi11 == pytest.approx(closed.phi11, abs=1e-5)


def test_decays_lower_fidelity(p_to, fast_opts):
    closed = metrics.gate_result(p_to, opts=fast_opts)
    opened = metrics.gate_result(p_to, d=DecayConstants(), opts=fast_opts,
                                 compute_phase=False)
    assert opened.fidelity_paper < closed.fidelity_paper
    assert all(f <= 1.0 + 1e-9 for f in opened.truth_table)


def test_infidelity_scan_csv(tmp_path, p_to, fast_opts):
    grid = np.linspace(-TWO_PI * 0.4, TWO_PI * 0.4, 5)
    eps, inf_phase, inf_paper = metrics.infidelity_scan(p_to, grid,
                                                        fast_opts)
    assert inf_paper[2] == inf_paper.min()   # error-free center is best
    path = tmp_path / "scan.csv"
    metrics.write_scan_csv(path, eps, inf_phase, inf_paper)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "eps_delta_MHz,infidelity_phase,infidelity_paper"
    assert len(lines) == 6
