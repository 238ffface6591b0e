import math

import numpy as np
import pytest

from stirapcz import optimize
from stirapcz.constants import TWO_PI
from stirapcz.dynamics import IntegratorOptions
from stirapcz.optimize import CostSpec, GAOptions, ParetoPoint
from stirapcz.pulses import PulseParams

FAST = IntegratorOptions(rel_tol=1e-7, abs_tol=1e-9)


def test_cost_spec_validation():
    with pytest.raises(ValueError):
        CostSpec("annealed")
    with pytest.raises(ValueError):
        CostSpec("der", n=8)          # must be odd
    with pytest.raises(ValueError):
        CostSpec("der", eps0=0.0)
    with pytest.raises(ValueError):
        CostSpec("der", weights="triangular")


def test_grid_symmetric_and_centered():
    spec = CostSpec("der", n=9)
    g = spec.grid()
    assert g[4] == 0.0
    assert np.allclose(g, -g[::-1])
    assert np.isclose(spec.weight_vector().sum(), 1.0)
    assert np.isclose(CostSpec("der_i", weights="uniform")
                      .weight_vector().sum(), 1.0)


def test_perfectly_flat_gate_has_zero_der_cost():
    spec = CostSpec("der")
    fids = np.ones(spec.n)
    assert optimize.cost_from_grid(spec, fids) == 0.0
    assert optimize.cost_from_grid(CostSpec("der_i"), fids) == 0.0


def test_to_cost_at_preset(p_to):
    cost = optimize.eval_cost(CostSpec("to"), p_to, FAST)
    assert cost == pytest.approx(4e-6, abs=1e-4)


def test_der_cost_first_term(p_der):
    spec = CostSpec("der", fidelity="paper")
    fids = optimize.grid_fidelities(spec, p_der, FAST)
    first = (1.0 - fids[spec.n // 2]) ** 2
    assert first == pytest.approx((1.0 - 0.9971) ** 2, rel=0.3)


def test_phase_window_rejects_identity_like_pulse():
    """A genome whose conditional phase is far from pi must be discarded
    even when every return population is perfect."""
    spec = CostSpec("der", fidelity="paper", phase_window=0.1 * math.pi)
    bad = PulseParams(t1=0.7601, t2=1.5, omega=0.344)
    from stirapcz import metrics
    res = metrics.gate_result(bad, opts=FAST)
    if abs(res.phi11 - math.pi) > 0.1 * math.pi:
        assert optimize.eval_cost(spec, bad, FAST) == optimize.COST_SENTINEL
    good = PulseParams.preset("der")
    assert optimize.eval_cost(spec, good, FAST) < 1.0


def _sphere(target):
    def cost(spec, p, opts=None):
        g = np.array([p.t1, p.t2, p.omega])
        return float(((g - target) ** 2).sum())
    return cost


def test_ga_on_sphere(monkeypatch):
    target = np.array([0.5, 1.0, 0.2])
    monkeypatch.setattr(optimize, "eval_cost", _sphere(target))
    opts = GAOptions(population=40, generations=40, seed=3)
    best, cost, hist = optimize.ga_minimize(CostSpec("to"), opts)
    span = max(hi - lo for lo, hi in opts.bounds)
    assert abs(best.t1 - 0.5) < 1e-3 * span
    assert abs(best.t2 - 1.0) < 1e-3 * span
    assert abs(best.omega - 0.2) < 1e-3 * span
    bests = [h[1] for h in hist]
    assert all(b <= a for a, b in zip(bests, bests[1:]))   # elitism


def test_ga_deterministic_and_in_bounds(monkeypatch):
    calls = []
    orig = _sphere(np.array([0.6, 1.1, 0.3]))

    def spy(spec, p, opts=None):
        calls.append((p.t1, p.t2, p.omega))
        return orig(spec, p, opts)

    monkeypatch.setattr(optimize, "eval_cost", spy)
    opts = GAOptions(population=12, generations=6, seed=9)
    b1, c1, h1 = optimize.ga_minimize(CostSpec("to"), opts)
    b2, c2, h2 = optimize.ga_minimize(CostSpec("to"), opts)
    assert b1 == b2 and c1 == c2
    for t1, t2, w in calls:
        assert 0.2 <= t1 <= 1.2 and 0.5 <= t2 <= 1.5 and 0.05 <= w <= 0.4
        assert t1 < t2


def test_ga_warm_start(monkeypatch):
    target = np.array([0.5, 1.0, 0.2])
    monkeypatch.setattr(optimize, "eval_cost", _sphere(target))
    opts = GAOptions(population=8, generations=1, seed=0)
    best, cost, _ = optimize.ga_minimize(CostSpec("to"), opts,
                                         initial=[target])
    assert cost == 0.0


def test_ga_options_validation():
    with pytest.raises(ValueError):
        GAOptions(population=2)
    with pytest.raises(ValueError):
        GAOptions(bounds=((0.2, 0.1), (0.5, 1.5), (0.05, 0.4)))


def test_nondominated_definition():
    assert optimize._nondominated([(1, 2), (2, 1), (2, 2)]) == [0, 1]


def test_dominance_audit():
    front = [ParetoPoint((1.0, 2.0), PulseParams.preset("to")),
             ParetoPoint((2.0, 1.0), PulseParams.preset("der"))]
    assert optimize.dominance_audit(front)
    front.append(ParetoPoint((3.0, 3.0), PulseParams.preset("to")))
    assert not optimize.dominance_audit(front)


def test_pareto_machinery_on_synthetic_objectives(monkeypatch):
    """Convex synthetic trade-off: J1 = t1^2, J2 = (t1 - 1)^2; the search
    must return a spread, strictly inverse, non-dominated front."""

    def fake(spec, p, opts=None):
        return float(p.t1 ** 2), float((p.t1 - 1.0) ** 2)

    monkeypatch.setattr(optimize, "eval_objectives", fake)
    pts = optimize.pareto_front(CostSpec("der"),
                                GAOptions(population=24, generations=12,
                                          seed=7))
    assert len(pts) >= 10
    assert optimize.dominance_audit(pts)
    j1 = [pt.objectives[0] for pt in pts]
    j2 = [pt.objectives[1] for pt in pts]
    assert j1 == sorted(j1)
    assert j2 == sorted(j2, reverse=True)


def test_objectives_reject_to_kind(p_to):
    with pytest.raises(ValueError):
        optimize.eval_objectives(CostSpec("to"), p_to, FAST)


def test_history_and_pareto_csv(tmp_path):
    hist = [(0, 0.5, 0.7, np.array([0.4, 0.9, 0.16]))]
    path = tmp_path / "hist.csv"
    optimize.write_history_csv(path, hist)
    assert path.read_text().splitlines()[0] \
        == "generation,best_cost,mean_cost,best_t1,best_t2,best_omega"
    pts = [ParetoPoint((1e-3, 2e-3), PulseParams.preset("der"))]
    path = tmp_path / "front.csv"
    optimize.write_pareto_csv(path, pts)
    assert path.read_text().splitlines()[0] == "J1,J2,t1,t2,omega"
