import json

import numpy as np
import pytest

from stirapcz import cli, config, optimize
from stirapcz.config import ConfigError, RunConfig
from stirapcz.optimize import ParetoPoint
from stirapcz.pulses import PulseParams


def test_config_round_trip():
    cfg = RunConfig()
    cfg.noise.detuning_kind = "uniform"
    cfg.noise.detuning_eps_mhz = 0.8
    text = cfg.dumps()
    again = config.loads(text)
    assert again.dumps() == text
    assert config.loads(again.dumps()).to_dict() == cfg.to_dict()


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        config.loads('{"nois": {}}')
    with pytest.raises(ConfigError):
        config.loads('{"noise": {"detuning_kindd": "uniform"}}')
    with pytest.raises(ConfigError):
        config.loads('not json')


def test_config_validation():
    with pytest.raises(ConfigError):
        config.loads('{"pulse": {"preset": "fancy"}}')
    with pytest.raises(ConfigError):
        config.loads('{"pulse": {"preset": "custom"}}')   # triple missing
    cfg = config.loads('{"pulse": {"preset": "custom", "t1": 0.4, '
                       '"t2": 0.9, "omega": 0.16}}')
    p = cfg.pulse_params()
    assert (p.t1, p.t2, p.omega) == (0.4, 0.9, 0.16)


def test_config_builds_noise_and_integrator():
    cfg = config.loads('{"noise": {"detuning_kind": "ushaped", '
                       '"detuning_eps_mhz": 0.5, "decays": true}, '
                       '"integrator": {"method": "rk4", "dt": 1e-4}}')
    nc = cfg.noise_config()
    assert nc.detuning.kind == "ushaped" and nc.decays
    assert cfg.integrator_options().method == "rk4"


def test_simulate_writes_results(tmp_path, capsys):
    out = tmp_path / "run"
    rc = cli.main(["simulate", "--preset", "to", "--out", str(out)])
    assert rc == 0
    assert "fidelity_phase" in capsys.readouterr().out
    body = (out / "gate_result.csv").read_text()
    assert body.startswith("quantity,value")
    assert "phi11_rad" in body
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest) >= {"config_sha256", "seed", "samples", "version"}


def test_simulate_channel_input(tmp_path, capsys):
    out = tmp_path / "run"
    rc = cli.main(["simulate", "--preset", "der", "--input", "00",
                   "--out", str(out)])
    assert rc == 0
    assert "F_00 = 1.000000000" in capsys.readouterr().out


def test_scan_outputs(tmp_path):
    out = tmp_path / "scan"
    rc = cli.main(["scan", "--preset", "to", "--points", "5",
                   "--eps-max", "0.5", "--out", str(out)])
    assert rc == 0
    svg = (out / "scan.svg").read_text()
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    assert len(svg.encode()) < 1_000_000
    assert "http" not in svg.replace("http://www.w3.org/2000/svg", "")
    lines = (out / "scan.csv").read_text().strip().splitlines()
    assert len(lines) == 6


def test_montecarlo_deterministic(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"noise": {"detuning_kind": "gaussian", '
                   '"detuning_eps_mhz": 0.4}, '
                   '"sampling": {"samples": 4, "seed": 12}, '
                   '"integrator": {"rel_tol": 1e-7, "abs_tol": 1e-9}}')
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        rc = cli.main(["montecarlo", "--config", str(cfg), "--preset",
                       "to", "--out", str(out)])
        assert rc == 0
        outs.append((out / "montecarlo.csv").read_text())
    assert outs[0] == outs[1]


def test_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"mystery": 1}')
    rc = cli.main(["simulate", "--config", str(bad)])
    assert rc == 2
    assert "configuration error" in capsys.readouterr().err


def test_io_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    rc = cli.main(["simulate", "--preset", "to",
                   "--out", str(blocker / "nested")])
    assert rc == 4


def test_optimize_command(tmp_path, monkeypatch):
    def stub(spec, opts, template=None, integrator=None, initial=None):
        best = PulseParams.preset("der")
        hist = [(0, 1e-3, 2e-3, np.array([best.t1, best.t2, best.omega]))]
        return best, 1e-3, hist

    monkeypatch.setattr(optimize, "ga_minimize", stub)
    out = tmp_path / "opt"
    rc = cli.main(["optimize", "--kind", "der", "--out", str(out)])
    assert rc == 0
    assert (out / "optimization.csv").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["kind"] == "der"


def test_pareto_command(tmp_path, monkeypatch):
    def stub(spec, opts, template=None, integrator=None, initial=None):
        return [ParetoPoint((1e-3, 4e-3), PulseParams.preset("der")),
                ParetoPoint((2e-3, 3e-3), PulseParams.preset("der_i_gauss"))]

    monkeypatch.setattr(optimize, "pareto_front", stub)
    out = tmp_path / "front"
    rc = cli.main(["pareto", "--kind", "der_i", "--out", str(out)])
    assert rc == 0
    assert (out / "pareto.csv").exists()
    assert (out / "pareto.svg").exists()


def test_reproduce_figure5(tmp_path):
    out = tmp_path / "fig5"
    rc = cli.main(["reproduce", "5", "--preset", "to", "--out", str(out)])
    assert rc == 0
    assert (out / "fig5_effective.csv").exists()
    assert (out / "fig5_populations.svg").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["figure"] == "5"
