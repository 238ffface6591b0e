"""Command-line front end: experiment orchestration and figure outputs.

Subcommands: simulate, scan, montecarlo, optimize, pareto, reproduce.
Every run writes its outputs plus a manifest (config hash, seed, sample
count, version) into the output directory, so results are re-runnable
bit-identically.  Exit codes: 0 success, 2 configuration error,
3 integrator failure, 4 I/O error.
"""

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, config, effective, metrics, noise, optimize
from . import svgplot
from .config import ConfigError, RunConfig
from .constants import PRESETS, TWO_PI
from .dynamics import DecayConstants, ErrorSample, IntegratorError
from .noise import DistributionSpec, NoiseConfig
from .pulses import PulseParams, write_waveform_csv

FIGURES = ("1c", "2", "3", "4", "5", "6", "7")


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="stirapcz",
        description="Rydberg-blockade CZ gate simulator driven by "
                    "double-STIRAP pulses: simulation, noise studies and "
                    "robust pulse optimization.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON run configuration")
        p.add_argument("--preset", choices=RunConfig.PRESET_NAMES[:-1],
                       help="pulse preset (overrides config)")
        p.add_argument("--seed", type=int, help="RNG seed (overrides config)")
        p.add_argument("--samples", type=int,
                       help="Monte-Carlo samples (overrides config)")
        p.add_argument("--workers", type=int, default=1,
                       help="worker pool size (evaluation is sequential "
                            "and worker-count independent)")
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument("--paper-scale", action="store_true",
                       help="full published sample sizes (slow)")

    p = sub.add_parser("simulate", help="one gate run, optional error "
                                        "overrides")
    common(p)
    p.add_argument("--eps-delta", type=float, default=0.0,
                   help="two-photon detuning error / 2pi (MHz)")
    p.add_argument("--eps-delta-big", type=float, default=0.0,
                   help="intermediate detuning error / 2pi (MHz)")
    p.add_argument("--input", default="all",
                   choices=["all", "00", "01", "10", "11"],
                   help="report the full gate or one return channel")
    p.add_argument("--decays", action="store_true")
    p.add_argument("--waveforms", action="store_true",
                   help="also dump the drive waveforms")

    p = sub.add_parser("scan", help="decay-free detuning-error scan")
    common(p)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--eps-max", type=float, default=1.0,
                   help="scan half-range / 2pi (MHz)")

    p = sub.add_parser("montecarlo", help="noise-averaged fidelity")
    common(p)

    p = sub.add_parser("optimize", help="genetic pulse optimization")
    common(p)
    p.add_argument("--kind", choices=["to", "der", "der_i"], default="der")
    p.add_argument("--population", type=int)
    p.add_argument("--generations", type=int)

    p = sub.add_parser("pareto", help="two-objective front search")
    common(p)
    p.add_argument("--kind", choices=["der", "der_i"], default="der_i")
    p.add_argument("--population", type=int)
    p.add_argument("--generations", type=int)

    p = sub.add_parser("reproduce", help="reproduce a published figure")
    common(p)
    p.add_argument("figure", choices=FIGURES)
    return ap


def _load_config(args):
    cfg = config.load(args.config) if args.config else RunConfig().validate()
    if args.preset:
        cfg.pulse.preset = args.preset
    if args.seed is not None:
        cfg.sampling.seed = args.seed
    if args.samples is not None:
        cfg.sampling.samples = args.samples
    if args.paper_scale:
        cfg.sampling.samples = 500
        print("warning: --paper-scale restores published sample sizes; "
              "this is slow", file=sys.stderr)
    if args.out:
        cfg.output_dir = str(args.out)
    return cfg.validate()


def _outdir(cfg):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(out, cfg, command, extra=None):
    text = cfg.dumps()
    data = {"command": command,
            "config_sha256": hashlib.sha256(text.encode()).hexdigest(),
            "seed": cfg.sampling.seed,
            "samples": cfg.sampling.samples,
            "version": __version__}
    data.update(extra or {})
    (out / "config.json").write_text(text)
    (out / "manifest.json").write_text(json.dumps(data, indent=2,
                                                  sort_keys=True) + "\n")


def _presets_to_compare():
    return [("TO", "to"), ("DER", "der"), ("DER-i", "der_i_gauss")]


def cmd_simulate(args):
    cfg = _load_config(args)
    out = _outdir(cfg)
    p = cfg.pulse_params()
    e = ErrorSample(eps_delta=TWO_PI * args.eps_delta,
                    eps_delta_big=TWO_PI * args.eps_delta_big)
    d = DecayConstants() if (args.decays or cfg.noise.decays) else None
    res = metrics.gate_result(p, e, d, cfg.integrator_options())
    with open(out / "gate_result.csv", "w") as f:
        f.write("quantity,value\n")
        for j, name in enumerate(("F_00", "F_01", "F_10", "F_11")):
            f.write(f"{name},{res.truth_table[j]:.9f}\n")
        f.write(f"fidelity_paper,{res.fidelity_paper:.9f}\n")
        f.write(f"fidelity_phase,{res.fidelity_phase:.9f}\n")
        f.write(f"phi01_rad,{res.phi01:.9f}\n")
        f.write(f"phi10_rad,{res.phi10:.9f}\n")
        f.write(f"phi11_rad,{res.phi11:.9f}\n")
    if args.waveforms:
        write_waveform_csv(out / "waveforms.csv", p)
    _manifest(out, cfg, "simulate")
    if args.input == "all":
        print(f"fidelity_phase = {res.fidelity_phase:.7f}")
        print(f"fidelity_paper = {res.fidelity_paper:.7f}")
        print(f"phi01 = {res.phi01 / math.pi:.5f} pi, "
              f"phi11 = {res.phi11 / math.pi:.5f} pi")
    else:
        j = ("00", "01", "10", "11").index(args.input)
        print(f"return population F_{args.input} = "
              f"{res.truth_table[j]:.9f}")
    return 0


def cmd_scan(args):
    cfg = _load_config(args)
    out = _outdir(cfg)
    p = cfg.pulse_params()
    grid = np.linspace(-TWO_PI * args.eps_max, TWO_PI * args.eps_max,
                       args.points)
    eps, inf_phase, inf_paper = metrics.infidelity_scan(
        p, grid, cfg.integrator_options())
    metrics.write_scan_csv(out / "scan.csv", eps, inf_phase, inf_paper)
    fig = svgplot.Figure(title="Detuning-error scan (%s)" % cfg.pulse.preset,
                         xlabel="eps_delta / 2pi (MHz)",
                         ylabel="infidelity", ylog=True)
    fig.add(eps / TWO_PI, np.maximum(inf_paper, 1e-12), "truth table")
    fig.add(eps / TWO_PI, np.maximum(inf_phase, 1e-12), "phase-sensitive",
            dashed=True)
    fig.save(out / "scan.svg")
    _manifest(out, cfg, "scan")
    print(f"scan written to {out}/scan.csv ({args.points} points)")
    return 0


def cmd_montecarlo(args):
    cfg = _load_config(args)
    out = _outdir(cfg)
    mc = noise.monte_carlo_fidelity(cfg.pulse_params(), cfg.noise_config(),
                                    cfg.sampling.samples, cfg.sampling.seed,
                                    cfg.integrator_options())
    with open(out / "montecarlo.csv", "w") as f:
        f.write("sample,fidelity_paper,fidelity_phase\n")
        for i, row in enumerate(mc.samples):
            f.write(f"{i},{row['fidelity_paper']:.9f},"
                    f"{row['fidelity_phase']:.9f}\n")
    _manifest(out, cfg, "montecarlo",
              {"mean_fidelity_paper": mc.mean_paper,
               "mean_fidelity_phase": mc.mean_phase,
               "stderr_paper": mc.stderr_paper,
               "n_failed": mc.n_failed})
    if mc.n_failed:
        print(f"warning: {mc.n_failed} samples failed and were excluded",
              file=sys.stderr)
    print(f"mean fidelity {mc.mean_paper:.6f} +/- {mc.stderr_paper:.6f} "
          f"({mc.n_samples} samples)")
    return 0


def _ga_options(args, cfg, desk_pop, desk_gen):
    pop = args.population or (64 if args.paper_scale else desk_pop)
    gen = args.generations or (60 if args.paper_scale else desk_gen)
    return optimize.GAOptions(population=pop, generations=gen,
                              seed=cfg.sampling.seed)


def cmd_optimize(args):
    cfg = _load_config(args)
    out = _outdir(cfg)
    spec = optimize.CostSpec(args.kind)
    opts = _ga_options(args, cfg, desk_pop=24, desk_gen=15)
    best, cost, history = optimize.ga_minimize(
        spec, opts, integrator=cfg.integrator_options())
    optimize.write_history_csv(out / "optimization.csv", history)
    _manifest(out, cfg, "optimize",
              {"kind": args.kind, "best_cost": cost,
               "best_params": [best.t1, best.t2, best.omega]})
    print(f"best cost {cost:.3e} at t1={best.t1:.4f} t2={best.t2:.4f} "
          f"omega={best.omega:.4f}")
    return 0


def cmd_pareto(args):
    cfg = _load_config(args)
    out = _outdir(cfg)
    spec = optimize.CostSpec(args.kind, fidelity="paper",
                             phase_window=0.1 * math.pi)
    opts = _ga_options(args, cfg, desk_pop=24, desk_gen=12)
    points = optimize.pareto_front(spec, opts,
                                   integrator=cfg.integrator_options())
    optimize.write_pareto_csv(out / "pareto.csv", points)
    fig = svgplot.Figure(title="Pareto front (%s)" % args.kind,
                         xlabel="J1 = 1 - F(0)", ylabel="J2",
                         xlog=True, ylog=True)
    fig.add([max(pt.objectives[0], 1e-12) for pt in points],
            [max(pt.objectives[1], 1e-12) for pt in points], "front")
    fig.save(out / "pareto.svg")
    _manifest(out, cfg, "pareto", {"kind": args.kind, "points": len(points)})
    print(f"{len(points)} front points written to {out}/pareto.csv")
    return 0


def _excess_curve(preset, mc_cfg_for, xs, n, seed, iopts):
    """Excess infidelity F(0) - mean F(x) over a parameter sweep."""
    p = PulseParams.preset(preset)
    f0 = metrics.gate_result(p, opts=iopts).fidelity_paper
    rows = []
    for k, x in enumerate(xs):
        mc = noise.monte_carlo_fidelity(p, mc_cfg_for(x), n, seed + k,
                                        iopts, compute_phase=False)
        rows.append((x, f0 - mc.mean_paper, mc.stderr_paper,
                     mc.n_samples, mc.n_failed))
    return rows


def _write_excess_figure(out, stem, title, xlabel, curves):
    fig = svgplot.Figure(title=title, xlabel=xlabel,
                         ylabel="excess infidelity", ylog=True)
    for label, rows in curves:
        noise.write_experiment_csv(
            out / f"{stem}_{label.lower().replace('-', '_')}.csv", rows)
        fig.add([r[0] for r in rows],
                [max(r[1], 1e-12) for r in rows], label)
    fig.save(out / f"{stem}.svg")


def _reproduce_1c(cfg, out, iopts):
    grid = np.linspace(-TWO_PI, TWO_PI, 21)
    fig = svgplot.Figure(title="Infidelity vs detuning error",
                         xlabel="eps_delta / 2pi (MHz)",
                         ylabel="infidelity", ylog=True)
    for label, preset in _presets_to_compare():
        p = PulseParams.preset(preset)
        eps, inf_phase, inf_paper = metrics.infidelity_scan(p, grid, iopts)
        metrics.write_scan_csv(out / f"fig1c_{preset}.csv", eps,
                               inf_phase, inf_paper)
        fig.add(eps / TWO_PI, np.maximum(inf_paper, 1e-12), label)
    fig.save(out / "fig1c.svg")


def _reproduce_2(cfg, out, iopts):
    n, seed = cfg.sampling.samples, cfg.sampling.seed
    xs = np.linspace(0.2, 1.0, 5)
    for kind in ("gaussian", "uniform", "ushaped"):
        curves = []
        for label, preset in _presets_to_compare():
            def mk(x):
                return NoiseConfig(detuning=DistributionSpec(kind,
                                                             TWO_PI * x))
            curves.append((label, _excess_curve(preset, mk, xs, n, seed,
                                                iopts)))
        _write_excess_figure(out, f"fig2_{kind}",
                             f"Detuning noise ({kind})",
                             "eps / 2pi (MHz)", curves)
        noise.write_distribution_csv(out / f"fig2_{kind}_profile.csv",
                                     DistributionSpec(kind, TWO_PI))


def _reproduce_3(cfg, out, iopts):
    n, seed = cfg.sampling.samples, cfg.sampling.seed
    temps = (0.5, 1.5, 2.5)
    for panel, decays in (("a", False), ("b", True)):
        curves = []
        for label, preset in _presets_to_compare():
            def mk(t):
                return NoiseConfig(doppler_temp_mk=t, decays=decays)
            curves.append((label, _excess_curve(preset, mk, temps, n, seed,
                                                iopts)))
        _write_excess_figure(out, f"fig3{panel}",
                             "Doppler dephasing"
                             + (" with decays" if decays else ""),
                             "temperature (mK)", curves)


def _reproduce_4(cfg, out, iopts):
    n, seed = cfg.sampling.samples, cfg.sampling.seed
    xs = (0.01, 0.02, 0.03, 0.04, 0.05)
    curves = []
    for label, preset in _presets_to_compare():
        def mk(x):
            return NoiseConfig(amplitude_bound=x)
        curves.append((label, _excess_curve(preset, mk, xs, n, seed, iopts)))
    _write_excess_figure(out, "fig4", "Amplitude noise",
                         "eps_Omega (fractional)", curves)


def _reproduce_5(cfg, out, iopts):
    p = cfg.pulse_params()
    effective.write_effective_csv(out / "fig5_effective.csv", p)
    ts, pop01, ph01 = effective.evolve_effective("01", p)
    _, pop11, ph11 = effective.evolve_effective("11", p)
    fig = svgplot.Figure(title="Effective-model channel dynamics",
                         xlabel="t (us)", ylabel="return population")
    fig.add(ts, pop01, "01 channel")
    fig.add(ts, pop11, "11 channel")
    fig.save(out / "fig5_populations.svg")
    fig = svgplot.Figure(title="Accumulated phase",
                         xlabel="t (us)", ylabel="phase (rad)")
    fig.add(ts, ph01, "01 channel")
    fig.add(ts, ph11, "11 channel")
    fig.save(out / "fig5_phases.svg")


def _reproduce_6(cfg, out, iopts, args):
    for kind in ("der", "der_i"):
        spec = optimize.CostSpec(kind, fidelity="paper",
                                 phase_window=0.1 * math.pi)
        opts = _ga_options(args, cfg, desk_pop=16, desk_gen=10)
        points = optimize.pareto_front(spec, opts, integrator=iopts)
        optimize.write_pareto_csv(out / f"fig6_{kind}.csv", points)
        fig = svgplot.Figure(title=f"Pareto front ({kind})",
                             xlabel="J1", ylabel="J2", xlog=True, ylog=True)
        fig.add([max(pt.objectives[0], 1e-12) for pt in points],
                [max(pt.objectives[1], 1e-12) for pt in points], kind)
        fig.save(out / f"fig6_{kind}.svg")


def _reproduce_7(cfg, out, iopts):
    n, seed = cfg.sampling.samples, cfg.sampling.seed
    # (a) static intermediate-detuning offset, deterministic scan
    xs = np.linspace(0.0, 1.0, 6)
    curves_a = []
    # (d) blockade-strength deviation at its worst-case edge
    fracs = np.linspace(0.0, 0.1, 6)
    curves_d = []
    for label, preset in _presets_to_compare():
        p = PulseParams.preset(preset)
        f0 = metrics.gate_result(p, opts=iopts).fidelity_paper
        rows = []
        for x in xs:
            e = ErrorSample(eps_delta_big_const=TWO_PI * x)
            f = metrics.gate_result(p, e, opts=iopts).fidelity_paper
            rows.append((x, f0 - f, 0.0, 1, 0))
        curves_a.append((label, rows))
        rows = []
        for frac in fracs:
            e = ErrorSample(delta_b=frac * p.blockade)
            f = metrics.gate_result(p, e, opts=iopts).fidelity_paper
            rows.append((frac, abs(f0 - f), 0.0, 1, 0))
        curves_d.append((label, rows))
    _write_excess_figure(out, "fig7a", "Intermediate detuning offset",
                         "eps_Delta / 2pi (MHz)", curves_a)
    _write_excess_figure(out, "fig7d", "Blockade deviation",
                         "Delta_B / B", curves_d)

    # (b) Doppler temperature sweep, decay-free Monte Carlo
    temps = (0.5, 1.0, 1.5, 2.0)
    curves_b = []
    for label, preset in _presets_to_compare():
        def mk(t):
            return NoiseConfig(doppler_temp_mk=t)
        curves_b.append((label, _excess_curve(preset, mk, temps, n, seed,
                                              iopts)))
    _write_excess_figure(out, "fig7b", "Doppler dephasing (decay-free)",
                         "temperature (mK)", curves_b)

    # (c) laser phase noise via average dephasing rates (open system)
    gzs = (0.0, 0.02, 0.04)
    curves_c = []
    for label, preset in _presets_to_compare():
        def mk(g):
            return NoiseConfig(dephasing_gamma_z=TWO_PI * g)
        curves_c.append((label, _excess_curve(preset, mk, gzs, n, seed,
                                              iopts)))
    _write_excess_figure(out, "fig7c", "Phase-noise dephasing",
                         "gamma_z / 2pi (MHz)", curves_c)


def cmd_reproduce(args):
    cfg = _load_config(args)
    out = _outdir(cfg)
    iopts = cfg.integrator_options()
    if args.figure == "1c":
        _reproduce_1c(cfg, out, iopts)
    elif args.figure == "2":
        _reproduce_2(cfg, out, iopts)
    elif args.figure == "3":
        _reproduce_3(cfg, out, iopts)
    elif args.figure == "4":
        _reproduce_4(cfg, out, iopts)
    elif args.figure == "5":
        _reproduce_5(cfg, out, iopts)
    elif args.figure == "6":
        _reproduce_6(cfg, out, iopts, args)
    else:
        _reproduce_7(cfg, out, iopts)
    _manifest(out, cfg, "reproduce", {"figure": args.figure})
    print(f"figure {args.figure} outputs written to {out}")
    return 0


_COMMANDS = {"simulate": cmd_simulate, "scan": cmd_scan,
             "montecarlo": cmd_montecarlo, "optimize": cmd_optimize,
             "pareto": cmd_pareto, "reproduce": cmd_reproduce}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except IntegratorError as exc:
        print(f"integrator failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
