"""Command-line front end.

Subcommands:
  simulate   sweep one channel configuration and write trace/summary/plot
  batch      run several presets (default d1 d2 d3) into per-run directories
  analyze    compute trial metrics from a telemetry CSV
  calibrate  fit the sensor calibration matrix from a dataset CSV
  presets    list the named channel presets
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from pathlib import Path
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from . import calibration, config as config_mod, metrics, simulator, svgplot, telemetry
from .config import PRESETS, ConfigError, RunConfig, apply_preset, parse_config

ALL_FORMATS = ("csv", "json", "svg")


class CliError(Exception):
    pass


def _load_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "preset", None):
        cfg = apply_preset(cfg, args.preset)
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise CliError(f"config file not found: {path}")
        cfg = parse_config(path.read_text(), base=cfg)
    if getattr(args, "dx", None) is not None:
        cfg = replace(cfg, dx=args.dx)
    return cfg


def _formats(args: argparse.Namespace) -> tuple[str, ...]:
    fmts = tuple(args.format) if getattr(args, "format", None) else ALL_FORMATS
    return fmts


def _plateau_stats(trace, cfg: RunConfig) -> dict:
    xs = trace.positions()
    drags = trace.drags()
    counts = trace.contact_counts()
    margin = cfg.body.r_x + cfg.beam.L
    lo, hi = margin, cfg.l_channel - margin
    mask = (xs >= lo) & (xs <= hi)
    if not mask.any():
        mid = len(xs) // 2
        mask = np.zeros(len(xs), dtype=bool)
        mask[mid] = True
    in_channel = (xs >= 0.0) & (xs <= cfg.l_channel)
    return {
        "plateau_x_lo_m": lo,
        "plateau_x_hi_m": hi,
        "plateau_mean_drag_n": float(drags[mask].mean()),
        "plateau_contact_counts": sorted(int(c) for c in set(counts[mask])),
        "max_contact_count": int(counts.max()),
        "mean_drag_in_channel_n": float(drags[in_channel].mean()),
        "drag_energy_j": float(drags[in_channel].mean() * cfg.l_channel),
    }


def _run_simulation(cfg: RunConfig, out: Path, fmts: Sequence[str]) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    trace = simulator.sweep(cfg.channel(), cfg.body, dx=cfg.dx, v=cfg.v)
    summary = {
        "channel_width_b_m": cfg.resolved_width(),
        "deflection_d_m": cfg.d,
        "n_beams_per_side": cfg.n,
        "l_channel_m": cfg.l_channel,
        "spacing_override_m": cfg.spacing_override,
        "dx_m": cfg.dx,
        "v_mps": cfg.v,
        **_plateau_stats(trace, cfg),
    }
    if "csv" in fmts:
        with open(out / "trace.csv", "w") as fh:
            simulator.write_trace_csv(trace, fh)
        with open(out / "contacts.csv", "w") as fh:
            simulator.write_contacts_csv(trace, fh)
    if "json" in fmts:
        with open(out / "summary.json", "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if "svg" in fmts:
        with open(out / "drag_vs_position.svg", "w") as fh:
            svgplot.line_plot(
                fh,
                [(trace.positions(), trace.drags(), "drag")],
                xlabel="body position x [m]",
                ylabel="drag force [N]",
                title="Simulated drag vs. position",
            )
    return summary


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    summary = _run_simulation(cfg, Path(args.out), _formats(args))
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    names = args.preset or ["d1", "d2", "d3"]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fmts = _formats(args)

    def run_one(name: str) -> tuple[str, dict]:
        cfg = RunConfig()
        cfg = apply_preset(cfg, name)
        if args.config:
            cfg = parse_config(Path(args.config).read_text(), base=cfg)
        if args.dx is not None:
            cfg = replace(cfg, dx=args.dx)
        return name, _run_simulation(cfg, out / name, fmts)

    results: dict[str, dict] = {}
    if args.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as pool:
            for name, summary in pool.map(run_one, names):
                results[name] = summary
    else:
        for name in names:
            key, summary = run_one(name)
            results[key] = summary

    combined = {name: results[name] for name in names}
    with open(out / "batch_summary.json", "w") as fh:
        json.dump(combined, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for name in names:
        print(
            f"{name}: plateau mean drag "
            f"{combined[name]['plateau_mean_drag_n']:.4f} N, "
            f"contacts {combined[name]['plateau_contact_counts']}"
        )
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    path = Path(args.telemetry)
    if not path.exists():
        raise CliError(f"telemetry file not found: {path}")
    with open(path) as fh:
        try:
            records = telemetry.parse(fh)
        except telemetry.TelemetryError as exc:
            raise CliError(f"{path}: {exc}") from None
    window = telemetry.detect_window(
        records, threshold=cfg.threshold, hysteresis=cfg.hysteresis
    )
    trial = metrics.trial_metrics(
        records,
        (window.t_enter, window.t_exit),
        l_channel=cfg.l_channel,
        mass=cfg.body.mass,
        g=cfg.g,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fmts = _formats(args)

    doc = {
        "window_t_enter_s": window.t_enter,
        "window_t_exit_s": window.t_exit,
        "free_run": window.free_run,
        **trial.to_dict(),
    }
    if "json" in fmts:
        with open(out / "metrics.json", "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if "csv" in fmts:
        with open(out / "strides.csv", "w") as fh:
            fh.write(
                "stride,t_start_s,t_end_s,drag_energy_j,"
                "electrical_energy_j,specific_resistance\n"
            )
            for k, s in enumerate(trial.per_stride, start=1):
                fh.write(
                    f"{k},{s.t_start!r},{s.t_end!r},{s.drag_energy!r},"
                    f"{s.electrical_energy!r},{s.specific_resistance!r}\n"
                )
        with open(out / "stride_boxstats.csv", "w") as fh:
            fh.write("metric,min,q1,median,q3,max\n")
            for name, values in (
                ("drag_energy_j", [s.drag_energy for s in trial.per_stride]),
                (
                    "electrical_energy_j",
                    [s.electrical_energy for s in trial.per_stride],
                ),
                (
                    "specific_resistance",
                    [s.specific_resistance for s in trial.per_stride],
                ),
            ):
                if values:
                    q = [float(v) for v in np.percentile(values, [0, 25, 50, 75, 100])]
                    fh.write(
                        f"{name},{q[0]!r},{q[1]!r},{q[2]!r},{q[3]!r},{q[4]!r}\n"
                    )
    if "svg" in fmts:
        ts = [r.t for r in records]
        with open(out / "forces_vs_time.svg", "w") as fh:
            svgplot.line_plot(
                fh,
                [
                    (ts, [r.fx for r in records], "Fx"),
                    (ts, [r.fy for r in records], "Fy"),
                    (ts, [r.fz for r in records], "Fz"),
                ],
                xlabel="time [s]",
                ylabel="force [N]",
                title="Shell forces vs. time",
            )
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _cmd_calibrate(args: argparse.Namespace) -> int:
    path = Path(args.dataset)
    if not path.exists():
        raise CliError(f"dataset file not found: {path}")
    with open(path) as fh:
        readings, forces = calibration.read_dataset_csv(fh)
    n = readings.shape[0]
    if not 0.0 < args.split <= 1.0:
        raise CliError("--split must be in (0, 1]")
    rng = np.random.default_rng(args.seed)
    order = rng.permutation(n)
    n_train = max(int(round(args.split * n)), 1)
    train, test = order[:n_train], order[n_train:]
    try:
        model = calibration.fit(readings[train], forces[train])
    except calibration.DegenerateExcitationError as exc:
        raise CliError(str(exc)) from None

    report = {
        "n_total": int(n),
        "n_train": int(len(train)),
        "n_test": int(len(test)),
        "train_rms_n": list(map(float, model.rms)),
        "test_rms_n": (
            list(map(float, calibration.rms_error(model, readings[test], forces[test])))
            if len(test)
            else None
        ),
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "model.json", "w") as fh:
        calibration.write_model_json(model, fh)
    with open(out / "report.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def _cmd_presets(args: argparse.Namespace) -> int:
    print("preset  deflection_d_m  width_b_m")
    for name, d in PRESETS.items():
        if d is None:
            print(f"{name:<7} free            free")
        else:
            print(f"{name:<7} {d:<15} {config_mod.CONTACT_WIDTH - 2 * d:.2f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grasschannel",
        description="Shell-in-beam-channel drag simulation and telemetry analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--dx", type=float, default=None, help="sweep step [m]")
        p.add_argument("--seed", type=int, default=0, help="RNG seed")
        p.add_argument(
            "--format",
            action="append",
            choices=ALL_FORMATS,
            help="output format (repeatable; default: all)",
        )

    p_sim = sub.add_parser("simulate", help="run one channel sweep")
    add_common(p_sim)
    p_sim.add_argument("--preset", choices=sorted(PRESETS), help="channel preset")
    p_sim.set_defaults(func=_cmd_simulate)

    p_batch = sub.add_parser("batch", help="run several presets")
    add_common(p_batch)
    p_batch.add_argument(
        "--preset",
        action="append",
        choices=sorted(PRESETS),
        help="preset to include (repeatable; default: d1 d2 d3)",
    )
    p_batch.add_argument("--jobs", type=int, default=1, help="parallel runs")
    p_batch.set_defaults(func=_cmd_batch)

    p_an = sub.add_parser("analyze", help="analyze a telemetry CSV")
    add_common(p_an)
    p_an.add_argument("--preset", choices=sorted(PRESETS), help="channel preset")
    p_an.add_argument("telemetry", help="telemetry CSV file")
    p_an.set_defaults(func=_cmd_analyze)

    p_cal = sub.add_parser("calibrate", help="fit the sensor calibration")
    add_common(p_cal)
    p_cal.add_argument("dataset", help="dataset CSV (s1..s8,fx_n,fy_n,fz_n)")
    p_cal.add_argument(
        "--split", type=float, default=0.8, help="training fraction"
    )
    p_cal.set_defaults(func=_cmd_calibrate)

    p_pre = sub.add_parser("presets", help="list channel presets")
    p_pre.set_defaults(func=_cmd_presets)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
