"""Command line entry point: run, decay-fit, oracle-check, sweep.

Artifacts per run directory: timeseries.csv (one diagnostics row per sample),
rhistory.csv (t,R at every accepted step), snapshot_<t>.csv files, and
summary.json. Numbers are printed with full round-trip precision by default
and outputs are byte identical across repeated invocations of one config.
Exit codes: 0 success, 2 invalid config or input, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import diagnostics, oracle, stepping
from .config import ConfigError, load_run_config, load_sweep_config
from .diagnostics import CSV_FIELDS
from .harness import SweepSpec, refinement_study, truncation_sweep
from .model import cutoff_initial_data, make_initial_data, radii
from .stepping import RunFailure, SampleSpec


def _fmt(value: float, precision: int = 17) -> str:
    return f"{value:.{precision}g}"


def _write_csv(path: str, header, rows, precision: int):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join("" if v is None else _fmt(v, precision) for v in row) + "\n")


def _write_json(path: str, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_columns(path: str, required) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
            cols = {name: [] for name in header}
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                parts = line.strip().split(",")
                if len(parts) != len(header):
                    raise ConfigError(f"{path}: malformed row at line {lineno}")
                for name, tok in zip(header, parts):
                    cols[name].append(float(tok) if tok else float("nan"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path!r}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric field: {exc}") from exc
    for name in required:
        if name not in cols:
            raise ConfigError(f"{path}: missing required column {name!r}")
    return {name: np.array(vals) for name, vals in cols.items()}


def _snapshot_rows(state, grid):
    geom = radii(state, grid)
    rows = [(x, r, u, None) for x, r, u in zip(grid.nodes, geom.r, state.u)]
    rows += [(x, None, None, rho) for x, rho in zip(grid.cell_centers, state.rho)]
    return rows


def cmd_run(config_path: str) -> int:
    cfg = load_run_config(config_path)
    state = make_initial_data(cfg.grid, cfg.params, cfg.init)
    if cfg.apply_cutoff:
        state = cutoff_initial_data(state, cfg.grid)
    samples = SampleSpec(cadence=cfg.cadence, snapshot_times=cfg.snapshot_times)
    traj = stepping.run(state, cfg.grid, cfg.params, cfg.integrator, samples)

    os.makedirs(cfg.out_dir, exist_ok=True)
    prec = cfg.precision
    rows = [[getattr(rec, name) for name in CSV_FIELDS] for rec in traj.records]
    _write_csv(os.path.join(cfg.out_dir, "timeseries.csv"), CSV_FIELDS, rows, prec)
    _write_csv(os.path.join(cfg.out_dir, "rhistory.csv"), ("t", "R"),
               zip(traj.history_t, traj.history_R), prec)
    for t_snap, snap in traj.snapshots:
        name = f"snapshot_{t_snap:g}.csv"
        _write_csv(os.path.join(cfg.out_dir, name), ("x", "r", "u", "rho"),
                   _snapshot_rows(snap, cfg.grid), prec)

    residuals = diagnostics.energy_budget(traj)
    summary = {
        "params": {key.split(".", 1)[1]: val for key, val in cfg.raw.items()
                   if key.startswith("params.")},
        "grid": {"k": cfg.grid.k, "n": cfg.grid.n},
        "final_time": float(traj.times[-1]),
        "energy": {
            "max_residual": float(np.max(np.abs(residuals))),
            "E0_initial": float(traj.records[0].E0),
        },
    }
    if cfg.fit_window is not None:
        fit = diagnostics.fit_decay_trajectory(traj, cfg.fit_window)
        summary["fit"] = {
            "slope": None if fit.equilibrium else fit.slope,
            "sup_envelope": fit.sup_envelope,
            "window": list(fit.window),
            "equilibrium": fit.equilibrium,
        }
    if cfg.oracle_enabled:
        report = oracle.oracle_compare(traj)
        summary["oracle"] = {"sup_diff": report.sup_diff}
    if cfg.e2_variant_check:
        resolution = diagnostics.resolve_e2_variant(
            make_initial_data(cfg.grid, cfg.params, cfg.init), cfg.grid, cfg.params,
            scheme=cfg.integrator.scheme, theta=cfg.integrator.viscous_theta)
        summary["e2_variant"] = {
            "consistent_variant": resolution["consistent_variant"],
            "deviation_varA": resolution["deviation_varA"],
            "deviation_varB": resolution["deviation_varB"],
        }
    _write_json(os.path.join(cfg.out_dir, "summary.json"), summary)
    return 0


def cmd_decay_fit(timeseries: str, window_lo: float, window_hi: float) -> int:
    cols = _read_columns(timeseries, required=("t", "Q"))
    fit = diagnostics.fit_decay(cols["t"], cols["Q"], (window_lo, window_hi))
    if fit.equilibrium:
        print("equilibrium trajectory: Q identically zero, no decay fit")
    else:
        print(f"slope = {fit.slope:.6g}")
        print(f"sup_envelope = {fit.sup_envelope:.6g}")
    summary_path = os.path.join(os.path.dirname(timeseries) or ".", "summary.json")
    summary = {}
    if os.path.exists(summary_path):
        with open(summary_path, "r", encoding="utf-8") as fh:
            summary = json.load(fh)
    summary["fit"] = {
        "slope": None if fit.equilibrium else fit.slope,
        "sup_envelope": fit.sup_envelope,
        "window": list(fit.window),
        "equilibrium": fit.equilibrium,
    }
    _write_json(summary_path, summary)
    return 0


def cmd_oracle_check(run_dir: str) -> int:
    history_path = os.path.join(run_dir, "rhistory.csv")
    series_path = os.path.join(run_dir, "timeseries.csv")
    for path in (history_path, series_path):
        if not os.path.exists(path):
            raise ConfigError(f"run directory is missing {os.path.basename(path)!r}")
    hist_cols = _read_columns(history_path, required=("t", "R"))
    series = _read_columns(series_path, required=("t", "boundary_density"))
    summary_path = os.path.join(run_dir, "summary.json")
    if not os.path.exists(summary_path):
        raise ConfigError("run directory is missing 'summary.json' (needed for params)")
    with open(summary_path, "r", encoding="utf-8") as fh:
        summary = json.load(fh)
    from .model import Parameters

    try:
        pblock = summary["params"]
        params = Parameters(Ca=float(pblock["Ca"]), We=float(pblock["We"]),
                            mu=float(pblock["mu"]), gamma=float(pblock["gamma"]),
                            gamma0=float(pblock["gamma0"]))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"summary.json params block is unusable: {exc}") from exc

    history = oracle.RadiusHistory(hist_cols["t"], hist_cols["R"])
    values = oracle.duhamel_boundary(history, float(series["boundary_density"][0]), params)
    idx = np.searchsorted(hist_cols["t"], series["t"])
    idx = np.clip(idx, 0, len(values) - 1)
    diffs = series["boundary_density"] - values[idx]
    sup = float(np.max(np.abs(diffs)))
    report = {
        "sup_diff": sup,
        "rows": [
            {"t": float(t), "simulated": float(s), "oracle": float(o), "diff": float(d)}
            for t, s, o, d in zip(series["t"], series["boundary_density"], values[idx], diffs)
        ],
    }
    _write_json(os.path.join(run_dir, "oracle_report.json"), report)
    summary["oracle"] = {"sup_diff": sup}
    _write_json(summary_path, summary)
    print(f"oracle sup difference = {sup:.6g}")
    return 0


def cmd_sweep(config_path: str) -> int:
    cfg = load_sweep_config(config_path)
    spec = SweepSpec(base=cfg.init, ks=cfg.ks, N=cfg.N, T_obs=cfg.T_obs,
                     dx=cfg.dx, levels=cfg.levels)
    os.makedirs(cfg.out_dir, exist_ok=True)
    out_path = os.path.join(cfg.out_dir, "convergence.csv")
    if cfg.mode == "truncation":
        table = truncation_sweep(spec, cfg.params, cfg.integrator, cadence=cfg.cadence)
        header = ("k_lo", "k_hi", "du_L2", "dvinv_L2", "dR_sup",
                  "pre_return_du_L2", "t_return")
        rows = [[row[name] for name in header] for row in table.truncation_rows]
    else:
        table = refinement_study(spec, cfg.params, cfg.integrator)
        header = ("n", "dx", "err_u", "err_rho", "err_R",
                  "order_u", "order_rho", "order_R")
        rows = [[row.get(name) for name in header] for row in table.refinement_rows]
    _write_csv(out_path, header, rows, cfg.precision)
    print(f"wrote {out_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bubbleflow",
        description="Bubble-liquid simulator in Lagrangian mass coordinates",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="integrate a configured run and write artifacts")
    p_run.add_argument("config")
    p_fit = sub.add_parser("decay-fit", help="fit the decay exponent of a timeseries")
    p_fit.add_argument("timeseries")
    p_fit.add_argument("window_lo", type=float)
    p_fit.add_argument("window_hi", type=float)
    p_orc = sub.add_parser("oracle-check", help="compare a run against the interface oracle")
    p_orc.add_argument("run_dir")
    p_swp = sub.add_parser("sweep", help="domain-truncation or grid-refinement study")
    p_swp.add_argument("config")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.config)
        if args.command == "decay-fit":
            return cmd_decay_fit(args.timeseries, args.window_lo, args.window_hi)
        if args.command == "oracle-check":
            return cmd_oracle_check(args.run_dir)
        return cmd_sweep(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RunFailure as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
