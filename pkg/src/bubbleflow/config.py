"""Flat key-value run configuration.

Format: one `section.key = value` per line, blank lines and lines starting
with `#` ignored. Dotted prefixes group the blocks (params, grid, init,
integrator, output, fit, oracle, diagnostics). Unknown keys are rejected so
typos surface immediately; every error message names the offending key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import Grid, InitialDataSpec, Parameters
from .stepping import IntegratorConfig


class ConfigError(ValueError):
    """Invalid or missing configuration input; message names the key."""


def parse_flat_config(path: str) -> dict:
    raw = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {text!r}")
        key, value = text.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value.strip()
    return raw


_KNOWN_KEYS = {
    "params.Ca", "params.We", "params.mu", "params.gamma", "params.gamma0",
    "grid.k", "grid.n",
    "init.family", "init.epsilon", "init.support", "init.shape", "init.cutoff",
    "integrator.scheme", "integrator.cfl", "integrator.dt_max",
    "integrator.t_end", "integrator.viscous_theta",
    "output.dir", "output.cadence", "output.snapshot_times", "output.precision",
    "fit.window_lo", "fit.window_hi",
    "oracle.enabled",
    "diagnostics.e2_variant_check",
}


def _need(raw: dict, key: str) -> str:
    if key not in raw:
        raise ConfigError(f"missing required key {key!r}")
    return raw[key]


def _as_float(raw: dict, key: str, default=None) -> float:
    if key not in raw:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return float(raw[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not a number: {raw[key]!r}") from exc


def _as_int(raw: dict, key: str, default=None) -> int:
    val = _as_float(raw, key, default)
    if val != int(val):
        raise ConfigError(f"key {key!r}: expected an integer, got {val!r}")
    return int(val)


def _as_bool(raw: dict, key: str, default: bool = False) -> bool:
    if key not in raw:
        return default
    val = raw[key].lower()
    if val in ("true", "1", "yes", "on"):
        return True
    if val in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"key {key!r}: expected a boolean, got {raw[key]!r}")


def _float_list(raw: dict, key: str) -> tuple:
    if key not in raw or not raw[key]:
        return ()
    try:
        return tuple(float(tok) for tok in raw[key].split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected comma-separated numbers") from exc


@dataclass
class RunConfig:
    params: Parameters
    grid: Grid
    init: InitialDataSpec
    apply_cutoff: bool
    integrator: IntegratorConfig
    out_dir: str
    cadence: float
    snapshot_times: tuple
    precision: int
    fit_window: tuple | None
    oracle_enabled: bool
    e2_variant_check: bool
    raw: dict = field(default_factory=dict)


def _wrap(key_hint: str, builder):
    try:
        return builder()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"key {key_hint}: {exc}") from exc


def load_run_config(path: str) -> RunConfig:
    raw = parse_flat_config(path)
    for key in raw:
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}")
    params = _wrap("params.*", lambda: Parameters(
        Ca=_as_float(raw, "params.Ca"),
        We=_as_float(raw, "params.We"),
        mu=_as_float(raw, "params.mu"),
        gamma=_as_float(raw, "params.gamma"),
        gamma0=_as_float(raw, "params.gamma0"),
    ))
    grid = _wrap("grid.*", lambda: Grid(
        k=_as_float(raw, "grid.k"),
        n=_as_int(raw, "grid.n"),
    ))
    support = _as_float(raw, "init.support", math.nan)
    init = _wrap("init.*", lambda: InitialDataSpec(
        family=_need(raw, "init.family"),
        epsilon=_as_float(raw, "init.epsilon", 0.0),
        support=None if math.isnan(support) else support,
        shape=_as_float(raw, "init.shape", 1.0),
    ))
    integrator = _wrap("integrator.*", lambda: IntegratorConfig(
        scheme=_need(raw, "integrator.scheme"),
        cfl=_as_float(raw, "integrator.cfl", 0.8),
        dt_max=_as_float(raw, "integrator.dt_max", math.inf),
        t_end=_as_float(raw, "integrator.t_end"),
        viscous_theta=_as_float(raw, "integrator.viscous_theta", 0.5),
    ))
    window_lo = _as_float(raw, "fit.window_lo", math.nan)
    window_hi = _as_float(raw, "fit.window_hi", math.nan)
    if math.isnan(window_lo) != math.isnan(window_hi):
        raise ConfigError("keys 'fit.window_lo' and 'fit.window_hi' must be given together")
    return RunConfig(
        params=params,
        grid=grid,
        init=init,
        apply_cutoff=_as_bool(raw, "init.cutoff", False),
        integrator=integrator,
        out_dir=_need(raw, "output.dir"),
        cadence=_as_float(raw, "output.cadence", 0.1),
        snapshot_times=_float_list(raw, "output.snapshot_times"),
        precision=_as_int(raw, "output.precision", 17),
        fit_window=None if math.isnan(window_lo) else (window_lo, window_hi),
        oracle_enabled=_as_bool(raw, "oracle.enabled", False),
        e2_variant_check=_as_bool(raw, "diagnostics.e2_variant_check", False),
        raw=raw,
    )


_SWEEP_KEYS = {
    "sweep.mode", "sweep.ks", "sweep.N", "sweep.T_obs", "sweep.dx",
    "sweep.levels", "sweep.cadence",
    "params.Ca", "params.We", "params.mu", "params.gamma", "params.gamma0",
    "init.family", "init.epsilon", "init.support", "init.shape",
    "integrator.scheme", "integrator.cfl", "integrator.dt_max",
    "integrator.viscous_theta",
    "output.dir", "output.precision",
}


@dataclass
class SweepConfig:
    mode: str
    params: Parameters
    init: InitialDataSpec
    integrator: IntegratorConfig
    ks: tuple
    N: float
    T_obs: float
    dx: float
    levels: tuple
    cadence: float
    out_dir: str
    precision: int


def load_sweep_config(path: str) -> SweepConfig:
    raw = parse_flat_config(path)
    for key in raw:
        if key not in _SWEEP_KEYS:
            raise ConfigError(f"unknown key {key!r}")
    mode = _need(raw, "sweep.mode")
    if mode not in ("truncation", "refinement"):
        raise ConfigError(f"key 'sweep.mode': expected truncation or refinement, got {mode!r}")
    params = _wrap("params.*", lambda: Parameters(
        Ca=_as_float(raw, "params.Ca"),
        We=_as_float(raw, "params.We"),
        mu=_as_float(raw, "params.mu"),
        gamma=_as_float(raw, "params.gamma"),
        gamma0=_as_float(raw, "params.gamma0"),
    ))
    support = _as_float(raw, "init.support", math.nan)
    init = _wrap("init.*", lambda: InitialDataSpec(
        family=_need(raw, "init.family"),
        epsilon=_as_float(raw, "init.epsilon", 0.0),
        support=None if math.isnan(support) else support,
        shape=_as_float(raw, "init.shape", 1.0),
    ))
    t_obs = _as_float(raw, "sweep.T_obs")
    integrator = _wrap("integrator.*", lambda: IntegratorConfig(
        scheme=raw.get("integrator.scheme", "semi-implicit"),
        cfl=_as_float(raw, "integrator.cfl", 0.5),
        dt_max=_as_float(raw, "integrator.dt_max", math.inf),
        t_end=t_obs,
        viscous_theta=_as_float(raw, "integrator.viscous_theta", 0.5),
    ))
    levels = tuple(int(x) for x in _float_list(raw, "sweep.levels"))
    if mode == "refinement" and len(levels) < 3:
        raise ConfigError("key 'sweep.levels': refinement mode needs at least three levels")
    return SweepConfig(
        mode=mode,
        params=params,
        init=init,
        integrator=integrator,
        ks=_float_list(raw, "sweep.ks"),
        N=_as_float(raw, "sweep.N"),
        T_obs=t_obs,
        dx=_as_float(raw, "sweep.dx"),
        levels=levels,
        cadence=_as_float(raw, "sweep.cadence", 0.1),
        out_dir=_need(raw, "output.dir"),
        precision=_as_int(raw, "output.precision", 17),
    )
