"""Time integration: explicit two-stage and viscous-implicit stepping.

Both schemes advance (u, 1/rho, R) with node radii rebuilt from the mass
constraint after every stage, keep the outer wall velocity pinned at zero,
and map the exact equilibrium to itself bitwise. The run driver records a
diagnostics row at a fixed time cadence, the bubble radius at every accepted
step, and retries a failed step (loss of positivity) with halved dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics, kernels
from .model import Geometry, Grid, Parameters, State, radii

SCHEMES = ("explicit-rk2", "semi-implicit")
RETRY_BUDGET = 8


class StepFailure(RuntimeError):
    """A single step produced nonpositive density or radius."""


class RunFailure(RuntimeError):
    """Step retries exhausted; the run cannot continue."""


@dataclass(frozen=True)
class IntegratorConfig:
    scheme: str = "semi-implicit"
    cfl: float = 0.8
    dt_max: float = math.inf
    t_end: float = 1.0
    viscous_theta: float = 0.5

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError("cfl must lie in (0, 1]")
        if not 0.5 <= self.viscous_theta <= 1.0:
            raise ValueError("viscous_theta must lie in [1/2, 1]")
        if self.t_end < 0.0 or self.dt_max <= 0.0:
            raise ValueError("t_end must be >= 0 and dt_max > 0")


@dataclass(frozen=True)
class SampleSpec:
    """Output cadence: diagnostics every `cadence` time units, optional
    field snapshots at given times, optionally a snapshot at every sample."""

    cadence: float = 0.1
    snapshot_times: tuple = ()
    keep_fields: bool = False

    def __post_init__(self):
        if self.cadence <= 0.0:
            raise ValueError("cadence must be positive")


@dataclass
class Trajectory:
    grid: Grid
    params: Parameters
    records: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    history_t: np.ndarray | None = None
    history_R: np.ndarray | None = None
    record_steps: np.ndarray | None = None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(rec, name) for rec in self.records])

    @property
    def times(self) -> np.ndarray:
        return self.column("t")


def stable_dt(state: State, geom: Geometry, config: IntegratorConfig,
              params: Parameters, grid: Grid) -> float:
    """Largest safe dt for the current state.

    Acoustic bound cfl*dx/(rho rbar^2 (c+|u|)) over the cells; explicit mode
    adds the diffusive bound dx^2/(2 mu rho^2 rbar^4); capped by dt_max.
    """
    backend = kernels.default_backend()
    return backend.stable_dt(
        state.u, 1.0 / state.rho, state.R, grid.dx, config.cfl, config.dt_max,
        params.Ca, params.We, params.mu, params.gamma, params.gamma0,
        config.scheme == "explicit-rk2",
    )


def _call_step(backend, ws, scheme, theta, u, v, R, dx, dt, params):
    if scheme == "explicit-rk2":
        return backend.step_rk2(ws, u, v, R, dx, dt, params.Ca, params.We,
                                params.mu, params.gamma, params.gamma0)
    return backend.step_semi_implicit(ws, u, v, R, dx, dt, theta, params.Ca,
                                      params.We, params.mu, params.gamma, params.gamma0)


def _single_step(state: State, grid: Grid, dt: float, params: Parameters,
                 scheme: str, theta: float, backend=None) -> State:
    if backend is None:
        backend = kernels.default_backend()
    ws = backend.make_workspace(grid.n)
    ok, R_new, _ = _call_step(backend, ws, scheme, theta, state.u, 1.0 / state.rho,
                              state.R, grid.dx, dt, params)
    if not ok:
        raise StepFailure(f"step of size {dt} lost positivity")
    return State(state.t + dt, ws.u_new.copy(), 1.0 / ws.v_new, R_new)


def step_explicit(state: State, grid: Grid, dt: float, params: Parameters,
                  backend=None) -> State:
    """One two-stage explicit step. Raises StepFailure on lost positivity."""
    return _single_step(state, grid, dt, params, "explicit-rk2", 0.5, backend)


def step_semi_implicit(state: State, grid: Grid, dt: float, params: Parameters,
                       theta: float = 0.5, backend=None) -> State:
    """One viscous-implicit step (tridiagonal direct solve)."""
    return _single_step(state, grid, dt, params, "semi-implicit", theta, backend)


def _next_stop(t, cadence, snapshot_times, t_end):
    # next sampling or snapshot instant strictly ahead of t
    eps = 1e-12 * max(1.0, t_end)
    tick = (math.floor(t / cadence + 1e-9) + 1) * cadence
    stop = min(tick, t_end)
    for ts in snapshot_times:
        if t + eps < ts < stop:
            stop = ts
    return stop


def run(initial: State, grid: Grid, params: Parameters, config: IntegratorConfig,
        samples: SampleSpec | None = None, backend=None) -> Trajectory:
    """Integrate to t_end, recording diagnostics, snapshots and R history.

    Deterministic for identical inputs. Steps are clipped so that sample
    instants are hit exactly; cumulative dissipation is accumulated by the
    trapezoid rule over every accepted step.
    """
    if backend is None:
        backend = kernels.default_backend()
    if samples is None:
        samples = SampleSpec()
    initial.check(grid)
    traj = Trajectory(grid=grid, params=params)

    u = initial.u.copy()
    v = 1.0 / initial.rho
    R = float(initial.R)
    t = float(initial.t)
    t_end = config.t_end
    if t > t_end:
        raise ValueError("initial time lies beyond t_end")
    ws = backend.make_workspace(grid.n)
    explicit = config.scheme == "explicit-rk2"
    theta = config.viscous_theta

    cum_dissipation = 0.0
    d_prev = backend.dissipation_cellwise(u, v, R, grid.dx, params.mu)

    history_t = [t]
    history_R = [R]
    record_steps = []
    snap_times = sorted(samples.snapshot_times)
    eps = 1e-12 * max(1.0, t_end)

    def current_state():
        return State(t, u.copy(), 1.0 / v, R)

    def emit_record():
        state = current_state()
        e0_init = traj.records[0].E0 if traj.records else None
        rec = diagnostics.make_record(state, grid, params, cum_dissipation, e0_init)
        traj.records.append(rec)
        record_steps.append(len(history_t) - 1)
        want_snap = samples.keep_fields or any(abs(t - ts) <= eps for ts in snap_times)
        if want_snap:
            traj.snapshots.append((t, state))

    # hot loop: bind everything local
    Ca, We, mu, gamma, gamma0 = params.Ca, params.We, params.mu, params.gamma, params.gamma0
    dx, cfl, dt_cap = grid.dx, config.cfl, config.dt_max
    kernel_dt = backend.stable_dt
    if explicit:
        def take(dt):
            return backend.step_rk2(ws, u, v, R, dx, dt, Ca, We, mu, gamma, gamma0)
    else:
        def take(dt):
            return backend.step_semi_implicit(ws, u, v, R, dx, dt, theta,
                                              Ca, We, mu, gamma, gamma0)
    push_t = history_t.append
    push_R = history_R.append

    emit_record()
    while t < t_end - eps:
        stop = _next_stop(t, samples.cadence, snap_times, t_end)
        while t < stop - eps:
            dt = kernel_dt(u, v, R, dx, cfl, dt_cap, Ca, We, mu, gamma, gamma0, explicit)
            if dt > stop - t:
                dt = stop - t
            ok, R_new, d_new = take(dt)
            if not ok:
                for _ in range(RETRY_BUDGET):
                    dt *= 0.5
                    ok, R_new, d_new = take(dt)
                    if ok:
                        break
                if not ok:
                    raise RunFailure(
                        f"positivity lost at t={t} after {RETRY_BUDGET} dt halvings")
            u, ws.u_new = ws.u_new, u
            v, ws.v_new = ws.v_new, v
            R = R_new
            t += dt
            cum_dissipation += 0.5 * dt * (d_prev + d_new)
            d_prev = d_new
            push_t(t)
            push_R(R)
        t = stop
        emit_record()

    traj.history_t = np.array(history_t)
    traj.history_R = np.array(history_R)
    traj.record_steps = np.array(record_steps, dtype=int)
    return traj


__all__ = [
    "SCHEMES",
    "RETRY_BUDGET",
    "StepFailure",
    "RunFailure",
    "IntegratorConfig",
    "SampleSpec",
    "Trajectory",
    "stable_dt",
    "step_explicit",
    "step_semi_implicit",
    "run",
]
