"""Domain-truncation, grid-refinement and perturbation-stability studies.

The unbounded problem is approximated on [0, k] with a rigid outer wall, so
solutions on growing domains must agree on a fixed observation window until
the acoustic reflection off x = k re-enters it. The sweep measures exactly
that, the refinement study measures the discretization order, and the
perturbation study bounds the growth of the squared distance between two
nearby trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import stepping
from .model import Grid, InitialDataSpec, Parameters, State, cutoff_initial_data, make_initial_data
from .operators import sound_speed
from .stepping import IntegratorConfig, SampleSpec


@dataclass(frozen=True)
class SweepSpec:
    """Shared description of the sweep experiments.

    base: initial data family; ks: increasing domain sizes with one common
    dx (nested grids); the solution is observed on [0, N] x [0, T_obs];
    levels: cell counts for the refinement study (run on k = ks[0]).
    """

    base: InitialDataSpec
    ks: tuple
    N: float
    T_obs: float
    dx: float
    levels: tuple = ()

    def __post_init__(self):
        if len(self.ks) < 2 or any(b <= a for a, b in zip(self.ks, self.ks[1:])):
            raise ValueError("need at least two strictly increasing domain sizes")
        if self.N <= 0.0 or self.T_obs <= 0.0 or self.dx <= 0.0:
            raise ValueError("N, T_obs and dx must be positive")
        for k in self.ks:
            n = k / self.dx
            if abs(n - round(n)) > 1e-9:
                raise ValueError("every domain size must be an integer multiple of dx")


@dataclass
class ConvergenceTable:
    truncation_rows: list = field(default_factory=list)
    refinement_rows: list = field(default_factory=list)


def reflection_return_time(N: float, k: float, params: Parameters) -> float:
    """Time for an acoustic signal to run from x = N to the wall and back.

    Characteristic speed in mass coordinate is rho r^2 c; evaluated on the
    equilibrium background rho = 1, r = (1+3x)^(1/3) the crossing integral
    has the closed form below.
    """
    c0 = float(sound_speed(1.0, params))
    return 2.0 * ((1.0 + 3.0 * k) ** (1.0 / 3.0) - (1.0 + 3.0 * N) ** (1.0 / 3.0)) / c0


def _l2_nodes(du: np.ndarray, dx: float) -> float:
    return math.sqrt(dx * float(np.sum(du * du) - 0.5 * (du[0] ** 2 + du[-1] ** 2)))


def _l2_cells(dc: np.ndarray, dx: float) -> float:
    return math.sqrt(dx * float(np.sum(dc * dc)))


def _common_dt(states, grids, params: Parameters, config: IntegratorConfig) -> float:
    from .model import radii

    dts = [stepping.stable_dt(s, radii(s, g), config, params, g)
           for s, g in zip(states, grids)]
    return 0.95 * min(dts)


def _sweep_run(state: State, grid: Grid, params: Parameters, config: IntegratorConfig,
               cadence: float):
    return stepping.run(state, grid, params, config,
                        SampleSpec(cadence=cadence, keep_fields=True))


def truncation_sweep(spec: SweepSpec, params: Parameters, config: IntegratorConfig,
                     cadence: float = 0.1) -> ConvergenceTable:
    """Run every domain size with cutoff data and compare successive pairs.

    All members share one fixed dt (the smallest stable one in the family),
    so fields on the common region agree bitwise until wall influence
    arrives. Row fields: the L2(0, N) differences of u and 1/rho at T_obs,
    the sup of |R difference| over [0, T_obs], the max pre-return u
    difference, and the guard time itself.
    """
    if spec.N >= spec.ks[0]:
        raise ValueError("observation extent must be strictly inside the smallest domain")
    grids = [Grid(float(k), int(round(k / spec.dx))) for k in spec.ks]
    states = []
    for g in grids:
        state = make_initial_data(g, params, spec.base)
        states.append(cutoff_initial_data(state, g))
    dt = _common_dt(states, grids, params, config)
    run_cfg = replace(config, dt_max=dt, t_end=spec.T_obs)
    runs = [_sweep_run(s, g, params, run_cfg, cadence) for s, g in zip(states, grids)]

    n_obs = int(round(spec.N / spec.dx))
    table = ConvergenceTable()
    for (k_lo, run_lo), (k_hi, run_hi) in zip(zip(spec.ks, runs), zip(spec.ks[1:], runs[1:])):
        t_return = reflection_return_time(spec.N, k_lo, params)
        pre_return = 0.0
        du_final = dv_final = None
        for (t_lo_s, s_lo), (_, s_hi) in zip(run_lo.snapshots, run_hi.snapshots):
            du = s_lo.u[: n_obs + 1] - s_hi.u[: n_obs + 1]
            dv = 1.0 / s_lo.rho[:n_obs] - 1.0 / s_hi.rho[:n_obs]
            # 10% margin absorbs the viscous smearing of the acoustic front
            if t_lo_s < 0.9 * t_return:
                pre_return = max(pre_return, _l2_nodes(du, spec.dx))
            du_final, dv_final = du, dv
        table.truncation_rows.append({
            "k_lo": float(k_lo),
            "k_hi": float(k_hi),
            "du_L2": _l2_nodes(du_final, spec.dx),
            "dvinv_L2": _l2_cells(dv_final, spec.dx),
            "dR_sup": float(np.max(np.abs(run_lo.history_R
                - np.interp(run_lo.history_t, run_hi.history_t, run_hi.history_R)))),
            "pre_return_du_L2": pre_return,
            "t_return": t_return,
        })
    return table


def refinement_study(spec: SweepSpec, params: Parameters, config: IntegratorConfig,
                     cadence: float | None = None) -> ConvergenceTable:
    """Errors against the finest level at T_obs, with observed orders.

    Levels are cell counts on the domain k = ks[0]; each doubling of n
    halves both dx and dt (dt is bound proportionally through dt_max), so
    the observed order log2(e_coarse/e_fine) mixes space and time at the
    scheme's formal rate.
    """
    if len(spec.levels) < 3:
        raise ValueError("refinement study needs at least three levels")
    ns = [int(n) for n in spec.levels]
    if any(2 * a != b for a, b in zip(ns, ns[1:])):
        raise ValueError("refinement levels must double the cell count")
    k = float(spec.ks[0])
    grids = [Grid(k, n) for n in ns]
    states = [make_initial_data(g, params, spec.base) for g in grids]
    from .model import radii

    dt0 = 0.9 * stepping.stable_dt(states[0], radii(states[0], grids[0]), config,
                                   params, grids[0])
    runs = []
    for g, s, n in zip(grids, states, ns):
        cfg = replace(config, dt_max=dt0 * ns[0] / n, t_end=spec.T_obs)
        cad = cadence if cadence is not None else spec.T_obs
        runs.append(stepping.run(s, g, params, cfg, SampleSpec(cadence=cad, keep_fields=True)))

    _, fine = runs[-1].snapshots[-1]
    n_fine = ns[-1]
    table = ConvergenceTable()
    errors = []
    for g, n, run_i in zip(grids[:-1], ns[:-1], runs[:-1]):
        stride = n_fine // n
        _, coarse = run_i.snapshots[-1]
        du = coarse.u - fine.u[::stride]
        # fine cells average onto coarse cell centers (second order exact)
        v_fine = (1.0 / fine.rho).reshape(n, stride).mean(axis=1)
        dv = 1.0 / coarse.rho - v_fine
        errors.append({
            "n": n,
            "dx": g.dx,
            "err_u": _l2_nodes(du, g.dx),
            "err_rho": _l2_cells(dv, g.dx),
            "err_R": abs(coarse.R - fine.R),
        })
    for lo, hi in zip(errors, errors[1:]):
        row = dict(lo)
        for name in ("u", "rho", "R"):
            e0, e1 = lo[f"err_{name}"], hi[f"err_{name}"]
            row[f"order_{name}"] = math.log2(e0 / e1) if e1 > 0.0 else math.inf
        table.refinement_rows.append(row)
    table.refinement_rows.append(dict(errors[-1]))
    return table


def perturbation_stability(grid: Grid, params: Parameters, config: IntegratorConfig,
                           base: State, eta: float, pulse_extent: float,
                           cadence: float = 0.25):
    """Track Phi(t) = |u1-u2|^2 + |1/rho1 - 1/rho2|^2 + (R1-R2)^2.

    The second run adds an eta-sized velocity pulse to the base data; both
    runs share one dt. Reports the growth factor max_t Phi/Phi(0).
    """
    from .model import pulse_profile, radii

    pert = base.copy()
    pert.u = pert.u + eta * pulse_profile(grid.nodes, pulse_extent, 1.0)
    pert.u[-1] = 0.0
    dt = _common_dt([base, pert], [grid, grid], params, config)
    run_cfg = replace(config, dt_max=dt)
    run1 = _sweep_run(base, grid, params, run_cfg, cadence)
    run2 = _sweep_run(pert, grid, params, run_cfg, cadence)
    t = []
    phi = []
    for (ts, s1), (_, s2) in zip(run1.snapshots, run2.snapshots):
        val = _l2_nodes(s1.u - s2.u, grid.dx) ** 2
        val += _l2_cells(1.0 / s1.rho - 1.0 / s2.rho, grid.dx) ** 2
        val += (s1.R - s2.R) ** 2
        t.append(ts)
        phi.append(val)
    t = np.array(t)
    phi = np.array(phi)
    growth = float(np.max(phi / phi[0])) if phi[0] > 0.0 else math.inf if np.any(phi > 0) else 0.0
    return {"t": t, "phi": phi, "phi0": float(phi[0]), "max_growth": growth}


__all__ = [
    "SweepSpec",
    "ConvergenceTable",
    "reflection_return_time",
    "truncation_sweep",
    "refinement_study",
    "perturbation_stability",
]
