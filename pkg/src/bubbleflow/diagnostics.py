"""Energy, entropy and decay functionals evaluated on discrete states.

Quadrature follows the staggering: cell quantities by midpoint sums, nodal
quantities by the trapezoid rule (half weights at both ends). Gradients of
cell fields live on interior nodes; the two boundary nodes copy the nearest
interior value where a full-domain nodal field is required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import operators
from .model import Geometry, Grid, Parameters, State, interface_density, radii, rho_at_nodes


def node_integral(f: np.ndarray, dx: float) -> float:
    return dx * float(np.sum(f) - 0.5 * (f[0] + f[-1]))


def cell_integral(f: np.ndarray, dx: float) -> float:
    return dx * float(np.sum(f))


def _cell_gradient_at_nodes(f_cells: np.ndarray, dx: float) -> np.ndarray:
    out = np.empty(f_cells.shape[0] + 1)
    out[1:-1] = np.diff(f_cells) / dx
    out[0] = out[1]
    out[-1] = out[-2]
    return out


def enthalpy_H(rho, params: Parameters):
    """Density potential rho^(gamma-1) - gamma + (gamma-1)/rho.

    Nonnegative, strictly convex, vanishing only at rho = 1.
    """
    g = params.gamma
    return rho ** (g - 1.0) - g + (g - 1.0) / rho


def potential_P(R, params: Parameters):
    """Radius potential: bubble gas energy + surface energy + pressure work.

    Convex on (0, inf) with minimum 0 at R = 1.
    """
    Ca, We, g0 = params.Ca, params.We, params.gamma0
    return (
        (0.5 * Ca + 2.0 / We) / (3.0 * g0 - 3.0) * (R ** (3.0 - 3.0 * g0) - 1.0)
        + (R ** 2 - 1.0) / We
        + Ca / 6.0 * (R ** 3 - 1.0)
    )


def potential_P_prime(R, params: Parameters):
    """dP/dR, written so the equilibrium value is exactly zero."""
    Ca, We, g0 = params.Ca, params.We, params.gamma0
    g = R ** (-3.0 * g0)
    return R ** 2 * (0.5 * Ca * (1.0 - g) - (2.0 / We) * (g - 1.0 / R))


def enthalpy_integral(state: State, grid: Grid, params: Parameters) -> float:
    return cell_integral(enthalpy_H(state.rho, params), grid.dx)


def basic_energy(state: State, geom: Geometry, grid: Grid, params: Parameters) -> float:
    """Kinetic + density potential + radius potential; dissipated by viscosity."""
    kinetic = 0.5 * node_integral(state.u ** 2, grid.dx)
    h_part = 0.5 * params.Ca / (params.gamma - 1.0) * enthalpy_integral(state, grid, params)
    return kinetic + h_part + potential_P(state.R, params)


def boundary_density_trace(state: State, params: Parameters) -> float:
    """(rho R^2)^(-gamma) at the interface, density trace by extrapolation."""
    return (interface_density(state) * state.R ** 2) ** (-params.gamma)


def dissipation(state: State, geom: Geometry, grid: Grid, params: Parameters):
    """Instantaneous dissipation rate in two discretizations.

    Split form: mu * int rho (r^2 u_x)^2 + 2 mu * int u^2/(rho r^2), with u_x
    on cells and the second integrand on nodes. Flux form: mu * int sigma^2/rho
    + 2 mu R u_0^2. Equal in the continuum; the flux form is the one whose
    time integral closes the discrete energy budget exactly, so it is the
    canonical D.

    Returns (D_nodal, D_cellwise).
    """
    mu, dx = params.mu, grid.dx
    r = geom.r
    rbar = 0.5 * (r[:-1] + r[1:])
    ux = np.diff(state.u) / dx
    d_nodal = mu * cell_integral(state.rho * (rbar ** 2 * ux) ** 2, dx)
    d_nodal += 2.0 * mu * node_integral(state.u ** 2 / (rho_at_nodes(state.rho) * r ** 2), dx)
    sigma = operators.viscous_stress(state, geom, grid)
    d_cell = mu * cell_integral(sigma ** 2 / state.rho, dx)
    d_cell += 2.0 * mu * state.R * state.u[0] ** 2
    return d_nodal, d_cell


def bd_entropy(state: State, geom: Geometry, grid: Grid, params: Parameters) -> float:
    """Energy of the gradient-shifted velocity u + mu r^2 (log rho)_x.

    Controls density gradients; bounded along small-data trajectories.
    """
    grad_log = _cell_gradient_at_nodes(np.log(state.rho), grid.dx)
    w = state.u + params.mu * geom.r ** 2 * grad_log
    h_part = 0.5 * params.Ca / (params.gamma - 1.0) * enthalpy_integral(state, grid, params)
    return 0.5 * node_integral(w ** 2, grid.dx) + h_part + potential_P(state.R, params)


def derivative_energies(state: State, geom: Geometry, rhs: operators.Rhs,
                        grid: Grid, params: Parameters):
    """First-order (time-derivative) energies.

    u_t and rho_t come from the spatial right-hand sides, so the values are
    well defined at t = 0. The interface term of the second energy carries
    two bookkeeping conventions that disagree in the sign of the 1/We part
    and the radius weight; both are returned (variant A: constant weight,
    -1/We; variant B: R^(1-3 gamma0) weight, +1/We) and the energy-identity
    test decides which one is consistent.

    Returns (E2_variant_A, E2_variant_B, E3).
    """
    Ca, We, mu, g, g0 = params.Ca, params.We, params.mu, params.gamma, params.gamma0
    dx = grid.dx
    rho = state.rho
    ut = rhs.du_dt
    rho_t = -rho ** 2 * rhs.dv_dt
    s_t = 0.5 * (g - 1.0) * rho ** (0.5 * (g - 3.0)) * rho_t
    common = 0.5 * node_integral(ut ** 2, dx)
    common += 0.5 * Ca * 2.0 * g / (g - 1.0) ** 2 * cell_integral(s_t ** 2, dx)
    dRdt2 = rhs.dR_dt ** 2
    coef_a = 1.5 * g0 * (0.5 * Ca + 2.0 / We) - 1.0 / We
    coef_b = 1.5 * g0 * (0.5 * Ca + 2.0 / We) * state.R ** (1.0 - 3.0 * g0) + 1.0 / We
    e2_a = common + coef_a * dRdt2
    e2_b = common + coef_b * dRdt2
    grad_logt = _cell_gradient_at_nodes(rho_t / rho, dx)
    wt = ut + mu * geom.r ** 2 * grad_logt
    e3 = 0.5 * node_integral(wt ** 2, dx)
    e3 += 0.5 * Ca * 2.0 * g / (g - 1.0) ** 2 * cell_integral(s_t ** 2, dx)
    return e2_a, e2_b, e3


def decay_norm(state: State, geom: Geometry, grid: Grid, params: Parameters) -> float:
    """Q = |r^2 u_x|^2 + |u/r|^2 + |r^2 rho_x|^2 + (R-1)^2.

    Zero exactly at the discrete equilibrium; bounds (R-1)^2 from above.
    """
    dx = grid.dx
    r = geom.r
    rbar = 0.5 * (r[:-1] + r[1:])
    ux = np.diff(state.u) / dx
    q = cell_integral((rbar ** 2 * ux) ** 2, dx)
    q += node_integral((state.u / r) ** 2, dx)
    rho_x = np.diff(state.rho) / dx
    q += dx * float(np.sum((r[1:-1] ** 2 * rho_x) ** 2))
    return q + (state.R - 1.0) ** 2


CSV_FIELDS = (
    "t", "R", "dR_dt", "E0", "D", "cumD", "E1", "E2_varA", "E2_varB", "E3",
    "Q", "Hint", "P", "rho_min", "rho_max", "energy_residual", "boundary_density",
)


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    R: float
    dR_dt: float
    E0: float
    D: float
    cumD: float
    E1: float
    E2_varA: float
    E2_varB: float
    E3: float
    Q: float
    Hint: float
    P: float
    rho_min: float
    rho_max: float
    energy_residual: float
    boundary_density: float


def make_record(state: State, grid: Grid, params: Parameters, cum_dissipation: float,
                e0_initial: float | None = None) -> DiagnosticsRecord:
    """Evaluate every tracked functional on one state."""
    geom = radii(state, grid)
    rhs = operators.rhs(state, geom, grid, params)
    e0 = basic_energy(state, geom, grid, params)
    _, d_cell = dissipation(state, geom, grid, params)
    e2a, e2b, e3 = derivative_energies(state, geom, rhs, grid, params)
    base = e0 if e0_initial is None else e0_initial
    return DiagnosticsRecord(
        t=state.t,
        R=state.R,
        dR_dt=float(state.u[0]),
        E0=e0,
        D=d_cell,
        cumD=cum_dissipation,
        E1=bd_entropy(state, geom, grid, params),
        E2_varA=e2a,
        E2_varB=e2b,
        E3=e3,
        Q=decay_norm(state, geom, grid, params),
        Hint=enthalpy_integral(state, grid, params),
        P=potential_P(state.R, params),
        rho_min=float(np.min(state.rho)),
        rho_max=float(np.max(state.rho)),
        energy_residual=e0 + cum_dissipation - base,
        boundary_density=boundary_density_trace(state, params),
    )


def energy_budget(trajectory) -> np.ndarray:
    """Residual series E0(t) + cumD(t) - E0(0); zero for exact stepping."""
    e0 = trajectory.column("E0")
    cum = trajectory.column("cumD")
    return e0 + cum - e0[0]


@dataclass(frozen=True)
class DecayFit:
    window: tuple
    slope: float
    amplitude: float
    sup_envelope: float
    equilibrium: bool = False


Q_FLOOR = 1e-28


def fit_decay(t: np.ndarray, q: np.ndarray, window) -> DecayFit:
    """Least-squares slope of log Q against log(1+t) on the window.

    sup_envelope is max (1+t) Q(t) there. A trajectory whose Q never rises
    above the zero floor yields the distinguished equilibrium result.
    """
    t = np.asarray(t, dtype=float)
    q = np.asarray(q, dtype=float)
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValueError("decay window must satisfy t_lo < t_hi")
    if lo < t[0] - 1e-9 or hi > t[-1] + 1e-9:
        raise ValueError("decay window lies outside the trajectory span")
    mask = (t >= lo - 1e-12) & (t <= hi + 1e-12)
    if not np.any(mask):
        raise ValueError("decay window contains no samples")
    tw, qw = t[mask], q[mask]
    sup_env = float(np.max((1.0 + tw) * qw))
    if np.max(qw) <= Q_FLOOR:
        return DecayFit((lo, hi), math.nan, 0.0, sup_env, equilibrium=True)
    pos = qw > Q_FLOOR
    slope, intercept = np.polyfit(np.log1p(tw[pos]), np.log(qw[pos]), 1)
    return DecayFit((lo, hi), float(slope), float(np.exp(intercept)), sup_env)


def fit_decay_trajectory(trajectory, window) -> DecayFit:
    return fit_decay(trajectory.times, trajectory.column("Q"), window)


def e2_identity_rhs(state: State, geom: Geometry, rhs: operators.Rhs,
                    grid: Grid, params: Parameters) -> float:
    """Predicted d/dt of the first-order energy from its budget identity.

    Sum of the dissipation terms (negative) and the cubic remainder terms;
    used to decide which interface-coefficient variant is consistent.
    """
    Ca, We, mu, g, g0 = params.Ca, params.We, params.mu, params.gamma, params.gamma0
    dx = grid.dx
    r = geom.r
    rho = state.rho
    u = state.u
    ut = rhs.du_dt
    rho_t = -rho ** 2 * rhs.dv_dt
    rbar = 0.5 * (r[:-1] + r[1:])
    ubar = 0.5 * (u[:-1] + u[1:])

    uxt = np.diff(ut) / dx
    total = -mu * cell_integral(rho * (rbar ** 2 * uxt) ** 2, dx)
    total += -2.0 * mu * node_integral(ut ** 2 / (rho_at_nodes(rho) * r ** 2), dx)

    # pressure-gradient coupling, interior nodes
    p_x = np.diff(rho ** g) / dx
    total += -Ca * dx * float(np.sum(p_x * (r * u * ut)[1:-1]))

    total += 0.5 * Ca * 0.5 * g * (g + 1.0) * cell_integral(rho ** (g - 4.0) * rho_t ** 3, dx)
    total += 2.0 * g * Ca * cell_integral(rho ** (g - 3.0) * rho_t ** 2 * ubar / rbar, dx)
    total += 3.0 * g * Ca * cell_integral(rho ** (g - 2.0) * rho_t * (ubar / rbar) ** 2, dx)

    flux_x = rhs.dv_dt                       # (r^2 u)_x on cells
    fluxt_x = np.diff(r ** 2 * ut) / dx      # (r^2 u_t)_x on cells
    total += -mu * cell_integral(rho_t * flux_x * fluxt_x, dx)
    growth_x = np.diff(2.0 * r * u ** 2) / dx
    total += -mu * cell_integral(rho * growth_x * fluxt_x, dx)
    sigma = rho * flux_x
    sigma_x = np.diff(sigma) / dx
    total += mu * dx * float(np.sum(sigma_x * (2.0 * r * u * ut)[1:-1]))

    total += 2.0 * mu * u[0] ** 2 * ut[0]
    dR = rhs.dR_dt
    ddR = ut[0]
    total += -3.0 * g0 * (0.5 * Ca + 2.0 / We) * (state.R ** (1.0 - 3.0 * g0) - 1.0) * dR * ddR
    return total


def resolve_e2_variant(initial: State, grid: Grid, params: Parameters,
                       scheme: str = "semi-implicit", theta: float = 0.5,
                       cfl: float = 0.5, t_probe: float = 0.4, n_probes: int = 5):
    """Short early-time run deciding which interface coefficient is consistent.

    Integrates a little past t = 0, numerically differentiates both variants
    of the first-order energy and compares against the identity right side
    evaluated on the sampled states. Returns a dict with the winner and the
    accumulated deviation of each variant.
    """
    from . import stepping

    cadence = t_probe / (4.0 * n_probes)
    config = stepping.IntegratorConfig(scheme=scheme, cfl=cfl, t_end=t_probe,
                                       viscous_theta=theta)
    traj = stepping.run(initial, grid, params, config,
                        stepping.SampleSpec(cadence=cadence, keep_fields=True))
    t = traj.times
    e2a = traj.column("E2_varA")
    e2b = traj.column("E2_varB")
    # probe on the second half of the window, clear of the startup layer
    idx = [m for m in range(1, len(t) - 1) if t[m] >= 0.5 * t_probe]
    probes = []
    err_a = err_b = 0.0
    for m in idx:
        dt2 = t[m + 1] - t[m - 1]
        da = (e2a[m + 1] - e2a[m - 1]) / dt2
        db = (e2b[m + 1] - e2b[m - 1]) / dt2
        _, state = traj.snapshots[m]
        geom = radii(state, grid)
        ident = e2_identity_rhs(state, geom, operators.rhs(state, geom, grid, params),
                                grid, params)
        probes.append({"t": float(t[m]), "ddt_varA": da, "ddt_varB": db,
                       "identity_rhs": ident})
        err_a += abs(da - ident)
        err_b += abs(db - ident)
    return {
        "consistent_variant": "A" if err_a <= err_b else "B",
        "deviation_varA": err_a / len(idx),
        "deviation_varB": err_b / len(idx),
        "probes": probes,
    }
