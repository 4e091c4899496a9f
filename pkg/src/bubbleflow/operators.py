"""Discrete right-hand sides and boundary closures on the staggered grid.

Total stress T = -(Ca/2) rho^gamma + mu*sigma lives on cells, with
sigma = rho * d(r^2 u)/dx the Lagrangian viscous flux. Momentum advances the
nodal velocities from stress differences; the interface node x = 0 carries a
half cell of mass and is closed by the dynamic interface condition, the
outer wall pins u = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Geometry, Grid, Parameters, State, interface_density


def pressure(rho, params: Parameters):
    """Liquid pressure (Ca/2) rho^gamma."""
    return 0.5 * params.Ca * rho ** params.gamma


def bubble_pressure(R, params: Parameters):
    """Homogeneous bubble gas pressure (Ca/2 + 2/We) R^(-3 gamma0)."""
    return (0.5 * params.Ca + 2.0 / params.We) * R ** (-3.0 * params.gamma0)


def sound_speed(rho, params: Parameters):
    """Adiabatic sound speed sqrt(gamma (Ca/2) rho^(gamma-1))."""
    return np.sqrt(params.gamma * 0.5 * params.Ca * rho ** (params.gamma - 1.0))


@dataclass(frozen=True)
class StressField:
    """Cellwise total stress, its viscous part and the interface value."""

    T: np.ndarray
    sigma: np.ndarray
    T_interface: float


@dataclass(frozen=True)
class Rhs:
    """Time derivatives: nodal du/dt (wall entry pinned 0), cell dv/dt, dR/dt."""

    du_dt: np.ndarray
    dv_dt: np.ndarray
    dR_dt: float


def viscous_stress(state: State, geom: Geometry, grid: Grid) -> np.ndarray:
    """sigma_{j+1/2} = rho_{j+1/2} (r_{j+1}^2 u_{j+1} - r_j^2 u_j) / dx."""
    flux = geom.r ** 2 * state.u
    return state.rho * np.diff(flux) / grid.dx


def interface_total_stress(state: State, params: Parameters) -> float:
    """Total stress at x = 0 implied by the dynamic interface condition.

    Equals -p_bubble(R) + (2/We)/R + 2 mu u_0/R, written in a regrouped form
    whose equilibrium value is exactly -Ca/2 in floating point.
    """
    R = state.R
    g = R ** (-3.0 * params.gamma0)
    return (
        -0.5 * params.Ca * g
        - (2.0 / params.We) * (g - 1.0 / R)
        + 2.0 * params.mu * state.u[0] / R
    )


def total_stress(state: State, geom: Geometry, grid: Grid, params: Parameters) -> StressField:
    sigma = viscous_stress(state, geom, grid)
    T = -pressure(state.rho, params) + params.mu * sigma
    return StressField(T, sigma, interface_total_stress(state, params))


def boundary_stress_residual(state: State, geom: Geometry, grid: Grid, params: Parameters) -> float:
    """Defect of the discrete interface stress balance; zero iff it holds.

    The density trace is linearly extrapolated from the first two cells and
    u_x at the interface is one sided second order.
    """
    rho0 = interface_density(state)
    u = state.u
    ux0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * grid.dx)
    R = state.R
    g = R ** (-3.0 * params.gamma0)
    return (
        0.5 * params.Ca * (rho0 ** params.gamma - g)
        + (2.0 / params.We) * (1.0 / R - g)
        - params.mu * rho0 * R ** 2 * ux0
    )


def momentum_rhs(state: State, geom: Geometry, stress: StressField, grid: Grid, params: Parameters) -> np.ndarray:
    """du/dt from stress differences; half cell of mass at the interface node."""
    du = np.zeros_like(state.u)
    r2 = geom.r ** 2
    du[1:-1] = r2[1:-1] * np.diff(stress.T) / grid.dx
    du[0] = r2[0] * (stress.T[0] - stress.T_interface) / (0.5 * grid.dx)
    return du


def continuity_rhs(state: State, geom: Geometry, grid: Grid) -> np.ndarray:
    """d(1/rho)/dt = d(r^2 u)/dx on the cells."""
    return np.diff(geom.r ** 2 * state.u) / grid.dx


def rhs(state: State, geom: Geometry, grid: Grid, params: Parameters) -> Rhs:
    """All semi-discrete time derivatives of (u, v, R) at once."""
    stress = total_stress(state, geom, grid, params)
    return Rhs(
        momentum_rhs(state, geom, stress, grid, params),
        continuity_rhs(state, geom, grid),
        float(state.u[0]),
    )


__all__ = [
    "pressure",
    "bubble_pressure",
    "sound_speed",
    "StressField",
    "Rhs",
    "viscous_stress",
    "interface_total_stress",
    "total_stress",
    "boundary_stress_residual",
    "momentum_rhs",
    "continuity_rhs",
    "rhs",
]
