"""Pure numpy/scipy implementation of the stepping kernels.

Same contract as the compiled extension: specific volume v = 1/rho is the
evolved cell variable, node radii are always rebuilt from (v, R) through the
mass constraint, and every step returns the cellwise dissipation of the new
state for the energy budget. Step routines write into workspace buffers and
never touch their inputs, so a failed attempt can simply be retried with a
smaller dt.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded

NAME = "python"


class Workspace:
    def __init__(self, n: int):
        self.n = n
        self.u_new = np.zeros(n + 1)
        self.v_new = np.zeros(n)


def make_workspace(n: int) -> Workspace:
    return Workspace(n)


def _radii(v, R, dx):
    r3 = np.empty(v.shape[0] + 1)
    r3[0] = R ** 3
    np.cumsum(3.0 * dx * v, out=r3[1:])
    r3[1:] += r3[0]
    r = np.cbrt(r3)
    r[0] = R
    return r


def _rhs(u, v, R, dx, Ca, We, mu, gamma, gamma0):
    r = _radii(v, R, dx)
    rho = 1.0 / v
    divu = np.diff(r * r * u) / dx
    T = -0.5 * Ca * rho ** gamma + mu * rho * divu
    g = R ** (-3.0 * gamma0)
    T0 = -0.5 * Ca * g - (2.0 / We) * (g - 1.0 / R) + 2.0 * mu * u[0] / R
    du = np.empty_like(u)
    r2 = r * r
    du[1:-1] = r2[1:-1] * np.diff(T) / dx
    du[0] = r2[0] * (T[0] - T0) / (0.5 * dx)
    du[-1] = 0.0
    return du, divu, u[0]


def dissipation_cellwise(u, v, R, dx, mu):
    """mu * sum sigma^2/rho dx + 2 mu R u0^2 for the given fields."""
    r = _radii(v, R, dx)
    divu = np.diff(r * r * u) / dx
    return mu * dx * float(np.sum(divu * divu / v)) + 2.0 * mu * R * u[0] ** 2


def stable_dt(u, v, R, dx, cfl, dt_max, Ca, We, mu, gamma, gamma0, explicit):
    """Acoustic CFL bound, plus the diffusive bound in explicit mode."""
    r = _radii(v, R, dx)
    rho = 1.0 / v
    c = np.sqrt(gamma * 0.5 * Ca * rho ** (gamma - 1.0))
    rbar = 0.5 * (r[:-1] + r[1:])
    umag = 0.5 * np.abs(u[:-1] + u[1:])
    dt = cfl * dx / float(np.max(rho * rbar * rbar * (c + umag)))
    if explicit:
        dt = min(dt, 0.5 * dx * dx / float(np.max(mu * rho * rho * rbar ** 4)))
    return min(dt, dt_max)


def step_rk2(ws, u, v, R, dx, dt, Ca, We, mu, gamma, gamma0):
    """Two stage explicit update; returns (ok, R_new, D_new)."""
    du1, dv1, dR1 = _rhs(u, v, R, dx, Ca, We, mu, gamma, gamma0)
    v1 = v + dt * dv1
    R1 = R + dt * dR1
    if R1 <= 0.0 or np.min(v1) <= 0.0:
        return False, R, 0.0
    u1 = u + dt * du1
    du2, dv2, dR2 = _rhs(u1, v1, R1, dx, Ca, We, mu, gamma, gamma0)
    np.add(v, 0.5 * dt * (dv1 + dv2), out=ws.v_new)
    R2 = R + 0.5 * dt * (dR1 + dR2)
    if R2 <= 0.0 or np.min(ws.v_new) <= 0.0:
        return False, R, 0.0
    np.add(u, 0.5 * dt * (du1 + du2), out=ws.u_new)
    ws.u_new[-1] = 0.0
    return True, R2, dissipation_cellwise(ws.u_new, ws.v_new, R2, dx, mu)


def step_semi_implicit(ws, u, v, R, dx, dt, theta, Ca, We, mu, gamma, gamma0):
    """One tridiagonal solve per step, viscous flux theta-weighted in time.

    Coefficients are frozen at a midpoint-predicted (v, R); the continuity
    and radius updates use the theta-average of old and new velocity, which
    makes theta = 1/2 second order while theta = 1 stays fully damped.
    """
    n = v.shape[0]
    r = _radii(v, R, dx)
    divu = np.diff(r * r * u) / dx
    v_mid = v + 0.5 * dt * divu
    R_mid = R + 0.5 * dt * u[0]
    if R_mid <= 0.0 or np.min(v_mid) <= 0.0:
        return False, R, 0.0
    r_mid = _radii(v_mid, R_mid, dx)
    rho_mid = 1.0 / v_mid
    r2 = r_mid * r_mid

    sigma_old = rho_mid * np.diff(r2 * u) / dx
    T_exp = -0.5 * Ca * rho_mid ** gamma + mu * (1.0 - theta) * sigma_old
    g = R_mid ** (-3.0 * gamma0)
    T0_exp = (
        -0.5 * Ca * g
        - (2.0 / We) * (g - 1.0 / R_mid)
        + 2.0 * mu * (1.0 - theta) * u[0] / R_mid
    )

    a = mu * theta * dt / (dx * dx)
    diag = np.empty(n)
    lower = np.zeros(n)
    upper = np.zeros(n)
    rhs = np.empty(n)
    diag[1:] = 1.0 + a * r2[1:-1] * (rho_mid[:-1] + rho_mid[1:]) * r2[1:-1]
    lower[1:] = -a * r2[1:-1] * rho_mid[:-1] * r2[:-2]
    upper[1:-1] = -a * r2[1:-2] * rho_mid[1:-1] * r2[2:-1]
    rhs[1:] = u[1:-1] + dt * r2[1:-1] * np.diff(T_exp) / dx
    diag[0] = 1.0 + 2.0 * a * r2[0] * rho_mid[0] * r2[0] + 4.0 * mu * theta * dt * R_mid / dx
    upper[0] = -2.0 * a * r2[0] * rho_mid[0] * r2[1]
    rhs[0] = u[0] + 2.0 * dt * r2[0] * (T_exp[0] - T0_exp) / dx

    ab = np.zeros((3, n))
    ab[0, 1:] = upper[:-1]
    ab[1, :] = diag
    ab[2, :-1] = lower[1:]
    ustar = solve_banded((1, 1), ab, rhs)

    ws.u_new[:-1] = ustar
    ws.u_new[-1] = 0.0
    ubar = theta * ws.u_new + (1.0 - theta) * u
    np.add(v, dt * np.diff(r2 * ubar) / dx, out=ws.v_new)
    R_new = R + dt * ubar[0]
    if R_new <= 0.0 or np.min(ws.v_new) <= 0.0:
        return False, R, 0.0
    return True, R_new, dissipation_cellwise(ws.u_new, ws.v_new, R_new, dx, mu)
