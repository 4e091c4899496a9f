# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernels: the hot inner loop of the simulator.

Mirrors kernels.pybackend exactly (same discrete formulas, same regrouped
interface stress); the tridiagonal system is solved by Thomas elimination.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt

cnp.import_array()

NAME = "cython"


cdef class Workspace:
    cdef public cnp.ndarray u_new, v_new
    cdef cnp.ndarray r, r_mid, scratch_a, scratch_b, scratch_c, scratch_d
    cdef cnp.ndarray du1, dv1, du2, dv2, u1, v1
    cdef int n

    def __init__(self, int n):
        self.n = n
        self.u_new = np.zeros(n + 1)
        self.v_new = np.zeros(n)
        self.r = np.zeros(n + 1)
        self.r_mid = np.zeros(n + 1)
        self.scratch_a = np.zeros(n + 1)
        self.scratch_b = np.zeros(n + 1)
        self.scratch_c = np.zeros(n + 1)
        self.scratch_d = np.zeros(n + 1)
        self.du1 = np.zeros(n + 1)
        self.dv1 = np.zeros(n)
        self.du2 = np.zeros(n + 1)
        self.dv2 = np.zeros(n)
        self.u1 = np.zeros(n + 1)
        self.v1 = np.zeros(n)


def make_workspace(int n):
    return Workspace(n)


cdef void _radii(double[::1] v, double R, double dx, double[::1] r) noexcept nogil:
    # two passes: sequential accumulation of r^3, then a vectorizable root
    cdef Py_ssize_t j, n = v.shape[0]
    cdef double r3 = R * R * R
    for j in range(n):
        r3 += 3.0 * dx * v[j]
        r[j + 1] = r3
    for j in range(1, n + 1):
        r[j] = pow(r[j], 1.0 / 3.0)
    r[0] = R


cdef double _interface_stress(double R, double u0, double Ca, double We,
                              double mu, double gamma0) noexcept nogil:
    cdef double g = pow(R, -3.0 * gamma0)
    return -0.5 * Ca * g - (2.0 / We) * (g - 1.0 / R) + 2.0 * mu * u0 / R


cdef void _rhs(double[::1] u, double[::1] v, double R, double dx,
               double Ca, double We, double mu, double gamma, double gamma0,
               double[::1] r, double[::1] T, double[::1] du, double[::1] dv) noexcept nogil:
    # T is scratch of length >= n (cell stresses); du, dv are outputs
    cdef Py_ssize_t j, n = v.shape[0]
    cdef double rho, divu, fl, fr, T0
    _radii(v, R, dx, r)
    for j in range(n):
        fl = r[j] * r[j] * u[j]
        fr = r[j + 1] * r[j + 1] * u[j + 1]
        divu = (fr - fl) / dx
        dv[j] = divu
        rho = 1.0 / v[j]
        T[j] = -0.5 * Ca * pow(rho, gamma) + mu * rho * divu
    T0 = _interface_stress(R, u[0], Ca, We, mu, gamma0)
    du[0] = r[0] * r[0] * (T[0] - T0) / (0.5 * dx)
    for j in range(1, n):
        du[j] = r[j] * r[j] * (T[j] - T[j - 1]) / dx
    du[n] = 0.0


cdef double _dissipation(double[::1] u, double[::1] v, double R, double dx,
                         double mu, double[::1] r) noexcept nogil:
    cdef Py_ssize_t j, n = v.shape[0]
    cdef double acc = 0.0, divu
    _radii(v, R, dx, r)
    for j in range(n):
        divu = (r[j + 1] * r[j + 1] * u[j + 1] - r[j] * r[j] * u[j]) / dx
        acc += divu * divu / v[j]
    return mu * dx * acc + 2.0 * mu * R * u[0] * u[0]


def dissipation_cellwise(double[::1] u, double[::1] v, double R, double dx, double mu):
    scratch = np.empty(v.shape[0] + 1)
    cdef double[::1] r = scratch
    return _dissipation(u, v, R, dx, mu, r)


def stable_dt(double[::1] u, double[::1] v, double R, double dx, double cfl,
              double dt_max, double Ca, double We, double mu, double gamma,
              double gamma0, bint explicit):
    cdef Py_ssize_t j, n = v.shape[0]
    cdef double rho, c, rbar, umag, speed, worst = 0.0, worst_visc = 0.0, dt
    scratch = np.empty(n + 1)
    cdef double[::1] r = scratch
    _radii(v, R, dx, r)
    for j in range(n):
        rho = 1.0 / v[j]
        c = sqrt(gamma * 0.5 * Ca * pow(rho, gamma - 1.0))
        rbar = 0.5 * (r[j] + r[j + 1])
        umag = 0.5 * fabs(u[j] + u[j + 1])
        speed = rho * rbar * rbar * (c + umag)
        if speed > worst:
            worst = speed
        if explicit:
            speed = mu * rho * rho * rbar * rbar * rbar * rbar
            if speed > worst_visc:
                worst_visc = speed
    dt = cfl * dx / worst
    if explicit:
        speed = 0.5 * dx * dx / worst_visc
        if speed < dt:
            dt = speed
    if dt_max < dt:
        dt = dt_max
    return dt


def step_rk2(Workspace ws, double[::1] u, double[::1] v, double R, double dx,
             double dt, double Ca, double We, double mu, double gamma, double gamma0):
    cdef Py_ssize_t j, n = v.shape[0]
    cdef double R1, R2, dmin
    cdef double[::1] r = ws.r
    cdef double[::1] T = ws.scratch_a
    cdef double[::1] du1 = ws.du1, dv1 = ws.dv1, du2 = ws.du2, dv2 = ws.dv2
    cdef double[::1] u1 = ws.u1, v1 = ws.v1
    cdef double[::1] u_new = ws.u_new, v_new = ws.v_new

    _rhs(u, v, R, dx, Ca, We, mu, gamma, gamma0, r, T, du1, dv1)
    dmin = 1.0
    for j in range(n):
        v1[j] = v[j] + dt * dv1[j]
        if v1[j] < dmin:
            dmin = v1[j]
    R1 = R + dt * u[0]
    if R1 <= 0.0 or dmin <= 0.0:
        return False, R, 0.0
    for j in range(n + 1):
        u1[j] = u[j] + dt * du1[j]

    _rhs(u1, v1, R1, dx, Ca, We, mu, gamma, gamma0, r, T, du2, dv2)
    dmin = 1.0
    for j in range(n):
        v_new[j] = v[j] + 0.5 * dt * (dv1[j] + dv2[j])
        if v_new[j] < dmin:
            dmin = v_new[j]
    R2 = R + 0.5 * dt * (u[0] + u1[0])
    if R2 <= 0.0 or dmin <= 0.0:
        return False, R, 0.0
    for j in range(n + 1):
        u_new[j] = u[j] + 0.5 * dt * (du1[j] + du2[j])
    u_new[n] = 0.0
    return True, R2, _dissipation(u_new, v_new, R2, dx, mu, r)


def step_semi_implicit(Workspace ws, double[::1] u, double[::1] v, double R,
                       double dx, double dt, double theta, double Ca, double We,
                       double mu, double gamma, double gamma0):
    cdef Py_ssize_t j, n = v.shape[0]
    cdef double R_mid, R_new, dmin, g, T0_exp, a, w, rho_lo, rho_hi, ubar0
    cdef double[::1] r = ws.r
    cdef double[::1] r_mid = ws.r_mid
    cdef double[::1] v_mid = ws.dv1          # reused as mid specific volume
    cdef double[::1] T_exp = ws.scratch_a
    cdef double[::1] diag = ws.scratch_b
    cdef double[::1] upper = ws.scratch_c
    cdef double[::1] rhs = ws.scratch_d
    cdef double[::1] lower = ws.du1          # reused
    cdef double[::1] ubar = ws.u1            # reused
    cdef double[::1] u_new = ws.u_new, v_new = ws.v_new

    _radii(v, R, dx, r)
    dmin = 1.0
    for j in range(n):
        v_mid[j] = v[j] + 0.5 * dt * (r[j + 1] * r[j + 1] * u[j + 1] - r[j] * r[j] * u[j]) / dx
        if v_mid[j] < dmin:
            dmin = v_mid[j]
    R_mid = R + 0.5 * dt * u[0]
    if R_mid <= 0.0 or dmin <= 0.0:
        return False, R, 0.0
    _radii(v_mid, R_mid, dx, r_mid)

    # explicit stress at mid coefficients with the old velocity
    for j in range(n):
        w = (r_mid[j + 1] * r_mid[j + 1] * u[j + 1] - r_mid[j] * r_mid[j] * u[j]) / dx
        T_exp[j] = -0.5 * Ca * pow(1.0 / v_mid[j], gamma) + mu * (1.0 - theta) * w / v_mid[j]
    g = pow(R_mid, -3.0 * gamma0)
    T0_exp = (-0.5 * Ca * g - (2.0 / We) * (g - 1.0 / R_mid)
              + 2.0 * mu * (1.0 - theta) * u[0] / R_mid)

    # tridiagonal rows for the n unknowns u*_0 .. u*_{n-1} (u*_n = 0)
    a = mu * theta * dt / (dx * dx)
    rho_hi = 1.0 / v_mid[0]
    w = r_mid[0] * r_mid[0]
    diag[0] = 1.0 + 2.0 * a * w * rho_hi * w + 4.0 * mu * theta * dt * R_mid / dx
    upper[0] = -2.0 * a * w * rho_hi * r_mid[1] * r_mid[1]
    rhs[0] = u[0] + 2.0 * dt * w * (T_exp[0] - T0_exp) / dx
    for j in range(1, n):
        rho_lo = 1.0 / v_mid[j - 1]
        rho_hi = 1.0 / v_mid[j]
        w = r_mid[j] * r_mid[j]
        diag[j] = 1.0 + a * w * (rho_lo + rho_hi) * w
        lower[j] = -a * w * rho_lo * r_mid[j - 1] * r_mid[j - 1]
        if j < n - 1:
            upper[j] = -a * w * rho_hi * r_mid[j + 1] * r_mid[j + 1]
        else:
            upper[j] = 0.0
        rhs[j] = u[j] + dt * w * (T_exp[j] - T_exp[j - 1]) / dx

    # Thomas elimination (diagonally dominant, diag > 1)
    for j in range(1, n):
        w = lower[j] / diag[j - 1]
        diag[j] -= w * upper[j - 1]
        rhs[j] -= w * rhs[j - 1]
    u_new[n - 1] = rhs[n - 1] / diag[n - 1]
    for j in range(n - 2, -1, -1):
        u_new[j] = (rhs[j] - upper[j] * u_new[j + 1]) / diag[j]
    u_new[n] = 0.0

    for j in range(n + 1):
        ubar[j] = theta * u_new[j] + (1.0 - theta) * u[j]
    dmin = 1.0
    for j in range(n):
        v_new[j] = v[j] + dt * (r_mid[j + 1] * r_mid[j + 1] * ubar[j + 1]
                                - r_mid[j] * r_mid[j] * ubar[j]) / dx
        if v_new[j] < dmin:
            dmin = v_new[j]
    ubar0 = ubar[0]
    R_new = R + dt * ubar0
    if R_new <= 0.0 or dmin <= 0.0:
        return False, R, 0.0
    return True, R_new, _dissipation(u_new, v_new, R_new, dx, mu, r)
