"""Parameters, staggered mass grid, discrete state and initial data.

The liquid outside the bubble is described in Lagrangian mass coordinates:
x is the liquid mass between the interface and the sphere of radius r, so
the moving interface sits at the fixed boundary x = 0 and the truncated
outer wall at x = k. Velocity u lives on the nodes x_j = j*dx, density rho
on the cell centers x_{j+1/2}; the bubble radius R is a scalar unknown.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INITIAL_DATA_FAMILIES = ("equilibrium", "radius-kick", "density-bump", "velocity-pulse")


@dataclass(frozen=True)
class Parameters:
    """Nondimensional material constants of the bubble-liquid system.

    Ca and We scale the liquid pressure law p = (Ca/2) rho^gamma and the
    surface tension 2/(We R); mu is the (constant) viscosity; gamma and
    gamma0 are the liquid and bubble polytropic exponents.
    """

    Ca: float
    We: float
    mu: float
    gamma: float
    gamma0: float

    def __post_init__(self):
        if not (self.Ca > 0.0 and self.We > 0.0 and self.mu > 0.0):
            raise ValueError("Ca, We and mu must all be positive")
        if not (self.gamma > 1.0 and self.gamma0 > 1.0):
            raise ValueError("gamma and gamma0 must both exceed 1")


@dataclass(frozen=True)
class Grid:
    """Uniform mass grid on [0, k]: n cells, nodes x_j = j*k/n."""

    k: float
    n: int

    def __post_init__(self):
        if self.k <= 0.0:
            raise ValueError("mass extent k must be positive")
        if self.n < 4:
            raise ValueError("grid needs at least 4 cells")

    @property
    def dx(self) -> float:
        return self.k / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.k, self.n + 1)

    @property
    def cell_centers(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) * self.dx


@dataclass
class State:
    """Discrete unknowns at one time: nodal u, cellwise rho, radius R.

    Invariants: rho > 0 everywhere, R > 0 and u[-1] == 0 (rigid outer wall).
    """

    t: float
    u: np.ndarray
    rho: np.ndarray
    R: float

    def copy(self) -> "State":
        return State(self.t, self.u.copy(), self.rho.copy(), self.R)

    def check(self, grid: Grid | None = None):
        """Raise if a structural invariant is violated (used by tests)."""
        if grid is not None and (self.u.shape != (grid.n + 1,) or self.rho.shape != (grid.n,)):
            raise ValueError("field shapes do not match the grid")
        if not np.all(self.rho > 0.0):
            raise ValueError("density must stay positive")
        if not self.R > 0.0:
            raise ValueError("bubble radius must stay positive")
        if self.u[-1] != 0.0:
            raise ValueError("outer wall velocity must vanish")


@dataclass(frozen=True)
class Geometry:
    """Node radii derived from (rho, R) through the mass constraint."""

    r: np.ndarray


@dataclass(frozen=True)
class InitialDataSpec:
    """Near-equilibrium initial data family.

    epsilon is the perturbation amplitude, support the mass extent N of the
    perturbed region (bump and pulse families), shape a profile steepness
    exponent.
    """

    family: str
    epsilon: float = 0.0
    support: float | None = None
    shape: float = 1.0

    def __post_init__(self):
        if self.family not in INITIAL_DATA_FAMILIES:
            raise ValueError(f"unknown initial data family {self.family!r}")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be nonnegative")
        if self.support is not None and self.support <= 0.0:
            raise ValueError("support extent must be positive")


def equilibrium_state(grid: Grid) -> State:
    """Rest state u = 0, rho = 1, R = 1 (fixed point of the dynamics)."""
    return State(0.0, np.zeros(grid.n + 1), np.ones(grid.n), 1.0)


def radii(state: State, grid: Grid) -> Geometry:
    """Node radii r_j with r_j^3 = R^3 + 3 * sum_{i<j} dx / rho_{i+1/2}.

    Midpoint quadrature of the mass integral, exact for the piecewise
    constant density representation: r_j^3 - r_{j-1}^3 == 3*dx/rho_{j-1/2}.
    """
    r3 = np.empty(grid.n + 1)
    r3[0] = state.R ** 3
    np.cumsum(3.0 * grid.dx / state.rho, out=r3[1:])
    r3[1:] += r3[0]
    r = np.cbrt(r3)
    r[0] = state.R
    return Geometry(r)


def bump_profile(x, extent, steepness):
    # cos^2 hill: 1 at x=0, smoothly 0 at x=extent, zero beyond
    x = np.asarray(x, dtype=float)
    z = np.minimum(x / extent, 1.0)
    g = np.cos(0.5 * np.pi * z) ** (2.0 * steepness)
    g[x >= extent] = 0.0
    return g


def pulse_profile(x, extent, steepness):
    # sin^2 arch vanishing at both x=0 and x=extent, zero beyond
    x = np.asarray(x, dtype=float)
    h = np.sin(np.pi * np.clip(x / extent, 0.0, 1.0)) ** (2.0 * steepness)
    h[x >= extent] = 0.0
    return h


def make_initial_data(grid: Grid, params: Parameters, spec: InitialDataSpec) -> State:
    """Construct a perturbed state whose basic energy scales like epsilon^2."""
    if spec.support is not None and spec.support > grid.k:
        raise ValueError("perturbation support exceeds the domain extent k")
    state = equilibrium_state(grid)
    if spec.family == "equilibrium" or spec.epsilon == 0.0:
        return state
    if spec.family == "radius-kick":
        state.R = 1.0 + spec.epsilon
        return state
    extent = spec.support if spec.support is not None else grid.k
    if spec.family == "density-bump":
        v = 1.0 + spec.epsilon * bump_profile(grid.cell_centers, extent, spec.shape)
        state.rho = 1.0 / v
        return state
    # velocity-pulse
    state.u = spec.epsilon * pulse_profile(grid.nodes, extent, spec.shape)
    state.u[-1] = 0.0
    return state


def cutoff_ramp(z):
    """Smooth ramp: 1 on [0, 1/2], cosine descent on [1/2, 1], 0 beyond."""
    z = np.asarray(z, dtype=float)
    out = np.where(z >= 1.0, 0.0, 0.5 * (1.0 + np.cos(2.0 * np.pi * (z - 0.5))))
    return np.where(z <= 0.5, 1.0, out)


def cutoff_initial_data(state: State, grid: Grid) -> State:
    """Blend a state back to equilibrium across the outer half of [0, k].

    u is multiplied by the ramp, 1/rho is blended toward 1, R is kept. A
    state given on a larger domain with the same dx is restricted first.
    Data supported in [0, k/2] comes back bitwise unchanged.
    """
    if state.u.shape[0] < grid.n + 1:
        raise ValueError("state lives on a smaller grid than the cutoff target")
    u = state.u[: grid.n + 1] * cutoff_ramp(grid.nodes / grid.k)
    u[-1] = 0.0
    v = 1.0 + (1.0 / state.rho[: grid.n] - 1.0) * cutoff_ramp(grid.cell_centers / grid.k)
    return State(state.t, u, 1.0 / v, state.R)


def rho_at_nodes(rho: np.ndarray) -> np.ndarray:
    """Cell density moved to the nodes: interior means, linear end extrapolation."""
    out = np.empty(rho.shape[0] + 1)
    out[1:-1] = 0.5 * (rho[:-1] + rho[1:])
    out[0] = 1.5 * rho[0] - 0.5 * rho[1]
    out[-1] = 1.5 * rho[-1] - 0.5 * rho[-2]
    return out


def interface_density(state: State) -> float:
    """Density trace at x = 0 by linear extrapolation from the first two cells."""
    return 1.5 * state.rho[0] - 0.5 * state.rho[1]


def eulerian_samples(state: State, grid: Grid) -> np.ndarray:
    """(r, rho, u) triples at the nodes, for output only.

    Column order: radius, density interpolated to the node, velocity. The
    first row sits on the interface (r = R).
    """
    geom = radii(state, grid)
    return np.column_stack([geom.r, rho_at_nodes(state.rho), state.u])


__all__ = [
    "INITIAL_DATA_FAMILIES",
    "Parameters",
    "Grid",
    "State",
    "Geometry",
    "InitialDataSpec",
    "equilibrium_state",
    "radii",
    "make_initial_data",
    "bump_profile",
    "pulse_profile",
    "cutoff_ramp",
    "cutoff_initial_data",
    "rho_at_nodes",
    "interface_density",
    "eulerian_samples",
]
