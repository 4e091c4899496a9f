"""Simulator for a gas bubble in an unbounded compressible viscous liquid.

Spherically symmetric flow in Lagrangian mass coordinates on a truncated
domain, with a free bubble interface at x = 0 and a rigid wall at x = k.
Subpackages: model (grid/state/initial data), operators (discrete spatial
dynamics), stepping (time integration), diagnostics (energy, entropy and
decay functionals), oracle (closed-form interface cross-check), harness
(truncation/refinement/stability studies) and cli.
"""

from .kernels import BACKEND_NAME
from .model import (
    Geometry,
    Grid,
    InitialDataSpec,
    Parameters,
    State,
    cutoff_initial_data,
    equilibrium_state,
    eulerian_samples,
    make_initial_data,
    radii,
)
from .stepping import IntegratorConfig, SampleSpec, Trajectory, run

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "Geometry",
    "Grid",
    "InitialDataSpec",
    "Parameters",
    "State",
    "cutoff_initial_data",
    "equilibrium_state",
    "eulerian_samples",
    "make_initial_data",
    "radii",
    "IntegratorConfig",
    "SampleSpec",
    "Trajectory",
    "run",
    "__version__",
]
