import os
import subprocess
import sys

import numpy as np
import pytest

import bubbleflow as bf
from bubbleflow import diagnostics as dg
from bubbleflow import stepping
from bubbleflow.kernels import available_backends, pybackend
from bubbleflow.model import radii

PARAMS = bf.Parameters(Ca=1.0, We=10.0, mu=0.5, gamma=1.4, gamma0=1.4)

BACKENDS = available_backends()
needs_compiled = pytest.mark.skipif("cython" not in BACKENDS,
                                    reason="compiled kernels not built")


def rough_state(grid, seed=11):
    rng = np.random.default_rng(seed)
    state = bf.equilibrium_state(grid)
    state.u = 0.03 * rng.standard_normal(grid.n + 1)
    state.u[-1] = 0.0
    state.rho = 1.0 + 0.08 * rng.standard_normal(grid.n).clip(-0.5, 0.5)
    state.R = 1.02
    return state


@needs_compiled
class TestBackendParity:
    @pytest.mark.parametrize("scheme,theta", [
        ("explicit-rk2", 0.5), ("semi-implicit", 0.5), ("semi-implicit", 1.0),
    ])
    def test_single_step(self, scheme, theta):
        grid = bf.Grid(12.0, 192)
        state = rough_state(grid)
        out = {name: stepping._single_step(state, grid, 2e-4, PARAMS, scheme, theta,
                                           backend=bk)
               for name, bk in BACKENDS.items()}
        a, b = out["python"], out["cython"]
        assert np.allclose(a.u, b.u, rtol=1e-12, atol=1e-15)
        assert np.allclose(a.rho, b.rho, rtol=1e-12, atol=1e-15)
        assert a.R == pytest.approx(b.R, rel=1e-13)

    def test_short_run(self):
        grid = bf.Grid(12.0, 96)
        state = bf.make_initial_data(grid, PARAMS, bf.InitialDataSpec("radius-kick", epsilon=0.05))
        cfg = bf.IntegratorConfig(scheme="semi-implicit", cfl=0.8, t_end=1.0)
        runs = {name: bf.run(state, grid, PARAMS, cfg, bf.SampleSpec(cadence=0.25), backend=bk)
                for name, bk in BACKENDS.items()}
        Ra = runs["python"].column("R")
        Rb = runs["cython"].column("R")
        assert np.allclose(Ra, Rb, rtol=1e-9, atol=1e-12)
        Ea = runs["python"].column("E0")
        Eb = runs["cython"].column("E0")
        assert np.allclose(Ea, Eb, rtol=1e-8, atol=1e-15)

    def test_stable_dt(self):
        grid = bf.Grid(12.0, 192)
        state = rough_state(grid)
        v = 1.0 / state.rho
        args = (state.u, v, state.R, grid.dx, 0.7, 1e9,
                PARAMS.Ca, PARAMS.We, PARAMS.mu, PARAMS.gamma, PARAMS.gamma0)
        for explicit in (False, True):
            a = BACKENDS["python"].stable_dt(*args, explicit)
            b = BACKENDS["cython"].stable_dt(*args, explicit)
            assert a == pytest.approx(b, rel=1e-12)

    def test_dissipation(self):
        grid = bf.Grid(12.0, 192)
        state = rough_state(grid)
        v = 1.0 / state.rho
        a = BACKENDS["python"].dissipation_cellwise(state.u, v, state.R, grid.dx, PARAMS.mu)
        b = BACKENDS["cython"].dissipation_cellwise(state.u, v, state.R, grid.dx, PARAMS.mu)
        assert a == pytest.approx(b, rel=1e-12)


class TestKernelContracts:
    def test_dissipation_matches_diagnostics(self):
        grid = bf.Grid(12.0, 192)
        state = rough_state(grid)
        _, d_cell = dg.dissipation(state, radii(state, grid), grid, PARAMS)
        v = 1.0 / state.rho
        for bk in BACKENDS.values():
            assert bk.dissipation_cellwise(state.u, v, state.R, grid.dx, PARAMS.mu) == \
                pytest.approx(d_cell, rel=1e-12)

    def test_step_reports_failure_instead_of_negative_density(self):
        grid = bf.Grid(12.0, 64)
        state = rough_state(grid)
        v = 1.0 / state.rho
        for bk in BACKENDS.values():
            ws = bk.make_workspace(grid.n)
            ok, _, _ = bk.step_rk2(ws, state.u, v, state.R, grid.dx, 1e3,
                                   PARAMS.Ca, PARAMS.We, PARAMS.mu,
                                   PARAMS.gamma, PARAMS.gamma0)
            assert not ok

    def test_inputs_left_untouched_on_failure(self):
        grid = bf.Grid(12.0, 64)
        state = rough_state(grid)
        v = 1.0 / state.rho
        u_before, v_before = state.u.copy(), v.copy()
        ws = pybackend.make_workspace(grid.n)
        ok, R_out, _ = pybackend.step_semi_implicit(ws, state.u, v, state.R, grid.dx,
                                                    1e3, 0.5, PARAMS.Ca, PARAMS.We,
                                                    PARAMS.mu, PARAMS.gamma, PARAMS.gamma0)
        assert np.array_equal(state.u, u_before)
        assert np.array_equal(v, v_before)
        if not ok:
            assert R_out == state.R


class TestBackendSelection:
    def test_env_var_forces_fallback(self):
        code = ("import bubbleflow\n"
                "print(bubbleflow.BACKEND_NAME)\n")
        env = dict(os.environ, BUBBLEFLOW_PURE_PYTHON="1")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"

    def test_default_prefers_compiled_when_available(self):
        if "cython" in BACKENDS and not os.environ.get("BUBBLEFLOW_PURE_PYTHON"):
            assert bf.BACKEND_NAME == "cython"
