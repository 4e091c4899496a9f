"""Compare the compiled stepping kernels against the numpy fallback.

Times raw kernel steps and a full reference-style run for each available
backend and prints steps/second plus the speedup. Usage:

    python benchmarks/bench_backends.py [n_cells ...]
"""

import sys
import time

import bubbleflow as bf
from bubbleflow.kernels import available_backends

PARAMS = bf.Parameters(Ca=1.0, We=10.0, mu=0.5, gamma=1.4, gamma0=1.4)


def time_kernel(backend, n, reps):
    grid = bf.Grid(50.0, n)
    state = bf.make_initial_data(grid, PARAMS, bf.InitialDataSpec("radius-kick", epsilon=0.05))
    ws = backend.make_workspace(n)
    u, v, R = state.u, 1.0 / state.rho, state.R
    dt = 1.6 / n
    args = (grid.dx, dt, 0.5, PARAMS.Ca, PARAMS.We, PARAMS.mu, PARAMS.gamma, PARAMS.gamma0)
    backend.step_semi_implicit(ws, u, v, R, *args)  # warm up
    t0 = time.perf_counter()
    for _ in range(reps):
        backend.step_semi_implicit(ws, u, v, R, *args)
    return (time.perf_counter() - t0) / reps


def time_run(backend, n):
    grid = bf.Grid(50.0, n)
    state = bf.make_initial_data(grid, PARAMS, bf.InitialDataSpec("radius-kick", epsilon=0.05))
    cfg = bf.IntegratorConfig(scheme="semi-implicit", cfl=1.0, dt_max=1.6 / n, t_end=10.0)
    t0 = time.perf_counter()
    traj = bf.run(state, grid, PARAMS, cfg, bf.SampleSpec(cadence=0.5), backend=backend)
    wall = time.perf_counter() - t0
    return wall, len(traj.history_t) - 1, traj.records[-1].R


def main(sizes):
    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    for n in sizes:
        print(f"\nn = {n}")
        results = {}
        for name, backend in backends.items():
            reps = 2000 if name == "cython" else 200
            per_step = time_kernel(backend, n, reps)
            wall, steps, r_final = time_run(backend, n)
            results[name] = (per_step, wall, steps)
            print(f"  {name:7s} kernel {per_step * 1e6:8.1f} us/step | "
                  f"run {steps / wall:9.0f} steps/s ({wall:6.2f} s, R_end={r_final:.12f})")
        if len(results) == 2:
            k = results["python"][0] / results["cython"][0]
            r = (results["python"][1] / results["python"][2]) / \
                (results["cython"][1] / results["cython"][2])
            print(f"  speedup: kernel {k:.1f}x, full run {r:.1f}x")


if __name__ == "__main__":
    sizes = [int(a) for a in sys.argv[1:]] or [256, 1024, 4096]
    main(sizes)
