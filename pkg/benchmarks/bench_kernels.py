"""Compare the compiled and numpy reconstruction kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints the best wall time per call for each kernel, the speed-up, and the
largest difference between the two backends' results, then times two full
runs with each backend.
"""
import argparse
import timeit

import numpy as np

from actiflux import _core, _kernels_py
from actiflux.harness import Scenario, run_scenario

try:
    from actiflux import _kernels as _compiled
except ImportError:
    _compiled = None


def cases(rng):
    # 1D: three variables, 4000 cells, the seven foot-point offsets of a step
    avg = rng.normal(size=(3, 4004))
    pts = rng.normal(size=(3, 4005))
    offsets = np.array([-0.9, -0.45, 0.0, 0.45, 0.9, -0.2, 0.2])
    yield "eval_interfaces_1d", "eval_interfaces_1d", (avg, pts, offsets, 2)
    # 2D: 400 x 400 cells, node block
    n = 400
    A = rng.normal(size=(n + 4, n + 4))
    N = rng.normal(size=(n + 5, n + 5))
    Ev = rng.normal(size=(n + 5, n + 4))
    Eh = rng.normal(size=(n + 4, n + 5))
    yield "recon2d_block", "recon2d_block", (A, N, Ev, Eh, 1, 1, n + 1, n + 1, 0.3, 0.28)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _compiled is None:
        print("compiled kernels not built; only the numpy backend is available")
    rng = np.random.default_rng(1)
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'compiled [ms]':>15}{'speed-up':>10}{'max diff':>11}")
    for label, name, call_args in cases(rng):
        py = getattr(_kernels_py, name)
        t_py = min(timeit.repeat(lambda: py(*call_args), number=3, repeat=args.repeat)) / 3
        if _compiled is None:
            print(f"{label:<22}{1e3 * t_py:12.3f}{'-':>15}{'-':>10}{'-':>11}")
            continue
        cy = getattr(_compiled, name)
        t_cy = min(timeit.repeat(lambda: cy(*call_args), number=3, repeat=args.repeat)) / 3
        diff = np.max(np.abs(py(*call_args) - cy(*call_args)))
        print(f"{label:<22}{1e3 * t_py:12.3f}{1e3 * t_cy:15.3f}{t_py / t_cy:10.2f}{diff:11.1e}")

    runs = {
        "1D acoustics, 1100 cells": Scenario(
            equation="acoustics", g=-1.0, x_min=-5.5, x_max=5.5, n_cells=1100, t_end=1.0,
            boundary="static", initial="isentropic", well_balanced=True),
        "2D advection, 200^2": Scenario(
            equation="advection2d", u=1.0, u_y=0.1, source="linear", kappa=7.0,
            n_cells=200, t_end=0.05, evolution="exact", init_params={"center": 0.4}),
    }
    backends = [("numpy", _kernels_py)] + ([("compiled", _compiled)] if _compiled else [])
    print()
    for label, sc in runs.items():
        times = []
        for _, mod in backends:
            _core.eval_interfaces_1d = mod.eval_interfaces_1d
            _core.recon2d_block = mod.recon2d_block
            times.append(min(run_scenario(sc).seconds for _ in range(args.repeat)))
        print(f"{label:<26}" + "".join(f"{name} {t:7.3f} s   "
                                        for (name, _), t in zip(backends, times)))


if __name__ == "__main__":
    main()
