"""Time the numpy and numba kernels, and a full Newton solve, side by side.

    python benchmarks/bench_kernels.py [--sizes 128 256 512] [--repeat 20]
"""

import argparse
import math
import time

import numpy as np

from abelvortex.pde import PointSource, TorusGrid, backend, solve_taubes


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_size(n, repeat, names):
    rng = np.random.default_rng(0)
    grid = TorusGrid(2 * math.pi, 2 * math.pi, n, n)
    v = rng.standard_normal(grid.shape)
    S = rng.standard_normal(grid.shape)
    D = rng.random(grid.shape)
    ih2 = grid.hx ** -2
    rows = []
    for name in names:
        K = backend.kernels(name)
        # warm up (triggers compilation for numba)
        K.residual_taubes(v, S, ih2, ih2, 1.0, 0.1)
        K.helmholtz_apply(v, D, ih2, ih2)
        K.energy_density_cp1(v, 1 / grid.hx, 1 / grid.hy, 1.0, 1.0)
        times = {
            "residual_taubes": best_of(lambda: K.residual_taubes(v, S, ih2, ih2, 1.0, 0.1), repeat),
            "residual_cp1": best_of(lambda: K.residual_cp1(v, S, ih2, ih2, 1.0, 1.0, 0.1), repeat),
            "helmholtz_apply": best_of(lambda: K.helmholtz_apply(v, D, ih2, ih2), repeat),
            "energy_density": best_of(
                lambda: K.energy_density_cp1(v, 1 / grid.hx, 1 / grid.hy, 1.0, 1.0), repeat),
            "solve_taubes": best_of(
                lambda: solve_taubes(grid, 1.0, 1.0, [PointSource((n // 2, n // 2))],
                                     backend_name=name), max(1, repeat // 10)),
        }
        rows.append((name, times))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512])
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args()
    names = ["numpy"] + (["numba"] if backend.numba_available() else [])
    for n in args.sizes:
        rows = bench_size(n, args.repeat, names)
        print(f"\n{n}x{n} grid (best of {args.repeat}, milliseconds)")
        keys = list(rows[0][1])
        print(f"{'kernel':<18}" + "".join(f"{name:>12}" for name, _ in rows)
              + ("     speedup" if len(rows) == 2 else ""))
        for k in keys:
            vals = [t[k] * 1e3 for _, t in rows]
            line = f"{k:<18}" + "".join(f"{x:12.3f}" for x in vals)
            if len(vals) == 2:
                line += f"{vals[0] / vals[1]:11.2f}x"
            print(line)


if __name__ == "__main__":
    main()
