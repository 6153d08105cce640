"""Time the numba and numpy Heun steps of the axisymmetric flow.

    python benchmarks/bench_kernels.py [--sizes 65 257 1025] [--repeat 200]

Both paths are checked to agree before timing.
"""
import argparse
import time

import numpy as np

from pinchflow._accel import HAVE_NUMBA
from pinchflow.flow import kernels
from pinchflow.flow.axisym import Grid


def best_of(fn, repeat, rounds=5):
    times = []
    for _ in range(rounds):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        times.append((time.perf_counter() - t0) / repeat)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[65, 257, 1025])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--n", type=int, default=7)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; timing numpy only")
    print(f"{'size':>6} {'numpy us':>10} {'numba us':>10} {'speedup':>8} {'max diff':>10}")
    for m in args.sizes:
        g = Grid(m)
        u = 1.0 + 0.05 * np.cos(2 * g.v)
        dt = kernels.stable_dt(u, g.dv, args.n, 0.2)
        step_np = lambda: kernels.heun_step_numpy(u, dt, g.dv, g.cosv, g.sinv, args.n)  # noqa: E731
        t_np = best_of(step_np, args.repeat)
        if HAVE_NUMBA:
            step_nb = lambda: kernels.heun_step_numba(u, dt, g.dv, g.cosv, g.sinv, args.n)  # noqa: E731
            diff = float(np.max(np.abs(step_nb() - step_np())))
            t_nb = best_of(step_nb, args.repeat)
            print(f"{m:>6} {1e6 * t_np:>10.2f} {1e6 * t_nb:>10.2f} {t_np / t_nb:>8.1f} {diff:>10.2e}")
        else:
            print(f"{m:>6} {1e6 * t_np:>10.2f} {'-':>10} {'-':>8} {'-':>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
