"""Time the hot kernels under the numba and numpy backends.

Usage: ``python benchmarks/bench_kernels.py [--n 200000] [--repeat 3]``.
Compile time is excluded; each timing is the best of ``--repeat`` runs.
"""

import argparse
import time

import numpy as np

from schwarz_signal import _accel, catalog


def best_of(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return min(out)


def cases(n):
    traj = catalog.preset("fig8_ns_ellipse").build()
    p = traj.path()
    grid = np.linspace(0.0, n * 4e-6, n)
    phi = np.linspace(0.0, 200.0, n)
    rng = np.random.default_rng(0)
    sig = np.exp(2j * np.pi * 0.2 * np.arange(n))
    pos = np.sort(rng.uniform(0, n - 1, n))
    return {
        "rk4_time_map": lambda b: _accel.rk4_time_map(p.rate, p.params, 0.0, grid, 2, backend=b),
        "map_point": lambda b: _accel.map_point(p.point, p.point_params, phi, backend=b),
        "sinc_resample": lambda b: _accel.sinc_resample(sig, pos, backend=b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="grid / signal length")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':16s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, fn in cases(args.n).items():
        times = []
        for b in backends:
            fn(b)  # warm up / compile
            times.append(best_of(lambda: fn(b), args.repeat))
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{name:16s}" + "".join(f"{t:11.4f}s" for t in times) + speed)


if __name__ == "__main__":
    main()
