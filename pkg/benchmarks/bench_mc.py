#!/usr/bin/env python3
"""Time the numba and numpy Monte Carlo backends on the nu = 1/2 oracle case.

Both backends consume the same per-stream generators but draw in a different
order, so their estimates differ at the level of the standard error; each is
checked against the closed form instead of against the other.

    python3 benchmarks/bench_mc.py [--paths 20000 50000] [--step 0.01]
"""
import argparse
import time

from besselhit import BesselParams, McConfig, closed_form_tail, tail_mc_indicator, tail_mc_lemma22
from besselhit._accel import HAVE_NUMBA

PARAMS = BesselParams(0.5, 2.0, 1.0)
T = 10.0


def timed(fn, cfg, backend):
    t0 = time.perf_counter()
    est = fn(PARAMS, T, cfg, backend=backend)
    return time.perf_counter() - t0, est


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, nargs="+", default=[20_000, 50_000])
    ap.add_argument("--step", type=float, default=0.01)
    args = ap.parse_args()

    exact = closed_form_tail(PARAMS, T).value
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    if HAVE_NUMBA:
        # first call compiles the kernel (or loads it from cache); don't count it
        t0 = time.perf_counter()
        tail_mc_lemma22(PARAMS, T, McConfig(paths=64, step=args.step), backend="numba")
        print(f"numba warmup: {time.perf_counter() - t0:.1f}s\n")
    else:
        print("numba unavailable: timing the numpy backend only\n")

    print(f"exact tail {exact:.8f}, step {args.step}")
    print(f"{'estimator':>10} {'paths':>8} {'backend':>8} {'time (s)':>9} {'mean':>10} {'z':>6}")
    print("-" * 58)
    for name, fn in (("lemma22", tail_mc_lemma22), ("indicator", tail_mc_indicator)):
        for n in args.paths:
            cfg = McConfig(paths=n, step=args.step)
            times = {}
            for backend in backends:
                dt, est = timed(fn, cfg, backend)
                times[backend] = dt
                z = (est.mean - exact) / est.std_error
                print(f"{name:>10} {n:>8} {backend:>8} {dt:>9.2f} {est.mean:>10.6f} {z:>6.2f}")
            if len(times) == 2:
                print(f"{'':>10} {'':>8} {'speedup':>8} {times['numpy'] / times['numba']:>8.1f}x")


if __name__ == "__main__":
    main()
