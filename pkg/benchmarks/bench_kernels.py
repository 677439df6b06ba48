"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs the Monte-Carlo membership counter and the Verlet loop on
representative workloads with both backends and prints a timing table.

    python3 benchmarks/bench_kernels.py [--samples N] [--steps N] [--repeat K]
"""

import argparse
import time

import numpy as np

from sympb import builtin_cnf
from sympb._accel import HAVE_NUMBA
from sympb.bottleneck import j_max_cnf
from sympb.kernels import (
    count_box_hits_numba,
    count_box_hits_numpy,
    verlet_run_numba,
    verlet_run_numpy,
    warm_up,
)


def best_of(repeat, fn, *args, **kwargs):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args, **kwargs)
        times.append(time.perf_counter() - t0)
    return min(times)


def mc_workload(samples):
    model = builtin_cnf(3)
    e = 0.5
    box = [j_max_cnf(model, e, k) for k in (2, 3)]
    rng = np.random.default_rng(0)
    j_samples = rng.uniform(0.0, 1.0, size=(samples, 2)) * box
    # the volume counter evaluates the I-independent part of the normal form
    ds_terms = [t for t in model.terms if t[0] == 0]
    j_pows = np.array([t[1] for t in ds_terms], dtype=np.int64)
    coeffs = np.array([t[2] for t in ds_terms])
    return j_samples, j_pows, coeffs, e


def verlet_workload(steps):
    q0 = [-2.0, 0.3, -0.1]
    p0 = [0.9, -0.2, 0.1]
    args = dict(h=1e-3, nsteps=steps, stride=100, m=1.0, eps=0.3,
                big_a=-0.5, big_b=2.0, a=1.0, x0=-0.5108256237659907,
                de=1.0, am=1.0)
    return q0, p0, args


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1_000_000,
                    help="Monte-Carlo samples (default 1e6)")
    ap.add_argument("--steps", type=int, default=200_000,
                    help="Verlet steps (default 2e5)")
    ap.add_argument("--repeat", type=int, default=3,
                    help="repeats per measurement, best kept (default 3)")
    opts = ap.parse_args()

    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is timed")
    else:
        warm_up()

    rows = []

    j_samples, j_pows, coeffs, e = mc_workload(opts.samples)
    t_np = best_of(opts.repeat, count_box_hits_numpy, j_samples, j_pows, coeffs, e)
    rows.append(("count_box_hits", f"{opts.samples:.0e} samples", t_np,
                 best_of(opts.repeat, count_box_hits_numba, j_samples, j_pows, coeffs, e)
                 if HAVE_NUMBA else None))

    q0, p0, args = verlet_workload(opts.steps)
    t_np = best_of(opts.repeat, verlet_run_numpy, q0, p0, **args)
    rows.append(("verlet_run", f"{opts.steps:.0e} steps", t_np,
                 best_of(opts.repeat, verlet_run_numba, q0, p0, **args)
                 if HAVE_NUMBA else None))

    header = f"{'kernel':<16} {'workload':<14} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, load, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{name:<16} {load:<14} {t_np:>10.4f} {'n/a':>10} {'n/a':>8}")
        else:
            print(f"{name:<16} {load:<14} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
