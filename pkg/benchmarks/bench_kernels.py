"""Benchmark the compiled moment kernel against the pure-numpy fallback.

Run:  python3 benchmarks/bench_kernels.py [--quick]

The kernel level compares both backends in-process; the end-to-end BEP
point re-runs this script's workload in a subprocess with
NOISEMOD_NO_NUMBA=1 so the fallback is measured exactly as a user would
get it.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from noisemod import ChannelConfig, DEFAULT_SCHEME, NoiseSource, Scheme, run_point
from noisemod import _kernels


def time_kernel(fn, n_sym, n, sigma_w, repeats):
    sigmas = np.full(n_sym, 1e-4)
    best = float("inf")
    for rep in range(repeats):
        gen = NoiseSource(1234, rep).generator
        t0 = time.perf_counter()
        fn(gen, sigmas, n, sigma_w)
        best = min(best, time.perf_counter() - t0)
    draws = n_sym * n * (2 if sigma_w > 0.0 else 1)
    return draws / best / 1e6


def bench_kernels(repeats):
    print(f"active backend: {_kernels.BACKEND}")
    print(f"{'workload':<28}{'numpy M/s':>12}{'numba M/s':>12}{'speedup':>10}")
    cases = [
        ("64k sym x 100, sigma_w=0", 64_000, 100, 0.0),
        ("64k sym x 100, sigma_w>0", 64_000, 100, 2e-5),
        ("400 sym x 10k, sigma_w=0", 400, 10_000, 0.0),
    ]
    for label, n_sym, n, sigma_w in cases:
        np_rate = time_kernel(_kernels.moments_numpy, n_sym, n, sigma_w, repeats)
        if _kernels.moments_numba is None:
            print(f"{label:<28}{np_rate:>12.0f}{'n/a':>12}{'n/a':>10}")
            continue
        nb_rate = time_kernel(_kernels.moments_numba, n_sym, n, sigma_w, repeats)
        print(f"{label:<28}{np_rate:>12.0f}{nb_rate:>12.0f}{nb_rate / np_rate:>9.1f}x")


def bench_end_to_end(min_bits):
    # warm compile before timing
    run_point(Scheme.CGQNM, DEFAULT_SCHEME, ChannelConfig(2e-5), 100, 1000, NoiseSource(0))
    t0 = time.perf_counter()
    est = run_point(
        Scheme.CGQNM, DEFAULT_SCHEME, ChannelConfig(2e-5), 400, min_bits, NoiseSource(77)
    )
    wall = time.perf_counter() - t0
    print(
        f"end-to-end ({_kernels.BACKEND}): {min_bits} bits at N=400 in {wall:.2f}s "
        f"(bep={est.bep:.4f})"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--no-subprocess", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    repeats = 2 if args.quick else 4
    min_bits = 20_000 if args.quick else 200_000

    bench_kernels(repeats)
    bench_end_to_end(min_bits)
    if not args.no_subprocess and "NOISEMOD_NO_NUMBA" not in os.environ:
        sys.stdout.flush()
        env = dict(os.environ, NOISEMOD_NO_NUMBA="1")
        cmd = [sys.executable, __file__, "--no-subprocess"]
        if args.quick:
            cmd.append("--quick")
        subprocess.run(cmd, env=env, check=True)


if __name__ == "__main__":
    main()
