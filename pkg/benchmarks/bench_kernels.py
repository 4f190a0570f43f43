"""Benchmark the numba event kernels against the pure-numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--repeats 20]

Workloads mirror the Monte Carlo trial predicates over (M, n) samples,
in both regimes that matter:

  * success path - the event holds, every pair must be checked; the
    numpy path leans on BLAS Gram products here.
  * failure path - the event fails early; the numba loops exit on the
    first violation while numpy still materializes the full product.

The numba path is warmed once before timing so JIT compilation is not
counted. Select the backend used by the library itself with the
SEPKIT_NUMBA environment variable.
"""

import argparse
import time

import numpy as np

from sepkit import _kernels_nb, _kernels_np
from sepkit.rng import generator
from sepkit.sampling import _draw, sphere


def _time(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _shell_points(m, n, radius):
    """Points of exact norm `radius`: tiny pairwise dots, so all-pairs
    events at r < radius succeed and every pair gets checked."""
    return _draw(sphere(n), m, generator(0)) * radius


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    rng = generator(1)
    shell_big = _shell_points(5000, 200, 0.97)
    shell_mid = _shell_points(1000, 100, 0.95)
    sphere_hi = _draw(sphere(2000), 64, rng)
    sphere_lo = _draw(sphere(3), 64, rng)  # low dimension: violations abound
    cube_ok = rng.random((50, 5000)) - 0.5
    low_ball = _draw(sphere(2), 1000, rng) * 0.95  # n=2: event fails fast
    r0 = float(np.sqrt(5000 / 12.0))

    cases = [
        ("ball_single  ok (M=5000,n=200)", "ball_single_event", (shell_big, 0.95)),
        ("ball_all     ok (M=1000,n=100)", "ball_all_event", (shell_mid, 0.9)),
        ("ball_all   fail (M=1000,n=2)", "ball_all_event", (low_ball, 0.9)),
        ("ball_angle   ok (M=1000,n=100)", "ball_angle_event", (shell_mid, 0.9)),
        ("pairwise     ok (N=64,n=2000)", "pairwise_eps_orthogonal", (sphere_hi, 0.15)),
        ("pairwise   fail (N=64,n=3)", "pairwise_eps_orthogonal", (sphere_lo, 0.15)),
        ("count_viol      (N=64,n=2000)", "count_eps_violations", (sphere_hi, 0.15)),
        ("cube_single  ok (M=50,n=5000)", "cube_single_event", (cube_ok, r0, 0.5)),
        ("cube_all     ok (M=50,n=5000)", "cube_all_event", (cube_ok, r0, 0.5)),
    ]

    print(f"{'kernel / regime':<34} {'numpy':>10} {'numba':>10} {'numba speedup':>14}")
    for label, name, call_args in cases:
        np_fn = getattr(_kernels_np, name)
        nb_fn = getattr(_kernels_nb, name)
        if np_fn(*call_args) != nb_fn(*call_args):
            raise AssertionError(f"backend disagreement in {name}")
        t_np = _time(np_fn, call_args, args.repeats)
        t_nb = _time(nb_fn, call_args, args.repeats)
        print(
            f"{label:<34} {t_np * 1e3:>8.3f}ms {t_nb * 1e3:>8.3f}ms "
            f"{t_np / t_nb:>13.1f}x"
        )


if __name__ == "__main__":
    main()
