"""Benchmark the compiled modulus scan kernels against the pure-Python twin.

One oscillation-modulus evaluation is exactly four kernel calls (capture
scan, gap scan, min-count and max-count window sweeps); this times that
bundle on simulated spacings paths for both backends and checks that the
results agree bit-for-bit.

    python3 benchmarks/bench_modulus.py [--sizes 10000,100000,1000000]
                                        [--a-scale 100] [--repeats 5]
"""

from __future__ import annotations

import argparse
import sys
import time

from kspacings import _modcore_py, sampling

try:
    from kspacings import _modcore
except ImportError:
    _modcore = None


def kernel_bundle(impl, values, a):
    pos = impl.pos_scan(values, a)
    gap = impl.gap_scan(values, a)
    mn = impl.min_count_width(values, a)
    mx = impl.max_count_width(values, a)
    return pos, gap, mn, mx


def best_time(impl, values, a, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = kernel_bundle(impl, values, a)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="10000,100000,1000000",
                        help="comma-separated path sizes")
    parser.add_argument("--a-scale", type=float, default=100.0,
                        help="bandwidth is a-scale/N at each size")
    parser.add_argument("--repeats", type=int, default=5,
                        help="take the best of this many runs")
    parser.add_argument("--seed", type=int, default=20260814)
    args = parser.parse_args(argv)

    if _modcore is None:
        print("compiled extension not built; only the pure backend is available",
              file=sys.stderr)

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    header = f"{'N':>9}  {'a':>10}  {'compiled':>12}  {'pure':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        sample = sampling.sample_spacings(2, n, args.seed)
        values = sampling.uniformize(sample).w
        a = min(args.a_scale / n, 0.5)
        t_pure, r_pure = best_time(_modcore_py, values, a, args.repeats)
        if _modcore is None:
            print(f"{n:>9}  {a:>10.3g}  {'-':>12}  {t_pure * 1e3:>10.2f}ms  {'-':>8}")
            continue
        t_fast, r_fast = best_time(_modcore, values, a, args.repeats)
        if r_fast != r_pure:
            print(f"backend mismatch at N={n}: {r_fast} vs {r_pure}", file=sys.stderr)
            return 1
        print(
            f"{n:>9}  {a:>10.3g}  {t_fast * 1e3:>10.2f}ms  {t_pure * 1e3:>10.2f}ms"
            f"  {t_pure / t_fast:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
