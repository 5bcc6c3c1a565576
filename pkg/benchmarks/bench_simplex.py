"""Benchmark: compiled simplex pivot kernel vs the pure-Python twin.

The workload is the real hot path: sum-event diversity LPs swept over the
rate budget, exactly as the DMT curve generator issues them.  Run with

    python benchmarks/bench_simplex.py [--points N]
"""

import argparse
import time

from fdsc import _backend
from fdsc.dmt import build_sum_diversity_lp
from fdsc.lp import solve
from fdsc.model import AntennaConfig, LinkLevels, NetworkSpec


CASES = [
    ("(2,1,1,2)  w=0.2", NetworkSpec(AntennaConfig(2, 1, 1, 2), LinkLevels(), 0.2), True),
    ("(3,2,2,3)  w=0.5", NetworkSpec(AntennaConfig(3, 2, 2, 3), LinkLevels(), 0.5), True),
    ("(4,2,3,4)  w=1.0", NetworkSpec(AntennaConfig(4, 2, 3, 4), LinkLevels(), 1.0), True),
    ("(4,3,3,4)  no-csit", NetworkSpec(AntennaConfig(4, 3, 3, 4), LinkLevels(), 1.0), False),
]


def sweep(spec, csit, points, pivot_fn):
    from fdsc.dmt import sum_multiplexing_cap

    lp, _ = build_sum_diversity_lp(spec, 0.0, csit)
    cap = sum_multiplexing_cap(spec, csit)
    total_iters = 0
    for i in range(points):
        coeffs, sense, _ = lp.rows[-1]
        lp.rows[-1] = (coeffs, sense, cap * i / (points - 1))
        sol = solve(lp, pivot_fn=pivot_fn)
        assert sol.status == "optimal"
        total_iters += sol.niter
    return total_iters


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=200, help="budget sweep length per case")
    args = ap.parse_args()

    backends = _backend.available_backends()
    print(f"selected backend at import: {_backend.BACKEND}")
    print(f"{'case':<22} {'points':>6}  " + "  ".join(f"{n:>12}" for n in backends))
    speedups = []
    for label, spec, csit in CASES:
        times = {}
        for name, fn in backends.items():
            t0 = time.perf_counter()
            sweep(spec, csit, args.points, fn)
            times[name] = time.perf_counter() - t0
        row = "  ".join(f"{times[n]:>10.3f}s" for n in backends)
        print(f"{label:<22} {args.points:>6}  {row}")
        if "compiled" in times and "python" in times:
            speedups.append(times["python"] / times["compiled"])
    if speedups:
        print(f"\ncompiled kernel speedup: {min(speedups):.1f}x - {max(speedups):.1f}x "
              f"(geometric mean {(__import__('math').prod(speedups)) ** (1 / len(speedups)):.1f}x)")


if __name__ == "__main__":
    main()
