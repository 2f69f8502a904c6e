"""Time the compiled and pure-Python census kernels on the same workloads.

    python3 benchmarks/bench_census.py [--repeat 3] [--quick]
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from algcensus.kernels import available_backends, run_census

INF = float("inf")

WORKLOADS = {
    "n=1 Q=400 (-inf,inf]": (1, 400, [-INF, INF]),
    "n=2 Q=30 8 bins on (-2,2]": (2, 30, [Fraction(-2) + Fraction(i, 2) for i in range(9)]),
    "n=3 Q=10 (0,1]": (3, 10, [Fraction(0), Fraction(1)]),
    "n=4 Q=3 (-inf,inf]": (4, 3, [-INF, INF]),
}
QUICK = {"n=2 Q=12 (0,1]": (2, 12, [Fraction(0), Fraction(1)])}


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="single small workload")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python backend is timed")
    print(f"{'workload':32s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, (n, Q, edges) in (QUICK if args.quick else WORKLOADS).items():
        times, results = {}, {}
        for b in backends:
            results[b] = run_census(n, Q, edges, threads=1, backend=b).bins
            times[b] = best_of(lambda: run_census(n, Q, edges, threads=1, backend=b), args.repeat)
        assert len({tuple(r) for r in results.values()}) == 1, f"backends disagree on {name}"
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{name:32s} " + " ".join(f"{times[b]:10.4f}" for b in backends) + f"   {speed:7.1f}x")


if __name__ == "__main__":
    main()
