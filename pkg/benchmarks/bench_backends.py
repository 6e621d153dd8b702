"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_backends.py --sizes 10000,100000,1000000

Prints a CSV table (n, backend, seconds, speedup) of the median wall time of
the full periodic pipeline on uniform data in a triply periodic unit box.
"""

import argparse
import sys

from periodic_dbscan import available_backends
from periodic_dbscan.cli import fit_exponent, run_bench


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="10000,30000,100000,300000,1000000")
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--ndim", type=int, default=3)
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--min-points", type=int, default=5)
    args = ap.parse_args(argv)
    sizes = [int(float(s)) for s in args.sizes.split(",")]

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; timing the fallback only", file=sys.stderr)
    results = {
        b: run_bench(sizes, args.reps, args.ndim, args.eps, args.min_points, backend=b)
        for b in backends
    }
    print("n,backend,seconds,speedup")
    for i, n in enumerate(sizes):
        ref = results["python"][i][1]
        for b in backends:
            sec = results[b][i][1]
            print(f"{n},{b},{sec:.6f},{ref / sec:.2f}")
    if len(sizes) > 1:
        for b in backends:
            exp = fit_exponent(sizes, [r[1] for r in results[b]])
            print(f"# {b}: fitted exponent {exp:.3f}", file=sys.stderr)


if __name__ == "__main__":
    main()
