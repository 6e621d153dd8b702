"""Command-line interface.

Exit status: 0 on success, 1 when ``verify`` finds a mismatch, 2 on usage
or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
import warnings

import numpy as np

from . import __version__
from ._backend import BACKENDS
from .datagen import PRESETS, BlobSpec, Preset, generate_uniform, get_preset, random_instance
from .dbscan import DbscanParams
from .exceptions import PeriodicDBSCANError
from .geometry import BoundarySpec, DomainSpec
from .oracle import compare_clusterings, dbscan_bruteforce
from .pbc import cluster_periodic

SUMMARY_TAG = "periodic-dbscan-summary/1"
VERIFY_WARN_N = 5000

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def read_points(path) -> np.ndarray:
    """Headerless comma-separated floats, one point per row; blank lines are
    skipped."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            values = []
            for col, field in enumerate(row, start=1):
                try:
                    values.append(float(field))
                except ValueError:
                    raise UsageError(
                        f"{path}: row {lineno}, column {col}: cannot parse {field!r} as a number"
                    ) from None
                if not np.isfinite(values[-1]):
                    raise UsageError(f"{path}: row {lineno}, column {col}: non-finite value")
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise UsageError(
                    f"{path}: row {lineno} has {len(values)} columns, expected {width}"
                )
            rows.append(values)
    if not rows:
        return np.zeros((0, 0))
    return np.array(rows, dtype=np.float64)


def write_points(path, X: np.ndarray) -> None:
    with _open_out(path) as fh:
        for row in X:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_labels(path, labels) -> None:
    with _open_out(path) as fh:
        fh.writelines(f"{int(v)}\n" for v in labels)


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()


def _open_out(path):
    return _Stdout() if path in (None, "-") else open(path, "w", newline="")


def _add_boundary_args(p):
    g = p.add_argument_group("boundaries (use exactly one form)")
    g.add_argument("--dim", action="append", metavar="SPEC",
                   help="per-dimension boundary, repeated once per dimension in order: "
                        "'open' or 'periodic:LO:HI'")
    g.add_argument("--boundary", metavar="SPEC", help="one boundary spec applied to every dimension")
    g.add_argument("--all-periodic", metavar="LO:HI", help="shorthand for --boundary periodic:LO:HI")


def _add_cluster_args(p):
    p.add_argument("--eps", type=float, required=True, help="neighborhood radius")
    p.add_argument("--min-points", type=int, default=5,
                   help="neighborhood size (point itself included) that makes a core point")
    p.add_argument("--backend", choices=BACKENDS, default="auto")
    _add_boundary_args(p)


def domain_from_args(args, ndim: int) -> DomainSpec:
    forms = [f for f in ("dim", "boundary", "all_periodic") if getattr(args, f)]
    if len(forms) != 1:
        raise UsageError("give boundaries with exactly one of --dim, --boundary, --all-periodic")
    if args.dim:
        dims = [BoundarySpec.parse(s) for s in args.dim]
        if ndim and len(dims) != ndim:
            raise UsageError(f"{len(dims)} --dim flags given but the data have {ndim} columns")
        return DomainSpec(dims)
    spec = args.boundary if args.boundary else f"periodic:{args.all_periodic}"
    return DomainSpec([BoundarySpec.parse(spec)] * max(ndim, 1))


def _summary(**fields) -> str:
    return SUMMARY_TAG + " " + " ".join(f"{k}={v}" for k, v in fields.items())


def cmd_cluster(args) -> int:
    X = read_points(args.input)
    n, ndim = X.shape
    domain = domain_from_args(args, ndim)
    params = DbscanParams(args.eps, args.min_points)
    t0 = time.perf_counter()
    if n == 0:
        labels, n_clusters, n_noise, n_padded = np.zeros(0, dtype=np.int64), 0, 0, 0
    else:
        result = cluster_periodic(X, domain, params, backend=args.backend)
        labels = result.labels
        n_clusters, n_noise, n_padded = result.n_clusters, result.n_noise, result.n_padded
    seconds = time.perf_counter() - t0
    write_labels(args.output, labels)
    print(_summary(n=n, dims=ndim, clusters=n_clusters, noise=n_noise,
                   padded=n_padded, seconds=f"{seconds:.6f}"))
    return EXIT_OK


def _load_blob_file(path):
    with open(path) as fh:
        cfg = json.load(fh)
    try:
        domain = DomainSpec([BoundarySpec.parse(s) for s in cfg["domain"]])
        blobs = tuple(BlobSpec(b["center"], b["sigma"], b["count"]) for b in cfg["blobs"])
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: malformed blob spec ({exc})") from None
    return Preset(
        name=str(cfg.get("name", path)),
        description="user blob spec",
        domain=domain,
        epsilon=float(cfg.get("eps", 0.05)),
        blobs=blobs,
        n_background=int(cfg.get("background", 0)),
        min_points=int(cfg.get("min_points", 5)),
    )


def cmd_generate(args) -> int:
    if args.list:
        for name in sorted(PRESETS):
            p = PRESETS[name]
            print(f"{name}: {p.description} (n={sum(b.count for b in p.blobs) + p.n_background})")
        return EXIT_OK
    if bool(args.preset) == bool(args.blobs):
        raise UsageError("give either a preset name or --blobs FILE")
    preset = get_preset(args.preset) if args.preset else _load_blob_file(args.blobs)
    X = preset.generate(args.seed)
    write_points(args.output, X)
    info = (f"preset={preset.name} n={len(X)} eps={preset.epsilon:g} "
            f"min_points={preset.min_points} boundary='{' '.join(preset.boundary_args())}'")
    print(info, file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return EXIT_OK


def verify_instance(X, domain, params, oracle_params=None, backend=None):
    fast = cluster_periodic(X, domain, params, backend=backend).labels
    slow = dbscan_bruteforce(X, domain, oracle_params or params)
    return compare_clusterings(fast, slow, X, domain, params)


def cmd_verify(args) -> int:
    if args.random:
        rng = np.random.default_rng(args.seed)
        failures = 0
        for i in range(args.random):
            X, domain, params = random_instance(rng)
            cmp = verify_instance(X, domain, params, backend=args.backend)
            if not cmp.equivalent:
                failures += 1
                print(f"instance {i}: MISMATCH n={len(X)} domain=[{domain}] "
                      f"eps={params.epsilon:g} min_points={params.min_points}")
        print(f"random instances: {args.random} equivalent: {args.random - failures} "
              f"mismatched: {failures}")
        return EXIT_OK if failures == 0 else EXIT_MISMATCH
    if not args.input or args.eps is None:
        raise UsageError("verify needs INPUT and --eps (or --random N)")
    X = read_points(args.input)
    n, ndim = X.shape
    domain = domain_from_args(args, ndim)
    params = DbscanParams(args.eps, args.min_points)
    oracle_params = DbscanParams(args.oracle_eps, args.min_points) if args.oracle_eps else None
    if n > VERIFY_WARN_N:
        warnings.warn(f"verify runs an O(N^2) oracle on {n} points; this may be slow")
    if n == 0:
        print("equivalent: True (empty input)")
        return EXIT_OK
    cmp = verify_instance(X, domain, params, oracle_params, backend=args.backend)
    print(cmp.report())
    return EXIT_OK if cmp.equivalent else EXIT_MISMATCH


def fit_exponent(sizes, seconds) -> float:
    slope, _ = np.polyfit(np.log(sizes), np.log(seconds), 1)
    return float(slope)


def run_bench(sizes, reps=3, ndim=3, epsilon=0.01, min_points=5, seed=0, backend=None):
    """Median wall time of the periodic pipeline on uniform data in a
    periodic unit box; returns rows of ``(n, seconds, padded_fraction)``."""
    domain = DomainSpec.all_periodic(ndim)
    params = DbscanParams(epsilon, min_points)
    rows = []
    for n in sizes:
        X = generate_uniform(n, domain, seed)
        times = []
        for _ in range(reps):
            t0 = time.perf_counter()
            result = cluster_periodic(X, domain, params, backend=backend)
            times.append(time.perf_counter() - t0)
        rows.append((int(n), float(np.median(times)), result.n_padded / max(n, 1)))
    return rows


def cmd_bench(args) -> int:
    try:
        sizes = [int(float(s)) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    if not sizes or sizes != sorted(sizes) or sizes[0] < 1:
        raise UsageError("--sizes must be a non-empty ascending list of positive integers")
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    rows = run_bench(sizes, args.reps, args.ndim, args.eps, args.min_points, args.seed, args.backend)
    with _open_out(args.output) as fh:
        fh.write("n,seconds,padded_fraction\n")
        for n, sec, frac in rows:
            fh.write(f"{n},{sec:.6f},{frac:.6f}\n")
    if len(rows) > 1:
        print(f"fitted_exponent={fit_exponent([r[0] for r in rows], [r[1] for r in rows]):.4f}",
              file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="periodic-dbscan",
                                     description="DBSCAN with open and periodic boundaries")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a CSV point cloud")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="-", help="label file (default: stdout)")
    _add_cluster_args(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("generate", help="write a synthetic dataset")
    p.add_argument("preset", nargs="?", help="preset name, see --list")
    p.add_argument("--blobs", metavar="JSON", help="blob spec file instead of a preset")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--list", action="store_true", help="list presets and exit")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="compare against the brute-force oracle")
    p.add_argument("input", nargs="?")
    p.add_argument("--eps", type=float)
    p.add_argument("--min-points", type=int, default=5)
    p.add_argument("--backend", choices=BACKENDS, default="auto")
    p.add_argument("--oracle-eps", type=float, help="run the oracle with a different radius")
    p.add_argument("--random", type=int, default=0, metavar="N",
                   help="check N random instances instead of a file")
    p.add_argument("--seed", type=int, default=0)
    _add_boundary_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the periodic pipeline on uniform data")
    p.add_argument("--sizes", default="10000,30000,100000,300000,1000000")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--ndim", type=int, default=3)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--min-points", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=BACKENDS, default="auto")
    p.add_argument("-o", "--output", default="-", help="CSV table (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PeriodicDBSCANError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
