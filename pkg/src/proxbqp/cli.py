"""Command-line interface: ``proxbqp solve`` and ``proxbqp bench``.

Exit codes: 0 when every column converged, 2 when some column hit the
iteration limit (its feasible iterate is still written), 1 on error.
"""

import argparse
import sys
import time

import numpy as np

from . import linalg
from .batch import solve_batch_async, solve_batch_sync
from .errors import ProxBQPError
from .formats import SolutionRecord, parse_problem_set, write_solution
from .generate import bench_batch
from .hashapp import HashSubproblemSet, binarize, build_relaxed_batch
from .rho import validate_rho
from .solver import SolverConfig, Status

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


def _rho_arg(text):
    try:
        return validate_rho(text if text.lower() == "auto" else float(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _add_solver_flags(p, tol_default):
    p.add_argument("--tol", type=_positive_float, default=tol_default)
    p.add_argument("--max-iters", type=_positive_int, default=10000)
    p.add_argument("--backend", choices=("cholesky", "cg"), default="cholesky")
    p.add_argument("--mode", choices=("sync", "async"), default="sync")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--stop-metric", choices=("abs", "rel"), default="abs")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="proxbqp",
        description="ADMM solver for proximal bound-constrained quadratic programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem-set file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--rho", type=_rho_arg, default="auto",
                   help="penalty parameter, or 'auto' (default)")
    _add_solver_flags(p, 1e-5)
    p.add_argument("--binarize", action="store_true",
                   help="round solutions to {0, 1} before writing")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="time a random batch sharing one matrix")
    p.add_argument("--n", type=_positive_int, default=60000)
    p.add_argument("--d", type=_positive_int, default=32)
    p.add_argument("--seed", type=int, default=0)
    _add_solver_flags(p, 1e-5)
    p.set_defaults(func=cmd_bench)
    return parser


def _config(args, rho):
    return SolverConfig(rho=rho, tol=args.tol, max_iters=args.max_iters,
                        backend=args.backend, stop_metric=args.stop_metric)


def _run(batch, config, args):
    t0 = time.perf_counter()
    ctx = config.make_context(batch.A)
    factor_time = time.perf_counter() - t0
    if args.mode == "sync":
        result = solve_batch_sync(batch, config, ctx=ctx)
    else:
        result = solve_batch_async(batch, config, workers=args.workers, ctx=ctx)
    wall = time.perf_counter() - t0
    return result, factor_time, wall


def _exit_code(statuses):
    if any(s is Status.FAILED for s in statuses):
        return EXIT_ERROR
    if any(s is Status.MAX_ITERS for s in statuses):
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _fmt(value):
    return f"{value:.6g}" if isinstance(value, float) else str(value)


def _summary(**fields):
    return " ".join(f"{k}={_fmt(v)}" for k, v in fields.items())


def cmd_solve(args):
    problems = parse_problem_set(args.input)
    hashing = isinstance(problems, HashSubproblemSet)
    batch = build_relaxed_batch(problems) if hashing else problems
    result, _, wall = _run(batch, _config(args, args.rho), args)
    Z = result.Z
    if args.binarize:
        done = np.array([s is not Status.FAILED for s in result.statuses])
        Z = Z.copy()
        Z[:, done] = binarize(Z[:, done])
    write_solution(SolutionRecord(
        Z=Z, iterations=result.iterations, statuses=result.statuses,
        rho=result.rho, wall_time=wall, kkt_residuals=result.kkt_residuals,
        binarized=args.binarize), args.output)
    for n, msg in sorted(result.errors.items()):
        print(f"column {n} failed: {msg}", file=sys.stderr)
    print(_summary(
        N=batch.count, D=batch.dim, rho=float(result.rho),
        median_iters=float(np.median(result.iterations)),
        max_kkt=float(np.nanmax(result.kkt_residuals)) if np.isfinite(result.kkt_residuals).any() else float("nan"),
        wall_time=wall,
        converged=sum(s is Status.CONVERGED for s in result.statuses)))
    return _exit_code(result.statuses)


def _histogram(iterations, bins=10):
    lo, hi = int(iterations.min()), int(iterations.max())
    edges = np.unique(np.linspace(lo, hi + 1, min(bins, hi - lo + 1) + 1).astype(int))
    counts, _ = np.histogram(iterations, bins=edges)
    return [(int(a), int(b) - 1, int(c)) for a, b, c in zip(edges[:-1], edges[1:], counts)]


def cmd_bench(args):
    batch = bench_batch(args.n, args.d, args.seed)
    before = linalg.factorization_count()
    result, factor_time, wall = _run(batch, _config(args, "auto"), args)
    factorizations = linalg.factorization_count() - before
    print(_summary(
        N=batch.count, D=batch.dim, seed=args.seed, backend=args.backend,
        mode=args.mode, rho=float(result.rho), factor_time=factor_time,
        wall_time=wall,
        converged=sum(s is Status.CONVERGED for s in result.statuses),
        median_iters=float(np.median(result.iterations)),
        max_kkt=float(np.max(result.kkt_residuals)),
        factorizations=factorizations))
    for lo, hi, count in _histogram(result.iterations):
        print(_summary(iters=f"{lo}-{hi}", count=count))
    return _exit_code(result.statuses)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProxBQPError, OSError, ValueError) as exc:
        print(f"proxbqp: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
