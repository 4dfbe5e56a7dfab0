"""Many problems sharing one matrix ``A`` and one cached factorization.

Synchronous mode advances every column in lockstep with one blocked
triangular solve per iteration and a single global stop test.  Asynchronous
mode runs :func:`proxbqp.solver.solve` on each column separately, so every
column stops on its own, and spreads the columns over a worker pool that
shares the read-only context.
"""

import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .context import SharedContext, make_shared_context
from .errors import ProxBQPError
from .problem import BatchProblem
from .solver import SolverConfig, Status, median3, run_block, solve
from .verify import kkt_columns

__all__ = [
    "BatchProblem",
    "BatchResult",
    "SharedContext",
    "make_shared_context",
    "solve_batch_async",
    "solve_batch_sync",
]


@dataclass
class BatchResult:
    """Solutions of a batch, one column per problem.

    Failed columns (asynchronous mode only) hold NaN in `Z` and `zeta` and
    have their message in `errors`.
    """

    Z: np.ndarray
    iterations: np.ndarray
    statuses: list
    total_wall_time: float
    rho: float
    kkt_residuals: np.ndarray
    zeta: np.ndarray = field(repr=False, default=None)
    errors: dict = field(default_factory=dict)

    @property
    def all_converged(self):
        return all(s is Status.CONVERGED for s in self.statuses)


def _kkt(batch, Z):
    L, U = batch.bound_blocks()
    stat, feas = kkt_columns(batch.A, batch.B, batch.V, L, U, batch.mu_row(), Z)
    return np.maximum(stat, feas)


def solve_batch_sync(batch, config=None, ctx=None, warm=None, callback=None):
    """Solve all columns in lockstep, as one ``(D, N)`` block.

    Every column runs the same number of iterations; the loop stops when
    the largest per-column change in ``z`` falls below ``config.tol``.

    Parameters
    ----------
    batch : BatchProblem
    config : SolverConfig, optional
    ctx : SharedContext, optional
        Reused instead of factorizing again.
    warm : tuple of ndarray, optional
        ``(Z, zeta)`` blocks of shape ``(D, N)``.
    callback : callable, optional
        ``callback(k, X, Z, zeta)`` with ``(D, N)`` copies after iteration k.
    """
    t0 = time.perf_counter()
    config = config or SolverConfig()
    if ctx is None:
        ctx = config.make_context(batch.A)
    L, U = batch.bound_blocks()
    mu = batch.mu_row()
    if warm is None:
        Z = median3(L, U, batch.V)
        Y = np.zeros_like(Z)
    else:
        Z = median3(L, U, np.array(warm[0], dtype=float))
        Y = np.array(warm[1], dtype=float, order="C")
        if Z.shape != batch.B.shape or Y.shape != batch.B.shape:
            raise ValueError("warm start blocks must have shape (D, N)")
    Z = np.ascontiguousarray(Z)
    _, Z, Y, k, converged = run_block(
        ctx, batch.B, batch.V, L, U, mu, Z, Y, config.tol, config.max_iters,
        config.stop_metric, config.primal_check, callback)
    status = Status.CONVERGED if converged else Status.MAX_ITERS
    N = batch.count
    return BatchResult(
        Z=Z,
        iterations=np.full(N, k),
        statuses=[status] * N,
        total_wall_time=time.perf_counter() - t0,
        rho=ctx.rho,
        kkt_residuals=_kkt(batch, Z),
        zeta=Y,
    )


def _solve_columns(batch, config, ctx, columns):
    out = []
    for n in columns:
        try:
            sol = solve(batch.column(n), config, ctx=ctx)
            out.append((n, sol.z, sol.zeta, sol.iterations, sol.status, None))
        except (ProxBQPError, ArithmeticError, ValueError) as exc:
            out.append((n, None, None, 0, Status.FAILED, f"{type(exc).__name__}: {exc}"))
    return out


def solve_batch_async(batch, config=None, workers=1, ctx=None, executor="thread"):
    """Solve each column independently, each with its own stopping test.

    Columns are dealt round-robin into `workers` chunks (column ``n`` goes to
    chunk ``n % workers``).  Results do not depend on `workers` or on
    scheduling: every column follows exactly the arithmetic of a
    standalone :func:`~proxbqp.solver.solve`.  An error in one column is
    recorded for that column and the rest proceed.

    Parameters
    ----------
    batch : BatchProblem
    config : SolverConfig, optional
    workers : int
    ctx : SharedContext, optional
    executor : {"thread", "process"}
        Threads share the context in memory.  Processes receive a pickled
        copy of it (no refactorization) and avoid the interpreter lock.
    """
    t0 = time.perf_counter()
    config = config or SolverConfig()
    workers = int(workers)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if ctx is None:
        ctx = config.make_context(batch.A)
    N, D = batch.count, batch.dim
    chunks = [range(w, N, workers) for w in range(min(workers, N))]
    if len(chunks) <= 1:
        parts = [_solve_columns(batch, config, ctx, c) for c in chunks]
    else:
        pool_cls = {"thread": ThreadPoolExecutor,
                    "process": ProcessPoolExecutor}[executor]
        with pool_cls(max_workers=len(chunks)) as pool:
            futures = [pool.submit(_solve_columns, batch, config, ctx, c)
                       for c in chunks]
            parts = [f.result() for f in futures]

    Z = np.full((D, N), np.nan)
    Y = np.full((D, N), np.nan)
    iterations = np.zeros(N, dtype=int)
    statuses = [Status.FAILED] * N
    errors = {}
    for part in parts:
        for n, z, zeta, k, status, err in part:
            statuses[n] = status
            iterations[n] = k
            if err is None:
                Z[:, n] = z
                Y[:, n] = zeta
            else:
                errors[n] = err
    kkt = np.full(N, np.nan)
    ok = np.array([s is not Status.FAILED for s in statuses])
    if ok.any():
        kkt[ok] = _kkt(batch, np.where(ok, Z, 0.0))[ok]
    return BatchResult(
        Z=Z,
        iterations=iterations,
        statuses=statuses,
        total_wall_time=time.perf_counter() - t0,
        rho=ctx.rho,
        kkt_residuals=kkt,
        zeta=Y,
        errors=errors,
    )
