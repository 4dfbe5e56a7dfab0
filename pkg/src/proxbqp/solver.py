"""ADMM for the proximal bound-constrained QP.

Splitting ``f(x) = 1/2 x^T A x - b^T x`` from the boxed proximal term
``g(z) = mu/2 ||z - v||^2, l <= z <= u`` with the consensus constraint
``x = z`` gives the scaled-form iteration

    x    <- (A + rho I)^{-1} (b + rho (z - zeta))
    z    <- median(l, u, (mu v + rho (x + zeta)) / (mu + rho))
    zeta <- zeta + x - z

applied in order, each update using the values just computed.  The
returned point is ``z``, which lies in the box at every iteration.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .context import Backend, SharedContext, make_shared_context
from .errors import DimensionMismatch, InvalidProblem
from .rho import resolve_rho, validate_rho
from .verify import kkt_residual

__all__ = [
    "Solution",
    "SolverConfig",
    "SolverState",
    "Status",
    "StopMetric",
    "dual_update",
    "initial_state",
    "median3",
    "solve",
    "step",
    "x_update",
    "z_update",
]


class StopMetric(str, Enum):
    MAX_ABS_CHANGE = "abs"
    RELATIVE_CHANGE = "rel"


class Status(str, Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    FAILED = "failed"


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    Parameters
    ----------
    rho : float or "auto"
        Penalty parameter; ``"auto"`` uses ``sqrt(sigma_min * sigma_max)``
        of ``A``.
    tol : float
        Stop once the change in ``z`` between iterations is below `tol`.
    max_iters : int
    backend : Backend or str
        ``"cholesky"`` (cached factor, exact x-update) or ``"cg"``
        (warm-started Jacobi-preconditioned CG, inexact x-update).
    stop_metric : StopMetric or str
        ``"abs"`` measures ``max |z - z_old|``; ``"rel"`` divides that by
        ``1 + max |z|``.
    primal_check : bool
        Also require the consensus residual ``x - z`` (the change in
        ``zeta``) to be below `tol`, measured the same way.  Without it a
        ``z`` that sits on a bound while ``zeta`` is still moving can stop
        the iteration early.
    cg_inner_iters, cg_residual_tol : int, float
        CG iteration cap and relative residual target per x-update.
    """

    rho: object = "auto"
    tol: float = 1e-5
    max_iters: int = 10000
    backend: Backend = Backend.CHOLESKY
    stop_metric: StopMetric = StopMetric.MAX_ABS_CHANGE
    primal_check: bool = True
    cg_inner_iters: int = 5
    cg_residual_tol: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "rho", validate_rho(self.rho))
        object.__setattr__(self, "backend", Backend(self.backend))
        object.__setattr__(self, "stop_metric", StopMetric(self.stop_metric))
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if int(self.max_iters) < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if int(self.cg_inner_iters) < 1 or not self.cg_residual_tol > 0:
            raise ValueError("cg_inner_iters must be >= 1 and cg_residual_tol > 0")
        object.__setattr__(self, "max_iters", int(self.max_iters))
        object.__setattr__(self, "cg_inner_iters", int(self.cg_inner_iters))

    def make_context(self, A):
        """Resolve rho for `A` and build the shared linear-solve context."""
        return make_shared_context(A, resolve_rho(self.rho, A), self.backend,
                                   self.cg_inner_iters, self.cg_residual_tol)


@dataclass
class SolverState:
    x: np.ndarray
    z: np.ndarray
    zeta: np.ndarray
    iterations_done: int = 0


@dataclass
class Solution:
    """Result of :func:`solve`.

    `z` is the feasible approximate minimizer.  `zeta` (scaled dual) and
    `z` together form a warm start for a nearby problem.
    """

    z: np.ndarray
    iterations: int
    status: Status
    kkt_residual: float
    rho: float
    x: np.ndarray = field(repr=False, default=None)
    zeta: np.ndarray = field(repr=False, default=None)

    @property
    def converged(self):
        return self.status is Status.CONVERGED


def median3(l, u, t):
    """Elementwise median of ``l``, ``u`` and ``t`` for ``l <= u``."""
    l, u, t = (np.asarray(a, dtype=float) for a in (l, u, t))
    try:
        shape = np.broadcast_shapes(l.shape, u.shape, t.shape)
    except ValueError as exc:
        raise DimensionMismatch(str(exc)) from exc
    if shape != t.shape:
        raise DimensionMismatch(f"bounds {l.shape}, {u.shape} do not fit {t.shape}")
    return np.minimum(u, np.maximum(l, t))


def x_update(ctx, b, z, zeta, x_prev=None):
    """Minimize ``f(x) + rho/2 ||x - z + zeta||^2`` over ``x``.

    The CG backend warm-starts from `x_prev`, or from ``z - zeta`` when no
    previous iterate exists.
    """
    rhs = b + ctx.rho * (z - zeta)
    if ctx.backend is Backend.CG and x_prev is None:
        x_prev = z - zeta
    return ctx.solve(rhs, x_prev)


def z_update(problem, rho, x, zeta):
    t = (problem.mu * problem.v + rho * (x + zeta)) / (problem.mu + rho)
    return median3(problem.l, problem.u, t)


def dual_update(zeta, x, z):
    return zeta + (x - z)


def initial_state(problem, warm=None):
    """Cold start ``z = clip(v)``, ``zeta = 0``, or a clipped warm start."""
    if warm is None:
        z = median3(problem.l, problem.u, problem.v)
        zeta = np.zeros(problem.dim)
    else:
        z, zeta = (np.array(a, dtype=float) for a in warm)
        if z.shape != (problem.dim,) or zeta.shape != (problem.dim,):
            raise DimensionMismatch(
                f"warm start shapes {z.shape}, {zeta.shape} do not match "
                f"dimension {problem.dim}")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(zeta))):
            raise InvalidProblem("warm start contains NaN or Inf")
        z = median3(problem.l, problem.u, z)
    return SolverState(x=z - zeta, z=z, zeta=zeta)


def step(problem, ctx, state):
    """One ADMM iteration; returns a new state and leaves `state` untouched."""
    if state.z.shape != (problem.dim,):
        raise DimensionMismatch(
            f"state of dimension {state.z.shape} does not match problem {problem.dim}")
    x = x_update(ctx, problem.b, state.z, state.zeta, state.x)
    z = z_update(problem, ctx.rho, x, state.zeta)
    zeta = dual_update(state.zeta, x, z)
    return SolverState(x, z, zeta, state.iterations_done + 1)


def _change(X, Z, Zold, metric, primal_check, buf):
    """Per-column stop metric for ``(D, N)`` blocks."""
    np.subtract(Z, Zold, out=buf)
    np.abs(buf, out=buf)
    change = buf.max(axis=0)
    if primal_check:
        np.subtract(X, Z, out=buf)
        np.abs(buf, out=buf)
        np.maximum(change, buf.max(axis=0), out=change)
    if metric is StopMetric.RELATIVE_CHANGE:
        np.abs(Z, out=buf)
        change /= 1.0 + buf.max(axis=0)
    return change


def run_block(ctx, B, V, L, U, mu, Z, Y, tol, max_iters, metric,
              primal_check=True, callback=None):
    """Iterate on a ``(D, N)`` block in lockstep until every column stops.

    `Z` and `Y` are updated in place.  `L`, `U` broadcast as ``(D, 1)`` or
    ``(D, N)``, `mu` as a scalar or ``(1, N)`` row.  Returns
    ``(X, Z, Y, iterations, converged)``; the stop test is on the largest
    per-column stop metric.
    """
    rho = ctx.rho
    muV = mu * V
    denom = mu + rho
    X = Z - Y
    Zold = np.empty_like(Z)
    rhs = np.empty_like(Z)
    buf = np.empty_like(Z)
    converged = False
    k = 0
    while k < max_iters:
        k += 1
        Zold[...] = Z
        np.subtract(Z, Y, out=rhs)
        rhs *= rho
        rhs += B
        X = ctx.solve(rhs, X)
        np.add(X, Y, out=Z)
        Z *= rho
        Z += muV
        Z /= denom
        np.maximum(Z, L, out=Z)
        np.minimum(Z, U, out=Z)
        np.subtract(X, Z, out=buf)
        Y += buf
        change = _change(X, Z, Zold, metric, primal_check, buf)
        if callback is not None:
            callback(k, X.copy(), Z.copy(), Y.copy())
        if change.max() < tol:
            converged = True
            break
    return X, Z, Y, k, converged


def solve(problem, config=None, warm=None, ctx=None, callback=None):
    """Solve one proximal bound-constrained QP by ADMM.

    Parameters
    ----------
    problem : ProxBQProblem
    config : SolverConfig, optional
    warm : tuple of ndarray, optional
        ``(z, zeta)`` from a previous, nearby solve.  `z` is clipped into
        the box.  Without it the iteration starts at ``z = clip(v)``,
        ``zeta = 0``.
    ctx : SharedContext, optional
        Prebuilt context for ``problem.A``; its rho overrides
        ``config.rho``.
    callback : callable, optional
        Called as ``callback(k, x, z, zeta)`` after iteration ``k``.

    Returns
    -------
    Solution
    """
    config = config or SolverConfig()
    if ctx is None:
        ctx = config.make_context(problem.A)
    elif ctx.A is not problem.A and not np.array_equal(ctx.A, problem.A):
        raise DimensionMismatch("context was built for a different matrix A")
    state = initial_state(problem, warm)
    col = lambda a: a.reshape(-1, 1)  # noqa: E731
    Z = col(state.z).copy()
    Y = col(state.zeta).copy()
    cb = None
    if callback is not None:
        def cb(k, X, Zk, Yk):
            callback(k, X[:, 0], Zk[:, 0], Yk[:, 0])
    X, Z, Y, k, converged = run_block(
        ctx, col(problem.b), col(problem.v), col(problem.l), col(problem.u),
        problem.mu, Z, Y, config.tol, config.max_iters, config.stop_metric,
        config.primal_check, cb)
    z = Z[:, 0].copy()
    return Solution(
        z=z,
        iterations=k,
        status=Status.CONVERGED if converged else Status.MAX_ITERS,
        kkt_residual=kkt_residual(problem, z).max_residual,
        rho=ctx.rho,
        x=X[:, 0].copy(),
        zeta=Y[:, 0].copy(),
    )
