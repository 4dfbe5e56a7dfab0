"""ADMM solver for proximal bound-constrained quadratic programs.

Solves ``min 1/2 x^T A x - b^T x + mu/2 ||x - v||^2  s.t.  l <= x <= u``
with a cached Cholesky factor of ``A + rho I`` (or warm-started CG), one
problem at a time or as a batch sharing ``A``.
"""

from .batch import BatchResult, solve_batch_async, solve_batch_sync
from .context import Backend, SharedContext, make_shared_context
from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    FactorizationFailure,
    InvalidProblem,
    NonFiniteValue,
    OutOfRange,
    ParseError,
    ProxBQPError,
    ValidationError,
    ZeroMatrix,
)
from .hashapp import HashSubproblemSet, binarize, build_relaxed_batch, hash_objective
from .linalg import (
    CholeskyFactor,
    EigenExtremes,
    cg_solve,
    cholesky_factorize,
    cholesky_solve,
    eigen_extremes,
    factorization_count,
)
from .problem import BatchProblem, ProxBQProblem
from .rho import default_rho
from .solver import (
    Solution,
    SolverConfig,
    SolverState,
    Status,
    StopMetric,
    dual_update,
    median3,
    solve,
    step,
    x_update,
    z_update,
)
from .verify import KktReport, kkt_residual, oracle_solve

__version__ = "0.1.0"
