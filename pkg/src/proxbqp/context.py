"""Read-only linear-solve context shared by every problem with the same A."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import CholeskyFactor, as_sym_matrix, cg_solve, cholesky_factorize

__all__ = ["Backend", "SharedContext", "make_shared_context"]


class Backend(str, Enum):
    CHOLESKY = "cholesky"
    CG = "cg"


@dataclass(frozen=True, eq=False)
class SharedContext:
    """``A`` and ``rho`` with what is needed to apply ``(A + rho*I)^{-1}``.

    For the Cholesky backend `factor` holds the cached factor; for the CG
    backend it is ``None`` and each solve runs a few warm-started
    preconditioned CG iterations.
    """

    A: np.ndarray
    rho: float
    backend: Backend
    factor: CholeskyFactor = None
    cg_inner_iters: int = 5
    cg_residual_tol: float = 1e-8

    def solve(self, rhs, x0=None):
        if self.backend is Backend.CHOLESKY:
            return self.factor.solve(rhs)
        if x0 is None:
            x0 = np.zeros_like(rhs)
        return cg_solve(self.A, self.rho, rhs, x0,
                        self.cg_inner_iters, self.cg_residual_tol)


def make_shared_context(A, rho, backend=Backend.CHOLESKY, cg_inner_iters=5,
                        cg_residual_tol=1e-8):
    """Build a context, factorizing ``A + rho*I`` once for the Cholesky backend."""
    A = as_sym_matrix(A)
    rho = float(rho)
    if not (rho > 0 and np.isfinite(rho)):
        raise ValueError(f"rho must be positive and finite, got {rho}")
    backend = Backend(backend)
    if cg_inner_iters < 1 or not cg_residual_tol > 0:
        raise ValueError("cg_inner_iters must be >= 1 and cg_residual_tol > 0")
    factor = cholesky_factorize(A, rho) if backend is Backend.CHOLESKY else None
    return SharedContext(A, rho, backend, factor, int(cg_inner_iters),
                         float(cg_residual_tol))
