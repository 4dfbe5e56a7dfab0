"""Dense symmetric linear algebra used by the ADMM iteration.

Cholesky factors of ``A + rho*I`` are computed once and reused for every
x-update.  Triangular solves are done on the transposed right-hand side
block, ``W R = B^T``, which lets BLAS work on a C-ordered ``(D, N)`` batch
without copying it.
"""

import threading
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg.blas import dtrsm

from .errors import (
    DimensionMismatch,
    FactorizationFailure,
    NonFiniteValue,
    ZeroMatrix,
)

__all__ = [
    "CholeskyFactor",
    "EigenExtremes",
    "as_sym_matrix",
    "cg_solve",
    "cholesky_factorize",
    "cholesky_solve",
    "eigen_extremes",
    "factorization_count",
    "RANK_RTOL",
]

# Eigenvalues at or below RANK_RTOL * sigma_max count as zero.
RANK_RTOL = 1e-10
DENSE_EIG_LIMIT = 128

_count_lock = threading.Lock()
_factorizations = 0


def factorization_count():
    """Number of Cholesky factorizations performed so far in this process."""
    return _factorizations


def _bump_count():
    global _factorizations
    with _count_lock:
        _factorizations += 1


def as_sym_matrix(A, rtol=1e-12):
    """Validate a square symmetric matrix and return a read-only copy.

    The asymmetry ``max|A - A^T|`` must not exceed
    ``rtol * max(1, max|A|)``; the returned matrix is the exactly
    symmetric part ``(A + A^T) / 2``.
    """
    A = np.array(A, dtype=float, ndmin=2)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got shape {A.shape}")
    if A.shape[0] < 1:
        raise DimensionMismatch("matrix must have dimension >= 1")
    if not np.all(np.isfinite(A)):
        raise NonFiniteValue("matrix contains NaN or Inf")
    scale = max(1.0, float(np.max(np.abs(A))))
    asym = float(np.max(np.abs(A - A.T)))
    if asym > rtol * scale:
        raise DimensionMismatch(
            f"matrix is not symmetric (max asymmetry {asym:.3e})")
    A = 0.5 * (A + A.T)
    A.setflags(write=False)
    return A


@dataclass(frozen=True, eq=False)
class CholeskyFactor:
    """Upper triangular ``R`` with ``R^T R = A + shift*I``."""

    R: np.ndarray
    shift: float

    @property
    def dim(self):
        return self.R.shape[0]

    def solve(self, rhs):
        return cholesky_solve(self, rhs)


def cholesky_factorize(A, rho):
    """Factorize ``A + rho*I`` as ``R^T R`` with ``R`` upper triangular.

    Parameters
    ----------
    A : array_like, shape (D, D)
        Symmetric positive semidefinite matrix.
    rho : float
        Nonnegative diagonal shift.

    Returns
    -------
    CholeskyFactor

    Raises
    ------
    FactorizationFailure
        If a pivot is not strictly positive, i.e. ``A + rho*I`` is not
        numerically positive definite.
    """
    A = as_sym_matrix(A)
    rho = float(rho)
    if not (rho >= 0 and np.isfinite(rho)):
        raise ValueError(f"shift must be finite and nonnegative, got {rho}")
    M = A + rho * np.eye(A.shape[0])
    try:
        R = scipy.linalg.cholesky(M, lower=False, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise FactorizationFailure(
            f"A + {rho:g} I is not positive definite: {exc}") from exc
    if not np.all(np.diag(R) > 0):
        raise FactorizationFailure(f"A + {rho:g} I has a zero pivot")
    _bump_count()
    R = np.asfortranarray(R)
    R.setflags(write=False)
    return CholeskyFactor(R=R, shift=rho)


def cholesky_solve(F, rhs):
    """Solve ``(A + rho*I) w = rhs`` with a cached factor.

    `rhs` may be a vector of length ``D`` or a ``(D, N)`` block; all
    columns are solved together, lower triangular system first.
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.ndim not in (1, 2) or rhs.shape[0] != F.dim:
        raise DimensionMismatch(
            f"right-hand side of shape {rhs.shape} does not match "
            f"factor of dimension {F.dim}")
    vector = rhs.ndim == 1
    block = rhs.reshape(F.dim, -1)
    # w^T R^T R = rhs^T: first y^T R = rhs^T, then w^T R^T = y^T.
    W = dtrsm(1.0, F.R, block.T, side=1, lower=0, trans_a=0)
    W = dtrsm(1.0, F.R, W, side=1, lower=0, trans_a=1, overwrite_b=1)
    out = W.T
    return out.reshape(-1) if vector else out


@dataclass(frozen=True)
class EigenExtremes:
    sigma_min_nonzero: float
    sigma_max: float


def eigen_extremes(A, tol=1e-8):
    """Smallest nonzero and largest eigenvalue of a symmetric PSD matrix.

    Matrices up to dimension 128 use a full symmetric eigendecomposition.
    Larger ones use power iteration for the top eigenvalue and inverse
    iteration on a slightly shifted Cholesky factor, with deflation of
    null vectors, for the bottom one.

    Raises
    ------
    ZeroMatrix
        If no eigenvalue is positive.
    """
    A = as_sym_matrix(A)
    if A.shape[0] <= DENSE_EIG_LIMIT:
        w = np.linalg.eigvalsh(A)
        smax = float(w[-1])
        if not smax > 0:
            raise ZeroMatrix("matrix has no positive eigenvalue")
        nonzero = w[w > RANK_RTOL * smax]
        return EigenExtremes(float(nonzero[0]), smax)
    smax = _power_iteration(A, tol)
    if not smax > 0:
        raise ZeroMatrix("matrix has no positive eigenvalue")
    smin = _smallest_nonzero(A, smax, tol)
    return EigenExtremes(min(smin, smax), smax)


def _power_iteration(A, tol, max_iters=100000):
    rng = np.random.default_rng(0)
    q = rng.standard_normal(A.shape[0])
    q /= np.linalg.norm(q)
    lam = 0.0
    for _ in range(max_iters):
        w = A @ q
        lam_new = float(q @ w)
        nrm = np.linalg.norm(w)
        if nrm == 0:
            return 0.0
        q = w / nrm
        if abs(lam_new - lam) <= tol * abs(lam_new):
            return lam_new
        lam = lam_new
    return lam


def _smallest_nonzero(A, smax, tol, max_iters=100000):
    D = A.shape[0]
    threshold = RANK_RTOL * smax
    # A small positive shift keeps A + sI definite when A is singular.
    F = cholesky_factorize(A, threshold)
    rng = np.random.default_rng(1)
    null = np.zeros((D, 0))
    while null.shape[1] < D:
        q = rng.standard_normal(D)
        q -= null @ (null.T @ q)
        q /= np.linalg.norm(q)
        lam = np.inf
        for _ in range(max_iters):
            w = cholesky_solve(F, q)
            w -= null @ (null.T @ w)
            q = w / np.linalg.norm(w)
            lam_new = float(q @ (A @ q))
            if abs(lam_new - lam) <= tol * max(abs(lam_new), threshold):
                break
            lam = lam_new
        if lam_new > threshold:
            return lam_new
        null = np.column_stack([null, q])
    raise ZeroMatrix("matrix has no eigenvalue above the rank tolerance")


def cg_solve(A, rho, rhs, x0, max_iters, residual_tol):
    """Jacobi-preconditioned conjugate gradients on ``(A + rho*I) x = rhs``.

    Stops when ``||(A + rho*I) x - rhs|| <= residual_tol * ||rhs||`` or
    after `max_iters` iterations, whichever comes first; an early, inexact
    answer is intended.  A ``(D, N)`` block runs independent CG recursions
    per column, each with its own stopping test.

    Parameters
    ----------
    A : ndarray, shape (D, D)
    rho : float
        Positive shift.
    rhs, x0 : ndarray, shape (D,) or (D, N)
        Right-hand side and warm start.
    max_iters : int
    residual_tol : float

    Returns
    -------
    ndarray
        Final iterate, same shape as `rhs`.
    """
    A = np.asarray(A, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    D = A.shape[0]
    if rhs.shape != x0.shape or rhs.ndim not in (1, 2) or rhs.shape[0] != D:
        raise DimensionMismatch(
            f"rhs {rhs.shape} and x0 {x0.shape} must both be ({D},) or "
            f"({D}, N)")
    if not (np.all(np.isfinite(rhs)) and np.all(np.isfinite(x0))):
        raise NonFiniteValue("CG input contains NaN or Inf")
    vector = rhs.ndim == 1
    b = rhs.reshape(D, -1)
    x = x0.reshape(D, -1).copy()
    minv = 1.0 / (np.diag(A) + rho)[:, None]

    r = b - (A @ x + rho * x)
    stop = residual_tol * np.linalg.norm(b, axis=0)
    active = np.linalg.norm(r, axis=0) > stop
    if active.any():
        s = minv * r
        p = s.copy()
        rs = np.einsum("ij,ij->j", r, s)
        for _ in range(max_iters):
            q = A @ p + rho * p
            pq = np.einsum("ij,ij->j", p, q)
            active &= pq > 0
            alpha = np.divide(rs, pq, out=np.zeros_like(rs), where=active)
            x += alpha * p
            r -= alpha * q
            active &= np.linalg.norm(r, axis=0) > stop
            if not active.any():
                break
            s = minv * r
            rs_new = np.einsum("ij,ij->j", r, s)
            beta = np.divide(rs_new, rs, out=np.zeros_like(rs), where=active)
            p = s + beta * p
            rs = rs_new
        if not np.all(np.isfinite(x)):
            raise NonFiniteValue("CG produced NaN or Inf")
    return x.reshape(-1) if vector else x
