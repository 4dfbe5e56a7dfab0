"""Relaxed binary least-squares subproblems from binary hashing.

Each subproblem maps a binary code ``x_n`` linearly onto a real target:

    minimize  1/2 ||C x_n - d_n||^2 + mu/2 ||x_n - v_n||^2,  x_n in {0, 1}^D

Relaxing ``{0, 1}^D`` to ``[0, 1]^D`` yields proximal box QPs sharing
``A = C^T C``.  Relaxed solutions are rounded back with :func:`binarize`;
a loose tolerance such as ``1e-3`` is usually enough since the answer is
rounded anyway.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OutOfRange
from .problem import BatchProblem

__all__ = ["HashSubproblemSet", "binarize", "build_relaxed_batch", "hash_objective"]


@dataclass(frozen=True, eq=False)
class HashSubproblemSet:
    """Shared map `C` (M, D), targets (M, N), prox centers `V` (D, N)."""

    C: np.ndarray
    targets: np.ndarray
    V: np.ndarray
    mu: float

    def __post_init__(self):
        C = np.array(self.C, dtype=float, ndmin=2)
        T = np.array(self.targets, dtype=float, ndmin=2)
        V = np.array(self.V, dtype=float, ndmin=2)
        if C.ndim != 2 or T.ndim != 2 or V.ndim != 2:
            raise DimensionMismatch("C, targets and V must be 2-D")
        M, D = C.shape
        if T.shape[0] != M:
            raise DimensionMismatch(f"targets have {T.shape[0]} rows, C has {M}")
        if V.shape != (D, T.shape[1]):
            raise DimensionMismatch(
                f"V has shape {V.shape}, expected ({D}, {T.shape[1]})")
        mu = float(self.mu)
        if not (mu > 0 and np.isfinite(mu)):
            raise ValueError(f"mu must be positive and finite, got {self.mu!r}")
        for name, arr in (("C", C), ("targets", T), ("V", V)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains NaN or Inf")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "mu", mu)

    @property
    def dim(self):
        return self.C.shape[1]

    @property
    def count(self):
        return self.targets.shape[1]


def build_relaxed_batch(subproblems):
    """Relaxed batch: ``A = C^T C``, ``b_n = C^T d_n``, bounds ``[0, 1]``."""
    C = subproblems.C
    A = C.T @ C
    A = 0.5 * (A + A.T)
    D = subproblems.dim
    return BatchProblem(A=A, B=C.T @ subproblems.targets, V=subproblems.V,
                        L=np.zeros(D), U=np.ones(D), mu=subproblems.mu)


def hash_objective(subproblems, X, column=None):
    """Objective ``1/2 ||C x - d||^2 + mu/2 ||x - v||^2``.

    Without `column`, `X` is ``(D, N)`` and column ``n`` is scored against
    subproblem ``n``.  With `column`, every column of `X` (or the single
    vector `X`) is scored against that one subproblem.
    """
    X = np.asarray(X, dtype=float)
    vector = X.ndim == 1
    X = X.reshape(subproblems.dim, -1)
    if column is None:
        if X.shape[1] != subproblems.count:
            raise DimensionMismatch(
                f"X has {X.shape[1]} columns, expected {subproblems.count}")
        d, v = subproblems.targets, subproblems.V
    else:
        d = subproblems.targets[:, [column]]
        v = subproblems.V[:, [column]]
    fit = subproblems.C @ X - d
    prox = X - v
    val = 0.5 * np.sum(fit ** 2, axis=0) + 0.5 * subproblems.mu * np.sum(prox ** 2, axis=0)
    return float(val[0]) if vector else val


def binarize(z, atol=1e-9):
    """Round a relaxed solution in ``[0, 1]`` to ``{0, 1}``; 0.5 rounds up."""
    z = np.asarray(z, dtype=float)
    if np.any(z < -atol) or np.any(z > 1 + atol) or not np.all(np.isfinite(z)):
        raise OutOfRange("values must lie in [0, 1] to be binarized")
    return (z >= 0.5).astype(np.int8)
