"""Problem containers for the proximal bound-constrained QP

    minimize  1/2 x^T A x - b^T x + mu/2 ||x - v||^2   s.t.  l <= x <= u

for a single instance and for a batch sharing ``A``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidProblem, NonFiniteValue
from .linalg import as_sym_matrix

__all__ = ["ProxBQProblem", "BatchProblem"]


def _finite(name, arr):
    if not np.all(np.isfinite(arr)):
        raise InvalidProblem(f"{name} contains NaN or Inf")


def _check_bounds(l, u, column=None):
    bad = np.argwhere(l > u)
    if bad.size:
        d = int(bad[0][0])
        where = f"coordinate {d}"
        if column is not None or bad.shape[1] > 1:
            n = column if column is not None else int(bad[0][1])
            where += f" of column {n}"
        lo = l[tuple(bad[0])]
        hi = u[tuple(bad[0])]
        raise InvalidProblem(
            f"lower bound exceeds upper bound at {where} ({lo!r} > {hi!r})")


def _sym(A):
    try:
        return as_sym_matrix(A)
    except (DimensionMismatch, NonFiniteValue) as exc:
        raise InvalidProblem(f"A: {exc}") from exc


@dataclass(frozen=True, eq=False)
class ProxBQProblem:
    """One proximal box-constrained QP.

    Scalar `l`, `u` are broadcast to all coordinates.  Bounds may coincide
    (pinned coordinates) but must be finite.
    """

    A: np.ndarray
    b: np.ndarray
    v: np.ndarray
    l: np.ndarray
    u: np.ndarray
    mu: float

    def __post_init__(self):
        A = _sym(self.A)
        D = A.shape[0]
        fields = {}
        for name in ("b", "v", "l", "u"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim == 0:
                arr = np.full(D, float(arr))
            if arr.shape != (D,):
                raise InvalidProblem(
                    f"{name} has shape {arr.shape}, expected ({D},)")
            _finite(name, arr)
            arr = arr.copy()
            arr.setflags(write=False)
            fields[name] = arr
        mu = float(self.mu)
        if not (mu > 0 and np.isfinite(mu)):
            raise InvalidProblem(f"mu must be positive and finite, got {self.mu!r}")
        _check_bounds(fields["l"], fields["u"])
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "mu", mu)
        for name, arr in fields.items():
            object.__setattr__(self, name, arr)

    @property
    def dim(self):
        return self.A.shape[0]

    def objective(self, x):
        x = np.asarray(x, dtype=float)
        r = x - self.v
        return 0.5 * x @ self.A @ x - self.b @ x + 0.5 * self.mu * r @ r


@dataclass(frozen=True, eq=False)
class BatchProblem:
    """``N`` problems sharing ``A``, stored column-wise.

    Parameters
    ----------
    A : array_like, shape (D, D)
    B, V : array_like, shape (D, N)
        Linear terms and proximal centers, one column per problem.
    L, U : array_like, shape (D,) or (D, N)
        Shared bounds (a single vector, or a scalar) or per-column bounds.
    mu : float or array_like, shape (N,)
    """

    A: np.ndarray
    B: np.ndarray
    V: np.ndarray
    L: np.ndarray
    U: np.ndarray
    mu: object

    def __post_init__(self):
        A = _sym(self.A)
        D = A.shape[0]
        B = np.array(self.B, dtype=float, ndmin=2, order="C")
        V = np.array(self.V, dtype=float, ndmin=2, order="C")
        if B.shape[0] != D or B.ndim != 2:
            raise InvalidProblem(f"B has shape {B.shape}, expected ({D}, N)")
        N = B.shape[1]
        if V.shape != (D, N):
            raise InvalidProblem(f"V has shape {V.shape}, expected ({D}, {N})")
        bounds = {}
        for name in ("L", "U"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.ndim == 0:
                arr = np.full(D, float(arr))
            if arr.shape not in ((D,), (D, N)):
                raise InvalidProblem(
                    f"{name} has shape {arr.shape}, expected ({D},) or ({D}, {N})")
            bounds[name] = arr
        if bounds["L"].ndim != bounds["U"].ndim:
            raise InvalidProblem("L and U must both be shared or both per-column")
        mu = np.array(self.mu, dtype=float)
        if mu.ndim == 0:
            mu = float(mu)
            mu_ok = mu > 0 and np.isfinite(mu)
        elif mu.shape == (N,):
            mu_ok = bool(np.all(mu > 0) and np.all(np.isfinite(mu)))
        else:
            raise InvalidProblem(f"mu has shape {mu.shape}, expected scalar or ({N},)")
        if not mu_ok:
            raise InvalidProblem("mu must be positive and finite")
        for name, arr in (("B", B), ("V", V), *bounds.items()):
            _finite(name, arr)
        _check_bounds(bounds["L"], bounds["U"])
        for name, arr in (("A", A), ("B", B), ("V", V), *bounds.items()):
            if name != "A":
                arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if isinstance(mu, np.ndarray):
            mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)

    @property
    def dim(self):
        return self.A.shape[0]

    @property
    def count(self):
        return self.B.shape[1]

    @property
    def shared_bounds(self):
        return self.L.ndim == 1

    @property
    def shared_mu(self):
        return not isinstance(self.mu, np.ndarray)

    def bound_blocks(self):
        """Bounds as arrays broadcastable against a ``(D, N)`` block."""
        if self.shared_bounds:
            return self.L[:, None], self.U[:, None]
        return self.L, self.U

    def mu_row(self):
        """``mu`` as a scalar or a ``(1, N)`` row."""
        return self.mu if self.shared_mu else self.mu[None, :]

    def column(self, n):
        """The ``n``-th problem as a standalone :class:`ProxBQProblem`."""
        if self.shared_bounds:
            l, u = self.L, self.U
        else:
            l, u = self.L[:, n], self.U[:, n]
        mu = self.mu if self.shared_mu else self.mu[n]
        return ProxBQProblem(self.A, self.B[:, n], self.V[:, n], l, u, mu)
