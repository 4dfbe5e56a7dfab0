"""Correctness oracles: KKT residuals and exact solves by active-set enumeration."""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DimensionTooLarge

__all__ = ["KktReport", "kkt_residual", "kkt_columns", "oracle_solve",
           "ORACLE_MAX_DIM"]

ORACLE_MAX_DIM = 10
BOUNDARY_ATOL = 1e-9


@dataclass(frozen=True)
class KktReport:
    stationarity_residual: float
    feasibility_violation: float
    max_residual: float


def kkt_columns(A, B, V, L, U, mu, Z):
    """Per-column stationarity and feasibility violations.

    All of `B`, `V`, `Z` are ``(D, N)``; `L`, `U` and `mu` broadcast against
    them.  With ``g = A z - b + mu (z - v)`` the stationarity violation of a
    coordinate is ``|g|`` if it is strictly inside its box, ``max(0, -g)``
    at the lower bound, ``max(0, g)`` at the upper bound and zero if the
    box is a single point.  A coordinate within ``1e-9 * max(1, |bound|)``
    of a bound counts as on it.
    """
    G = A @ Z - B + mu * (Z - V)
    at_l = np.abs(Z - L) <= BOUNDARY_ATOL * np.maximum(1.0, np.abs(L))
    at_u = np.abs(Z - U) <= BOUNDARY_ATOL * np.maximum(1.0, np.abs(U))
    viol = np.abs(G)
    viol = np.where(at_l, np.maximum(0.0, -G), viol)
    viol = np.where(at_u, np.maximum(0.0, G), viol)
    viol = np.where(at_l & at_u, 0.0, viol)
    feas = np.maximum(0.0, np.maximum(L - Z, Z - U))
    return viol.max(axis=0), np.broadcast_to(feas, Z.shape).max(axis=0)


def kkt_residual(problem, z):
    """First-order optimality report for a candidate point `z`."""
    z = np.asarray(z, dtype=float)
    if z.shape != (problem.dim,):
        raise DimensionMismatch(
            f"z has shape {z.shape}, expected ({problem.dim},)")
    stat, feas = kkt_columns(problem.A, problem.b[:, None], problem.v[:, None],
                             problem.l[:, None], problem.u[:, None],
                             problem.mu, z[:, None])
    stat, feas = float(stat[0]), float(feas[0])
    return KktReport(stat, feas, max(stat, feas))


def oracle_solve(problem):
    """Exact minimizer by enumerating every active set.

    Each coordinate is assigned to its lower bound, its upper bound, or
    free; the free block is solved from ``(A + mu I) z = b + mu v`` with the
    others fixed.  The assignment whose solution is feasible and satisfies
    the KKT sign conditions is the unique optimum.  Cost grows as ``3^D``.

    Raises
    ------
    DimensionTooLarge
        If the problem has more than 10 variables.
    """
    D = problem.dim
    if D > ORACLE_MAX_DIM:
        raise DimensionTooLarge(
            f"oracle enumeration is limited to D <= {ORACLE_MAX_DIM}, got {D}")
    H = problem.A + problem.mu * np.eye(D)
    c = problem.b + problem.mu * problem.v
    l, u = problem.l, problem.u
    bscale = np.maximum(1.0, np.maximum(np.abs(l), np.abs(u)))
    gtol = 1e-10 * (1.0 + np.max(np.abs(c)) + np.max(np.abs(H)) * np.max(bscale))
    xtol = 1e-10 * bscale

    found = []
    for assign in itertools.product((0, 1, 2), repeat=D):
        assign = np.array(assign)
        lo, hi, free = assign == 0, assign == 1, assign == 2
        z = np.where(lo, l, u)
        if free.any():
            fixed = ~free
            rhs = c[free] - H[np.ix_(free, fixed)] @ z[fixed]
            z[free] = np.linalg.solve(H[np.ix_(free, free)], rhs)
            zf = z[free]
            if np.any(zf < l[free] - xtol[free]) or np.any(zf > u[free] + xtol[free]):
                continue
        g = H @ z - c
        if np.any(g[lo] < -gtol) or np.any(g[hi] > gtol):
            continue
        found.append(np.clip(z, l, u))

    if not found:
        raise RuntimeError("no active set satisfied the KKT conditions")
    first = found[0]
    for other in found[1:]:
        if np.max(np.abs(other - first)) > 1e-9 * (1.0 + np.max(np.abs(first))):
            raise RuntimeError("distinct KKT points found; problem data inconsistent")
    return first
