"""Penalty parameter selection."""

import math

from .errors import ZeroMatrix
from .linalg import eigen_extremes

AUTO = "auto"


def default_rho(A, tol=1e-8):
    """Geometric mean of the extreme nonzero eigenvalues of `A`.

    ``rho* = sqrt(sigma_min * sigma_max)``, where ``sigma_min`` is the
    smallest eigenvalue above the rank tolerance.  For a zero matrix the
    formula is undefined and ``1.0`` is returned; any positive value
    converges in that case.
    """
    try:
        ext = eigen_extremes(A, tol)
    except ZeroMatrix:
        return 1.0
    return math.sqrt(ext.sigma_min_nonzero * ext.sigma_max)


def validate_rho(rho):
    """Normalize a rho policy: ``"auto"`` or a finite positive float."""
    if isinstance(rho, str):
        if rho.lower() != AUTO:
            raise ValueError(f"rho must be 'auto' or a positive number, got {rho!r}")
        return AUTO
    value = float(rho)
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"rho must be positive and finite, got {rho!r}")
    return value


def resolve_rho(rho, A):
    """Turn a rho policy into a concrete penalty for matrix `A`."""
    rho = validate_rho(rho)
    return default_rho(A) if rho == AUTO else rho
