import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proxbqp.errors import (
    DimensionMismatch,
    FactorizationFailure,
    NonFiniteValue,
    ZeroMatrix,
)
from proxbqp.generate import random_spd
from proxbqp.linalg import (
    as_sym_matrix,
    cg_solve,
    cholesky_factorize,
    cholesky_solve,
    eigen_extremes,
    factorization_count,
)


def jacobi_eigenvalues(A, sweeps=100, tol=1e-14):
    """Cyclic Jacobi rotations; independent of LAPACK's eigensolvers."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * max(1.0, np.abs(A).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta ** 2 + 1))
                if theta == 0:
                    t = 1.0
                c = 1 / np.sqrt(t ** 2 + 1)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q], J[q, p] = s, -s
                A = J.T @ A @ J
    return np.sort(np.diag(A))


class TestCholesky:
    def test_identity_shift(self):
        F = cholesky_factorize(np.eye(2), 3.0)
        np.testing.assert_allclose(F.R, 2 * np.eye(2))
        assert F.shift == 3.0

    def test_zero_matrix_shift_makes_it_definite(self):
        F = cholesky_factorize(np.zeros((2, 2)), 1.0)
        np.testing.assert_allclose(F.R, np.eye(2))

    def test_hand_2x2(self):
        A = np.array([[4.0, 2.0], [2.0, 3.0]])
        F = cholesky_factorize(A, 0.0)
        np.testing.assert_allclose(F.R, [[2.0, 1.0], [0.0, np.sqrt(2.0)]], atol=1e-15)
        np.testing.assert_allclose(F.R.T @ F.R, A, atol=1e-14)

    def test_indefinite_fails(self):
        with pytest.raises(FactorizationFailure):
            cholesky_factorize(np.array([[1.0, 0.0], [0.0, -2.0]]), 1.0)

    def test_asymmetric_rejected(self):
        with pytest.raises(DimensionMismatch):
            cholesky_factorize(np.array([[1.0, 0.5], [0.0, 1.0]]), 1.0)

    def test_counter_increments_once_per_factorization(self):
        before = factorization_count()
        cholesky_factorize(np.eye(3), 1.0)
        assert factorization_count() == before + 1

    @settings(max_examples=40, deadline=None)
    @given(d=st.integers(1, 64), seed=st.integers(0, 2**32 - 1),
           rho=st.floats(1e-3, 1e3))
    def test_reconstruction_invariant(self, d, seed, rho):
        rng = np.random.default_rng(seed)
        G = rng.standard_normal((d, max(1, d // 2)))
        A = G @ G.T  # PSD, possibly singular
        F = cholesky_factorize(A, rho)
        M = A + rho * np.eye(d)
        assert np.all(np.diag(F.R) > 0)
        assert np.all(np.tril(F.R, -1) == 0)
        assert np.abs(F.R.T @ F.R - M).max() <= 1e-10 * (1 + np.abs(M).max())


class TestCholeskySolve:
    def test_scaled_identity(self):
        F = cholesky_factorize(np.eye(2), 3.0)
        np.testing.assert_allclose(cholesky_solve(F, [4.0, 8.0]), [1.0, 2.0])

    def test_hand_2x2(self):
        F = cholesky_factorize(np.array([[4.0, 2.0], [2.0, 3.0]]), 0.0)
        np.testing.assert_allclose(cholesky_solve(F, [4.0, 2.0]), [1.0, 0.0], atol=1e-15)

    def test_homogeneous(self, rng):
        F = cholesky_factorize(random_spd(5, rng), 0.7)
        assert np.all(cholesky_solve(F, np.zeros(5)) == 0)
        assert np.all(cholesky_solve(F, np.zeros((5, 3))) == 0)

    def test_shape_mismatch(self):
        F = cholesky_factorize(np.eye(2), 1.0)
        with pytest.raises(DimensionMismatch):
            cholesky_solve(F, np.ones(3))

    def test_block_matches_columns(self, rng):
        F = cholesky_factorize(random_spd(6, rng), 0.5)
        B = rng.standard_normal((6, 4))
        W = cholesky_solve(F, B)
        for n in range(4):
            np.testing.assert_array_equal(W[:, n], cholesky_solve(F, B[:, n]))

    @settings(max_examples=40, deadline=None)
    @given(d=st.integers(1, 64), n=st.integers(1, 5), seed=st.integers(0, 2**32 - 1))
    def test_reproduces_rhs(self, d, n, seed):
        rng = np.random.default_rng(seed)
        A = random_spd(d, rng)
        rho = 0.3
        F = cholesky_factorize(A, rho)
        rhs = rng.standard_normal((d, n))
        W = cholesky_solve(F, rhs)
        back = (A + rho * np.eye(d)) @ W
        assert np.linalg.norm(back - rhs) <= 1e-8 * np.linalg.norm(rhs)


class TestEigenExtremes:
    def test_diagonal(self):
        e = eigen_extremes(np.diag([1.0, 4.0]))
        assert (e.sigma_min_nonzero, e.sigma_max) == pytest.approx((1.0, 4.0))

    def test_zero_eigenvalue_excluded(self):
        A = np.diag([0.0, 9.0])
        e = eigen_extremes(A)
        assert (e.sigma_min_nonzero, e.sigma_max) == pytest.approx((9.0, 9.0))
        w = jacobi_eigenvalues(A)
        assert e.sigma_min_nonzero == pytest.approx(w[w > 1e-10 * w[-1]][0])

    @pytest.mark.parametrize("d", [1, 3, 17])
    def test_identity(self, d):
        e = eigen_extremes(np.eye(d))
        assert (e.sigma_min_nonzero, e.sigma_max) == pytest.approx((1.0, 1.0))

    def test_zero_matrix(self):
        with pytest.raises(ZeroMatrix):
            eigen_extremes(np.zeros((3, 3)))

    @pytest.mark.parametrize("seed", range(8))
    def test_against_jacobi_oracle(self, seed):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(2, 33))
        rank = int(rng.integers(1, d + 1))
        G = rng.standard_normal((d, rank))
        A = G @ G.T
        w = jacobi_eigenvalues(A)
        nonzero = w[w > 1e-10 * w[-1]]
        e = eigen_extremes(A)
        assert e.sigma_max == pytest.approx(w[-1], rel=1e-6)
        assert e.sigma_min_nonzero == pytest.approx(nonzero[0], rel=1e-6)

    def test_iterative_path_large_dimension(self):
        rng = np.random.default_rng(7)
        d = 150
        Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
        lam = np.concatenate([[0.0, 0.0], np.linspace(0.5, 5.0, d - 3), [40.0]])
        A = (Q * lam) @ Q.T
        A = 0.5 * (A + A.T)
        e = eigen_extremes(A, tol=1e-10)
        assert e.sigma_max == pytest.approx(40.0, rel=1e-6)
        assert e.sigma_min_nonzero == pytest.approx(0.5, rel=1e-6)


class TestCG:
    def test_scaled_identity_one_iteration(self):
        x = cg_solve(np.eye(2), 1.0, [2.0, 2.0], np.zeros(2), 1, 1e-12)
        np.testing.assert_allclose(x, [1.0, 1.0])

    def test_matches_cholesky(self, rng):
        A = np.array([[4.0, 2.0], [2.0, 3.0]])
        rhs = rng.standard_normal(2)
        ref = cholesky_solve(cholesky_factorize(A, 0.5), rhs)
        x = cg_solve(A, 0.5, rhs, np.zeros(2), 50, 1e-12)
        M = A + 0.5 * np.eye(2)
        assert np.linalg.norm(M @ x - rhs) <= 1e-12 * np.linalg.norm(rhs)
        np.testing.assert_allclose(x, ref, rtol=1e-10)

    def test_warm_start_at_solution_returns_it(self, rng):
        A = random_spd(5, rng)
        x_star = rng.standard_normal(5)
        rhs = (A + np.eye(5)) @ x_star
        # rounding leaves a residual far below the tolerance
        x = cg_solve(A, 1.0, rhs, x_star, 10, 1e-12)
        np.testing.assert_array_equal(x, x_star)

    def test_block_columns_independent(self, rng):
        A = random_spd(8, rng)
        rhs = rng.standard_normal((8, 3))
        X = cg_solve(A, 2.0, rhs, np.zeros((8, 3)), 3, 1e-10)
        for n in range(3):
            x = cg_solve(A, 2.0, rhs[:, n], np.zeros(8), 3, 1e-10)
            np.testing.assert_allclose(X[:, n], x, rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("seed", range(10))
    def test_agrees_with_cholesky_within_residual_tol(self, seed):
        rng = np.random.default_rng(seed)
        d = 20
        A = random_spd(d, rng)
        rho = 1.5
        rhs = rng.standard_normal(d)
        tol = 1e-9
        x = cg_solve(A, rho, rhs, np.zeros(d), 500, tol)
        ref = cholesky_solve(cholesky_factorize(A, rho), rhs)
        M = A + rho * np.eye(d)
        assert np.linalg.norm(M @ x - rhs) <= tol * np.linalg.norm(rhs)
        # error bounded by condition number times relative residual
        cond = np.linalg.cond(M)
        assert np.linalg.norm(x - ref) <= cond * tol * np.linalg.norm(ref)

    def test_inexact_when_capped(self, rng):
        A = random_spd(30, rng)
        rhs = rng.standard_normal(30)
        x = cg_solve(A, 0.1, rhs, np.zeros(30), 2, 1e-14)
        M = A + 0.1 * np.eye(30)
        assert np.linalg.norm(M @ x - rhs) > 1e-14 * np.linalg.norm(rhs)

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            cg_solve(np.eye(2), 1.0, np.ones(2), np.ones(3), 5, 1e-8)
        with pytest.raises(NonFiniteValue):
            cg_solve(np.eye(2), 1.0, [np.nan, 1.0], np.zeros(2), 5, 1e-8)


def test_as_sym_matrix_symmetrizes_and_freezes():
    A = as_sym_matrix([[1.0, 2.0 + 1e-14], [2.0, 1.0]])
    assert np.array_equal(A, A.T)
    assert not A.flags.writeable
    with pytest.raises(NonFiniteValue):
        as_sym_matrix([[np.inf]])
    with pytest.raises(DimensionMismatch):
        as_sym_matrix(np.ones((2, 3)))
