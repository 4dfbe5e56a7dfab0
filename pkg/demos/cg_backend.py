"""Swap the Cholesky x-update for a few conjugate-gradient steps.

For large ``D`` a factorization may be too costly.  The CG backend runs
a handful of Jacobi-preconditioned CG iterations per ADMM step, warm
started from the previous x.  The outer loop absorbs the inexactness, so
the answer matches the exact backend to within the tolerance.
"""

import numpy as np

from proxbqp import SolverConfig, factorization_count, solve
from proxbqp.generate import random_problem

rng = np.random.default_rng(11)
problem = random_problem(64, rng)

before = factorization_count()
exact = solve(problem, SolverConfig(tol=1e-6))
cg = solve(problem, SolverConfig(tol=1e-6, backend="cg"))
print(f"cholesky: {exact.iterations} iterations")
print(f"cg:       {cg.iterations} iterations")
print(f"factorizations: {factorization_count() - before} (the cholesky run only)")
print(f"max |z_chol - z_cg| = {np.abs(exact.z - cg.z).max():.1e}")

for inner in (1, 2, 5, 20):
    sol = solve(problem, SolverConfig(tol=1e-6, backend="cg", cg_inner_iters=inner))
    print(f"  {inner:>2} CG steps per iteration -> {sol.iterations} ADMM iterations")
