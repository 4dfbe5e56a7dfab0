"""Solve one proximal box-constrained QP and check it two ways.

The problem is

    min_x  x^T A x / 2 - b^T x + mu/2 ||x - v||^2   s.t.  l <= x <= u

with a small random SPD ``A``.  We solve it by ADMM, then confirm the
answer with the KKT residual and with exhaustive active-set enumeration.
"""

import numpy as np

from proxbqp import SolverConfig, kkt_residual, oracle_solve, solve
from proxbqp.generate import random_problem

rng = np.random.default_rng(2)
problem = random_problem(5, rng, mu=1.0)

sol = solve(problem, SolverConfig(tol=1e-9))
print(f"status={sol.status.value} iterations={sol.iterations} rho={sol.rho:.4g}")
print("z      =", np.round(sol.z, 6))

# Every bound the solution touches should appear as an active coordinate.
active = np.isclose(sol.z, problem.l) | np.isclose(sol.z, problem.u)
print("active =", active.astype(int))

report = kkt_residual(problem, sol.z)
print(f"stationarity={report.stationarity_residual:.2e} "
      f"feasibility={report.feasibility_violation:.2e}")

# 3^5 candidate active sets is tiny; enumeration gives the exact answer.
exact = oracle_solve(problem)
print(f"max |z - exact| = {np.abs(sol.z - exact).max():.2e}")
