"""How the penalty rho affects speed but not the answer.

The default rho is sqrt(sigma_min * sigma_max) over the nonzero
eigenvalues of ``A``.  Sweeping rho over four orders of magnitude shows
the iteration count bottoming out near that value while the solution
stays the same.  The stop test measures step size, and a large rho takes
small steps, so a tight tolerance is used to keep the comparison fair.
"""

import numpy as np

from proxbqp import SolverConfig, default_rho, solve
from proxbqp.generate import random_problem

rng = np.random.default_rng(3)
problem = random_problem(16, rng, cond=1e3)
rho_star = default_rho(problem.A)
print(f"rho* = {rho_star:.4g}")

reference = solve(problem, SolverConfig(tol=1e-11, max_iters=100_000)).z
for factor in (0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0):
    sol = solve(problem, SolverConfig(rho=factor * rho_star, tol=1e-8, max_iters=100_000))
    err = np.abs(sol.z - reference).max()
    print(f"rho = {factor:>6g} rho*   iterations={sol.iterations:>6}   |z - z_ref| = {err:.1e}")
