"""Seeded random instances for benchmarks, tests and demos."""

import numpy as np

from .problem import BatchProblem, ProxBQProblem


def random_spd(d, rng, cond=100.0):
    """``Q^T diag(lam) Q`` with ``Q`` orthogonal and ``lam`` log-uniform in ``[1, cond]``."""
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    Q = Q * np.sign(np.diag(R))
    lam = np.exp(rng.uniform(0.0, np.log(cond), d))
    A = (Q * lam) @ Q.T
    return 0.5 * (A + A.T)


def random_problem(d, rng, mu=1.0, cond=100.0):
    """Gaussian ``b``, ``v`` and bounds from sorted Gaussian pairs."""
    A = random_spd(d, rng, cond)
    b = rng.standard_normal(d)
    v = rng.standard_normal(d)
    l, u = np.sort(rng.standard_normal((2, d)), axis=0)
    return ProxBQProblem(A, b, v, l, u, mu)


def bench_batch(n, d, seed, mu=1.0):
    """Benchmark batch: shared well-conditioned ``A``, bounds ``[0, 1]``.

    ``A`` has eigenvalues log-uniform in ``[1, 100]``; ``b`` and ``v`` are
    standard Gaussian with ``v`` clipped to ``[0, 1]``.
    """
    rng = np.random.default_rng(seed)
    A = random_spd(d, rng)
    B = rng.standard_normal((d, n))
    V = np.clip(rng.standard_normal((d, n)), 0.0, 1.0)
    return BatchProblem(A=A, B=B, V=V, L=np.zeros(d), U=np.ones(d), mu=mu)
