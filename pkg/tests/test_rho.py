import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proxbqp.generate import random_spd
from proxbqp.linalg import eigen_extremes
from proxbqp.rho import default_rho, resolve_rho, validate_rho


@pytest.mark.parametrize("A, expected", [
    (np.diag([1.0, 4.0]), 2.0),
    (np.eye(4), 1.0),
    # zero eigenvalue excluded: sqrt(9 * 9)
    (np.diag([0.0, 9.0]), 9.0),
])
def test_examples(A, expected):
    assert default_rho(A) == pytest.approx(expected)


def test_zero_matrix_falls_back_to_one():
    assert default_rho(np.zeros((3, 3))) == 1.0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 12),
       c=st.floats(1e-3, 1e3))
def test_homogeneous_and_bracketed(seed, d, c):
    A = random_spd(d, np.random.default_rng(seed))
    r = default_rho(A)
    assert default_rho(c * A) == pytest.approx(c * r, rel=1e-9)
    e = eigen_extremes(A)
    assert e.sigma_min_nonzero * (1 - 1e-12) <= r <= e.sigma_max * (1 + 1e-12)


def test_policy_validation():
    assert validate_rho("AUTO") == "auto"
    assert validate_rho(2) == 2.0
    for bad in (0, -1.0, float("inf"), "fast"):
        with pytest.raises(ValueError):
            validate_rho(bad)
    assert resolve_rho(0.5, np.eye(2)) == 0.5
    assert resolve_rho("auto", np.diag([1.0, 4.0])) == pytest.approx(2.0)
