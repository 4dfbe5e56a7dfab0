import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proxbqp import BatchProblem, HashSubproblemSet, Status
from proxbqp.errors import ParseError, ValidationError
from proxbqp.formats import (
    SolutionRecord,
    dumps_problem_set,
    dumps_solution,
    loads_problem_set,
    loads_solution,
    parse_problem_set,
    write_problem_set,
)

GOLDEN = """\
proxbqp-problems 1
# one scalar problem, solution 1/6
form qp
dim 1
count 1
bounds shared
mu shared
A 1 1
2.0
B 1 1
0.0
V 1 1
0.5
L 1 1
0.0
U 1 1
1.0
MU 1 1
1.0
"""


def test_golden_file():
    batch = loads_problem_set(GOLDEN)
    assert isinstance(batch, BatchProblem)
    np.testing.assert_array_equal(batch.A, [[2.0]])
    np.testing.assert_array_equal(batch.V, [[0.5]])
    assert batch.shared_bounds and batch.shared_mu
    assert batch.mu == 1.0


def test_file_round_trip(tmp_path):
    path = tmp_path / "p.txt"
    write_problem_set(loads_problem_set(GOLDEN), path)
    assert dumps_problem_set(parse_problem_set(path)) == dumps_problem_set(loads_problem_set(GOLDEN))


def test_inverted_bounds_name_coordinate():
    bad = GOLDEN.replace("L 1 1\n0.0", "L 1 1\n2.0")
    with pytest.raises(ValidationError, match="coordinate 0"):
        loads_problem_set(bad)


def test_asymmetric_matrix_rejected():
    text = dumps_problem_set(BatchProblem(A=np.eye(2), B=np.zeros((2, 1)), V=np.zeros((2, 1)),
                                          L=0, U=1, mu=1.0))
    text = text.replace("A 2 2\n1.0 0.0", "A 2 2\n1.0 0.001")
    with pytest.raises(ValidationError, match=r"entry \(0, 1\)"):
        loads_problem_set(text)


def test_hash_form():
    T = np.arange(6.0).reshape(3, 2)
    s = HashSubproblemSet(C=np.eye(3), targets=T, V=np.zeros((3, 2)), mu=0.5)
    back = loads_problem_set(dumps_problem_set(s))
    assert isinstance(back, HashSubproblemSet)
    np.testing.assert_array_equal(back.C, np.eye(3))
    np.testing.assert_array_equal(back.targets, T)
    assert back.mu == 0.5


@pytest.mark.parametrize("text, line, field", [
    (GOLDEN.replace("0.5\n", "abc\n"), 13, "V"),
    (GOLDEN.replace("dim 1", "dim x"), 4, "dim"),
    (GOLDEN.replace("form qp", "form lp"), 3, "form"),
    (GOLDEN.replace("B 1 1\n0.0", "B 1 1\n0.0 1.0"), 11, "B"),
])
def test_parse_error_location(text, line, field):
    with pytest.raises(ParseError) as info:
        loads_problem_set(text)
    assert info.value.line == line
    assert info.value.field == field
    assert f"line {line}" in str(info.value)


def test_missing_magic():
    with pytest.raises(ParseError):
        loads_problem_set(GOLDEN.split("\n", 1)[1])


def test_truncated_section():
    with pytest.raises(ParseError):
        loads_problem_set(GOLDEN.rsplit("\n", 2)[0] + "\n")


finite = st.floats(-1e6, 1e6, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 5), n=st.integers(1, 4), shared=st.booleans(),
       seed=st.integers(0, 2**32 - 1), scale=finite)
def test_problem_round_trip(d, n, shared, seed, scale):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((d, d))
    A = G @ G.T
    A = (A + A.T) / 2
    shape = (2, d) if shared else (2, d, n)
    L, U = np.sort(rng.standard_normal(shape), axis=0)
    mu = 1.5 if shared else rng.uniform(0.1, 3, n)
    batch = BatchProblem(A=A, B=scale * rng.standard_normal((d, n)),
                         V=rng.standard_normal((d, n)), L=L, U=U, mu=mu)
    back = loads_problem_set(dumps_problem_set(batch))
    for name in ("A", "B", "V", "L", "U", "mu"):
        np.testing.assert_array_equal(getattr(back, name), getattr(batch, name))


def test_solution_round_trip():
    rec = SolutionRecord(Z=np.array([[0.1, 1 / 3], [0.0, 1.0]]), iterations=np.array([4, 10000]),
                         statuses=[Status.CONVERGED, Status.MAX_ITERS], rho=1 / 7,
                         wall_time=0.25, kkt_residuals=np.array([1e-9, 3e-3]))
    back = loads_solution(dumps_solution(rec))
    np.testing.assert_array_equal(back.Z, rec.Z)
    np.testing.assert_array_equal(back.iterations, rec.iterations)
    assert back.statuses == rec.statuses
    assert back.rho == rec.rho
    np.testing.assert_array_equal(back.kkt_residuals, rec.kkt_residuals)
    assert back.kkt_max == 3e-3
    assert not back.binarized


def test_solution_with_failed_column():
    rec = SolutionRecord(Z=np.array([[np.nan, 0.5]]), iterations=np.array([0, 3]),
                         statuses=[Status.FAILED, Status.CONVERGED], rho=1.0,
                         wall_time=0.0, kkt_residuals=np.array([np.nan, 0.0]))
    back = loads_solution(dumps_solution(rec))
    assert back.statuses[0] is Status.FAILED
    assert np.isnan(back.Z[0, 0])
    assert back.kkt_max == 0.0
