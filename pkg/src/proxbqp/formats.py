"""Line-oriented text formats for problem sets and solutions.

Problem set, QP form::

    proxbqp-problems 1
    form qp
    dim 2
    count 3
    bounds shared        # or: columns
    mu shared            # or: columns
    A 2 2
    4 2
    2 3
    B 2 3
    ...                  # then V (D x N), L and U (D x 1 or D x N), MU (1 x 1 or 1 x N)

Hashing form replaces ``bounds``/``mu`` with ``rows M`` and the sections
with ``C`` (M x D), ``TARGETS`` (M x N), ``V`` (D x N) and ``MU`` (1 x 1).

A section starts with ``NAME rows cols`` and is followed by exactly
``rows`` lines of ``cols`` whitespace-separated numbers.  ``#`` starts a
comment; blank lines are ignored.  Numbers are written with ``repr`` so
files round-trip exactly.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidProblem, ParseError, ValidationError
from .hashapp import HashSubproblemSet
from .problem import BatchProblem
from .solver import Status

__all__ = [
    "SolutionRecord",
    "parse_problem_set",
    "parse_solution",
    "write_problem_set",
    "write_solution",
]

PROBLEM_MAGIC = "proxbqp-problems"
SOLUTION_MAGIC = "proxbqp-solution"
FORMAT_VERSION = 1

_QP_SECTIONS = ("A", "B", "V", "L", "U", "MU")
_HASH_SECTIONS = ("C", "TARGETS", "V", "MU")
_SOLUTION_SECTIONS = ("Z", "ITERATIONS", "STATUS", "KKT")


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield lineno, tokens


def _read(text, magic, header_keys, section_names, numeric=True):
    """Split a document into its header dict and raw section matrices."""
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file", line=1)
    lineno, tokens = lines[0]
    if len(tokens) != 2 or tokens[0] != magic:
        raise ParseError(f"expected header '{magic} {FORMAT_VERSION}'", line=lineno)
    if tokens[1] != str(FORMAT_VERSION):
        raise ParseError(f"unsupported format version {tokens[1]!r}",
                         line=lineno, field="version")
    header, sections = {}, {}
    i = 1
    while i < len(lines):
        lineno, tokens = lines[i]
        key = tokens[0]
        if key in section_names:
            if key in sections:
                raise ParseError("duplicate section", line=lineno, field=key)
            if len(tokens) != 3:
                raise ParseError("section header must be 'NAME rows cols'",
                                 line=lineno, field=key)
            try:
                rows, cols = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise ParseError("section size must be integers",
                                 line=lineno, field=key) from None
            if rows < 0 or cols < 0 or i + rows >= len(lines):
                raise ParseError(f"section needs {rows} data lines",
                                 line=lineno, field=key)
            data = []
            for r in range(rows):
                dline, dtok = lines[i + 1 + r]
                if len(dtok) != cols:
                    raise ParseError(f"expected {cols} values, got {len(dtok)}",
                                     line=dline, field=key)
                if numeric:
                    try:
                        dtok = [float(t) for t in dtok]
                    except ValueError as exc:
                        raise ParseError(str(exc), line=dline, field=key) from None
                data.append(dtok)
            sections[key] = (lineno, data, (rows, cols))
            i += rows + 1
        elif key in header_keys:
            if key in header or sections:
                raise ParseError("header keys must precede sections and appear once",
                                 line=lineno, field=key)
            if len(tokens) != 2:
                raise ParseError("header line must be 'key value'", line=lineno, field=key)
            header[key] = (lineno, tokens[1])
            i += 1
        else:
            raise ParseError(f"unknown key {key!r}", line=lineno)
    return header, sections


def _header_int(header, key):
    if key not in header:
        raise ParseError("missing header key", field=key)
    lineno, value = header[key]
    try:
        out = int(value)
    except ValueError:
        raise ParseError(f"expected an integer, got {value!r}", line=lineno, field=key) from None
    if out < 1:
        raise ParseError("must be >= 1", line=lineno, field=key)
    return out


def _header_choice(header, key, choices):
    if key not in header:
        raise ParseError("missing header key", field=key)
    lineno, value = header[key]
    if value not in choices:
        raise ParseError(f"expected one of {choices}, got {value!r}", line=lineno, field=key)
    return value


def _section(sections, name, shapes):
    if name not in sections:
        raise ParseError("missing section", field=name)
    lineno, data, shape = sections[name]
    if shape not in shapes:
        want = " or ".join(f"{r} {c}" for r, c in shapes)
        raise ParseError(f"section shape {shape[0]} {shape[1]}, expected {want}",
                         line=lineno, field=name)
    return np.array(data, dtype=float).reshape(shape)


def parse_problem_set(path):
    """Read a problem-set file into a BatchProblem or HashSubproblemSet.

    Raises
    ------
    ParseError
        Malformed content, with the offending line and field.
    ValidationError
        Well-formed content describing an invalid problem.
    """
    with open(path) as fh:
        text = fh.read()
    return loads_problem_set(text)


def loads_problem_set(text):
    header, sections = _read(
        text, PROBLEM_MAGIC, ("form", "dim", "count", "bounds", "mu", "rows"),
        _QP_SECTIONS + _HASH_SECTIONS)
    form = _header_choice(header, "form", ("qp", "hash"))
    D = _header_int(header, "dim")
    N = _header_int(header, "count")
    allowed = _QP_SECTIONS if form == "qp" else _HASH_SECTIONS
    for name, (lineno, _, _) in sections.items():
        if name not in allowed:
            raise ParseError(f"section not allowed in {form} form", line=lineno, field=name)
    try:
        if form == "qp":
            bounds = _header_choice(header, "bounds", ("shared", "columns"))
            mu_mode = _header_choice(header, "mu", ("shared", "columns"))
            bshape = (D, 1) if bounds == "shared" else (D, N)
            A = _section(sections, "A", [(D, D)])
            B = _section(sections, "B", [(D, N)])
            V = _section(sections, "V", [(D, N)])
            L = _section(sections, "L", [bshape])
            U = _section(sections, "U", [bshape])
            mu = _section(sections, "MU", [(1, 1) if mu_mode == "shared" else (1, N)])
            if bounds == "shared":
                L, U = L[:, 0], U[:, 0]
            mu = float(mu[0, 0]) if mu_mode == "shared" else mu[0]
            _check_symmetric(A)
            return BatchProblem(A=A, B=B, V=V, L=L, U=U, mu=mu)
        M = _header_int(header, "rows")
        C = _section(sections, "C", [(M, D)])
        T = _section(sections, "TARGETS", [(M, N)])
        V = _section(sections, "V", [(D, N)])
        mu = _section(sections, "MU", [(1, 1)])
        return HashSubproblemSet(C=C, targets=T, V=V, mu=float(mu[0, 0]))
    except (InvalidProblem, ValueError) as exc:
        if isinstance(exc, (ParseError, ValidationError)):
            raise
        raise ValidationError(str(exc)) from exc


def _check_symmetric(A):
    if not np.all(np.isfinite(A)):
        raise ValidationError("A contains NaN or Inf")
    asym = np.abs(A - A.T)
    if asym.max() > 1e-12:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        raise ValidationError(f"A is not symmetric at entry ({i}, {j})")


def _fmt_rows(arr):
    arr = np.atleast_2d(arr)
    return [" ".join(repr(float(x)) for x in row) for row in arr]


def _section_lines(name, arr):
    arr = np.atleast_2d(arr)
    return [f"{name} {arr.shape[0]} {arr.shape[1]}", *_fmt_rows(arr)]


def dumps_problem_set(obj):
    lines = [f"{PROBLEM_MAGIC} {FORMAT_VERSION}"]
    if isinstance(obj, HashSubproblemSet):
        M, D = obj.C.shape
        lines += ["form hash", f"dim {D}", f"count {obj.count}", f"rows {M}"]
        lines += _section_lines("C", obj.C)
        lines += _section_lines("TARGETS", obj.targets)
        lines += _section_lines("V", obj.V)
        lines += _section_lines("MU", [[obj.mu]])
    elif isinstance(obj, BatchProblem):
        lines += ["form qp", f"dim {obj.dim}", f"count {obj.count}",
                  f"bounds {'shared' if obj.shared_bounds else 'columns'}",
                  f"mu {'shared' if obj.shared_mu else 'columns'}"]
        lines += _section_lines("A", obj.A)
        lines += _section_lines("B", obj.B)
        lines += _section_lines("V", obj.V)
        L, U = obj.bound_blocks()
        lines += _section_lines("L", L)
        lines += _section_lines("U", U)
        mu = [[obj.mu]] if obj.shared_mu else obj.mu[None, :]
        lines += _section_lines("MU", mu)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def write_problem_set(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps_problem_set(obj))


@dataclass
class SolutionRecord:
    Z: np.ndarray
    iterations: np.ndarray
    statuses: list
    rho: float
    wall_time: float
    kkt_residuals: np.ndarray
    binarized: bool = False

    @property
    def kkt_max(self):
        finite = self.kkt_residuals[np.isfinite(self.kkt_residuals)]
        return float(finite.max()) if finite.size else float("nan")


def dumps_solution(record):
    D, N = record.Z.shape
    lines = [
        f"{SOLUTION_MAGIC} {FORMAT_VERSION}",
        f"dim {D}",
        f"count {N}",
        f"rho {record.rho!r}",
        f"wall_time {record.wall_time!r}",
        f"kkt_max {record.kkt_max!r}",
        f"binarized {int(record.binarized)}",
    ]
    lines += _section_lines("Z", record.Z)
    lines += [f"ITERATIONS 1 {N}", " ".join(str(int(k)) for k in record.iterations)]
    lines += [f"STATUS 1 {N}", " ".join(str(getattr(s, "value", s)) for s in record.statuses)]
    lines += _section_lines("KKT", record.kkt_residuals[None, :])
    return "\n".join(lines) + "\n"


def write_solution(record, path):
    with open(path, "w") as fh:
        fh.write(dumps_solution(record))


def parse_solution(path):
    with open(path) as fh:
        text = fh.read()
    return loads_solution(text)


def loads_solution(text):
    header, sections = _read(
        text, SOLUTION_MAGIC,
        ("dim", "count", "rho", "wall_time", "kkt_max", "binarized"),
        _SOLUTION_SECTIONS, numeric=False)
    D = _header_int(header, "dim")
    N = _header_int(header, "count")

    def num(key):
        if key not in header:
            raise ParseError("missing header key", field=key)
        lineno, value = header[key]
        try:
            return float(value)
        except ValueError:
            raise ParseError(f"expected a number, got {value!r}",
                             line=lineno, field=key) from None

    def raw(name, shape):
        if name not in sections:
            raise ParseError("missing section", field=name)
        lineno, data, got = sections[name]
        if got != shape:
            raise ParseError(f"section shape {got}, expected {shape}",
                             line=lineno, field=name)
        return lineno, data

    def floats(name, shape):
        lineno, data = raw(name, shape)
        try:
            return np.array(data, dtype=float).reshape(shape)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, field=name) from None

    Z = floats("Z", (D, N))
    kkt = floats("KKT", (1, N))[0]
    lineno, data = raw("ITERATIONS", (1, N))
    try:
        iterations = np.array([int(t) for t in data[0]])
    except ValueError as exc:
        raise ParseError(str(exc), line=lineno, field="ITERATIONS") from None
    lineno, data = raw("STATUS", (1, N))
    try:
        statuses = [Status(t) for t in data[0]]
    except ValueError as exc:
        raise ParseError(str(exc), line=lineno, field="STATUS") from None
    return SolutionRecord(
        Z=Z,
        iterations=iterations,
        statuses=statuses,
        rho=num("rho"),
        wall_time=num("wall_time"),
        kkt_residuals=kkt,
        binarized=bool(int(num("binarized"))),
    )
