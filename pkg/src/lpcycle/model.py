"""LP instances in detached-coefficient form and the tableau pivot.

The canonical orientation is maximization of ``c.x`` subject to
``Mx <= b``, ``x >= 0``.  The tableau's objective row stores ``-c`` updated
by elimination, so entering candidates have negative entries, exactly as
the tableaux are usually printed.

Variable, row and column indices are 0-based in the API.  Text output
(CSV logs, MPS names) uses 1-based names ``x1, x2, ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numeric import (
    Backend,
    DecimalParseError,
    Scalar,
    common_backend,
    format_decimal,
    format_scalar,
    to_decimal_string,
)


class ModelError(ValueError):
    pass


class PivotError(ModelError):
    pass


@dataclass
class LpInstance:
    """``max c.x  s.t.  matrix @ x <= rhs, x >= 0``."""

    objective: list
    matrix: list
    rhs: list
    name: str = "lp"

    def __post_init__(self):
        self.objective = list(self.objective)
        self.matrix = [list(row) for row in self.matrix]
        self.rhs = list(self.rhs)
        n = len(self.objective)
        if len(self.rhs) != len(self.matrix):
            raise ModelError(f"{len(self.matrix)} constraint rows but {len(self.rhs)} rhs entries")
        for i, row in enumerate(self.matrix):
            if len(row) != n:
                raise ModelError(f"row {i + 1} has {len(row)} entries, expected {n}")
        common_backend(self._scalars())

    def _scalars(self):
        yield from self.objective
        yield from self.rhs
        for row in self.matrix:
            yield from row

    @property
    def num_structural(self) -> int:
        return len(self.objective)

    @property
    def num_constraints(self) -> int:
        return len(self.matrix)

    @property
    def backend(self) -> Backend:
        return common_backend(self._scalars()) or Backend.EXACT

    def as_backend(self, backend: Backend) -> "LpInstance":
        conv = backend.convert
        return LpInstance(
            [conv(v) for v in self.objective],
            [[conv(v) for v in row] for row in self.matrix],
            [conv(v) for v in self.rhs],
            self.name,
        )


@dataclass
class Tableau:
    body: list  # num_rows x num_vars constraint coefficients
    rhs: list  # current B^-1 b
    objective_row: list  # reduced costs d; candidates have d_j < 0
    basis: list  # basis[i] = variable basic in row i
    values: list  # current value of every variable
    costs: list  # original maximization costs over all variables
    iteration: int = 0

    @property
    def num_rows(self) -> int:
        return len(self.body)

    @property
    def num_vars(self) -> int:
        return len(self.objective_row)

    @property
    def backend(self) -> Backend:
        return common_backend(self.objective_row) or Backend.EXACT

    def column(self, j: int) -> list:
        return [row[j] for row in self.body]

    def is_basic(self, j: int) -> bool:
        return j in self.basis

    def nonbasic(self) -> list[int]:
        basic = set(self.basis)
        return [j for j in range(self.num_vars) if j not in basic]

    @property
    def basis_key(self) -> tuple:
        return tuple(self.basis)

    def objective_value(self) -> Scalar:
        return sum((c * x for c, x in zip(self.costs, self.values)), self.backend.zero)

    def copy(self, **changes) -> "Tableau":
        fields = dict(
            body=[list(r) for r in self.body],
            rhs=list(self.rhs),
            objective_row=list(self.objective_row),
            basis=list(self.basis),
            values=list(self.values),
            costs=list(self.costs),
            iteration=self.iteration,
        )
        fields.update(changes)
        return Tableau(**fields)

    def check_basis(self) -> None:
        """Raise ModelError unless the basic columns form an identity with zero reduced cost."""
        if len(set(self.basis)) != len(self.basis):
            raise ModelError(f"repeated variable in basis {self.basis}")
        for i, j in enumerate(self.basis):
            col = self.column(j)
            if any(v != (1 if k == i else 0) for k, v in enumerate(col)) or self.objective_row[j] != 0:
                raise ModelError(f"basic column x{j + 1} is not a unit column")


def to_tableau(instance: LpInstance) -> Tableau:
    """Append one slack per constraint and start from the all-slack basis."""
    m, n = instance.num_constraints, instance.num_structural
    zero, one = instance.backend.zero, instance.backend.one
    body = [list(row) + [one if k == i else zero for k in range(m)] for i, row in enumerate(instance.matrix)]
    values = [zero] * n + list(instance.rhs)
    return Tableau(
        body=body,
        rhs=list(instance.rhs),
        objective_row=[-c for c in instance.objective] + [zero] * m,
        basis=list(range(n, n + m)),
        values=values,
        costs=list(instance.objective) + [zero] * m,
    )


def pivot(t: Tableau, row: int, col: int) -> Tableau:
    """Gauss-Jordan pivot on ``body[row][col]``.

    Returns a new tableau; ``values`` are carried over unchanged since
    moving the variables is the ratio test's job.
    """
    if t.is_basic(col):
        raise PivotError(f"x{col + 1} is already basic")
    p = t.body[row][col]
    if p == 0:
        raise PivotError(f"zero pivot at row {row + 1}, column {col + 1}")
    prow = [v / p for v in t.body[row]]
    prhs = t.rhs[row] / p
    body, rhs = [], []
    for i, r in enumerate(t.body):
        if i == row:
            body.append(prow)
            rhs.append(prhs)
            continue
        f = r[col]
        if f == 0:
            body.append(list(r))
            rhs.append(t.rhs[i])
        else:
            body.append([a - f * b for a, b in zip(r, prow)])
            rhs.append(t.rhs[i] - f * prhs)
    f = t.objective_row[col]
    obj = [a - f * b for a, b in zip(t.objective_row, prow)] if f != 0 else list(t.objective_row)
    basis = list(t.basis)
    basis[row] = col
    return Tableau(body, rhs, obj, basis, list(t.values), list(t.costs), t.iteration)


def cyclic_shift_equal(t1: Tableau, t2: Tableau, shift: int, num_cycling_cols: int = 6) -> bool:
    """True iff ``t2`` equals ``t1`` with its first columns shifted cyclically right.

    Column ``j`` of ``t1`` must equal column ``(j + shift) % num_cycling_cols``
    of ``t2`` in every constraint row and the objective row; remaining
    columns and the rhs must match unshifted.
    """
    if t1.num_rows != t2.num_rows or t1.num_vars != t2.num_vars:
        raise ModelError("tableaux differ in shape")
    if num_cycling_cols > t1.num_vars:
        raise ModelError("more cycling columns than variables")
    k = num_cycling_cols

    def dest(j):
        return (j + shift) % k if j < k else j

    rows1 = t1.body + [t1.objective_row]
    rows2 = t2.body + [t2.objective_row]
    for r1, r2 in zip(rows1, rows2):
        if any(r1[j] != r2[dest(j)] for j in range(t1.num_vars)):
            return False
    return list(t1.rhs) == list(t2.rhs)


def var_name(j: int) -> str:
    return f"x{j + 1}"


# -- instance text format ---------------------------------------------------
#
#   maximize
#   constraints m
#   vars n
#   <objective: n numbers>
#   <m matrix rows of n numbers>
#   <rhs: m numbers>
#
# Numbers are decimals or exact quotients "p/q"; '#' starts a comment.


def format_instance(instance: LpInstance) -> str:
    def num(v):
        if isinstance(v, float):
            return repr(v)
        return to_decimal_string(Fraction(v)) or format_scalar(v)

    lines = [
        f"# {instance.name}",
        "maximize",
        f"constraints {instance.num_constraints}",
        f"vars {instance.num_structural}",
        " ".join(num(v) for v in instance.objective),
    ]
    lines += [" ".join(num(v) for v in row) for row in instance.matrix]
    lines.append(" ".join(num(v) for v in instance.rhs))
    return "\n".join(lines) + "\n"


def parse_instance(text: str, backend: Backend = Backend.EXACT, name: str | None = None) -> LpInstance:
    lines = []
    found_name = None
    for raw in text.splitlines():
        body, _, comment = raw.partition("#")
        if found_name is None and comment.strip() and not body.strip():
            found_name = comment.strip()
        if body.strip():
            lines.append(body.split())
    try:
        if lines[0] != ["maximize"]:
            raise ModelError("instance must start with 'maximize'")
        if lines[1][0] != "constraints" or lines[2][0] != "vars":
            raise ModelError("expected 'constraints m' and 'vars n' header lines")
        m, n = int(lines[1][1]), int(lines[2][1])
        data = lines[3:]
        if len(data) != m + 2:
            raise ModelError(f"expected {m + 2} data lines, found {len(data)}")
        conv = backend.parse
        objective = [conv(tok) for tok in data[0]]
        matrix = [[conv(tok) for tok in row] for row in data[1 : m + 1]]
        rhs = [conv(tok) for tok in data[m + 1]]
    except (IndexError, DecimalParseError) as exc:
        raise ModelError(f"malformed instance text: {exc}") from exc
    if len(objective) != n:
        raise ModelError(f"objective has {len(objective)} entries, expected {n}")
    return LpInstance(objective, matrix, rhs, name or found_name or "lp")


# -- MPS export -------------------------------------------------------------


def _mps_name(name: str) -> str:
    cleaned = "".join(ch if ch.isalnum() or ch in "_-." else "_" for ch in name)
    return cleaned[:8].upper() or "LP"


def export_mps(instance: LpInstance) -> str:
    """Fixed-format MPS.  MPS minimizes, so the COST row carries ``-c``."""
    m, n = instance.num_constraints, instance.num_structural
    rows = [f"R{i + 1}" for i in range(m)]
    cols = [f"X{j + 1}" for j in range(n)]

    def entry(col, row, value):
        return f"    {col:<8}  {row:<8}  {format_decimal(value):>12}"

    out = [
        "* maximize c.x is written as minimize (-c).x: COST holds the negated objective",
        f"NAME          {_mps_name(instance.name)}",
        "ROWS",
        " N  COST",
    ]
    out += [f" L  {r}" for r in rows]
    out.append("COLUMNS")
    for j, col in enumerate(cols):
        c = instance.objective[j]
        if c != 0:
            out.append(entry(col, "COST", -c))
        for i, r in enumerate(rows):
            a = instance.matrix[i][j]
            if a != 0:
                out.append(entry(col, r, a))
    out.append("RHS")
    for i, r in enumerate(rows):
        out.append(entry("RHS", r, instance.rhs[i]))
    out.append("BOUNDS")
    for col in cols:
        out.append(f" LO BND       {col:<8}  {format_decimal(instance.backend.zero):>12}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def structural_matrix(t: Tableau, num_structural: int) -> list:
    """Structural columns of the constraint body (inverse of ``to_tableau`` at the start)."""
    return [row[:num_structural] for row in t.body]


__all__ = [
    "LpInstance",
    "ModelError",
    "PivotError",
    "Tableau",
    "cyclic_shift_equal",
    "export_mps",
    "format_instance",
    "parse_instance",
    "pivot",
    "structural_matrix",
    "to_tableau",
    "var_name",
]
