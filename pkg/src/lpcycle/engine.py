"""Simplex driver: pricing + ratio test + pivot, with cycle detection.

A run with the standard ratio test stops as soon as a start-of-iteration
state (ordered basis and all variable values) repeats; the tableau is a
function of the ordered basis, so this is a proof of indefinite cycling.
EXPAND runs never repeat values, so they go to the iteration cap and
cycling is judged from the periodicity of the basis sequence.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field

from .family import CYCLE_COLUMNS, FamilyParams, closed_form_state
from .model import LpInstance, Tableau, pivot, to_tableau
from .numeric import Backend, Scalar, format_scalar, rel_close
from .pricing import PricingRule, select_column
from .ratio import (
    ExpandState,
    InfeasibleStateError,
    StepKind,
    apply_step,
    expand_ratio_test,
    expand_reset,
    standard_ratio_test,
)

DEFAULT_MAX_ITERS = 10000
PERIODS_REQUIRED = 20
TRAJECTORY_REL_TOL = 1e-9


class EngineError(RuntimeError):
    def __init__(self, message: str, iteration: int):
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration


class OutcomeKind(enum.Enum):
    CYCLES = "cycles"
    UNBOUNDED = "unbounded"
    OPTIMAL = "optimal"
    ITERATION_LIMIT = "limit"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    at: int | None = None  # iteration that found optimality / unboundedness
    period: int | None = None
    start: int | None = None  # first iteration of the repeating block
    empirical: bool = False  # cycling inferred from basis periodicity only

    @property
    def first_repeat_at(self) -> int | None:
        if self.kind is not OutcomeKind.CYCLES:
            return None
        return self.start + self.period

    def __str__(self) -> str:
        if self.kind is OutcomeKind.CYCLES:
            text = f"CYCLES period={self.period} start={self.start}"
            return text + " (basis periodicity)" if self.empirical else text
        if self.kind is OutcomeKind.ITERATION_LIMIT:
            return "ITERATION_LIMIT"
        return f"{self.kind.name} at={self.at}"


@dataclass(frozen=True)
class IterationRecord:
    n: int
    entering: int
    leaving: int | None
    pivot_row: int | None
    alpha: Scalar | None
    kind: StepKind
    objective: Scalar  # at the start of the iteration
    values: tuple  # at the start of the iteration
    basis_key: tuple  # at the start of the iteration


@dataclass
class RunReport:
    records: list
    outcome: Outcome
    final_basis: tuple
    final_values: tuple
    expand: bool
    pricing: PricingRule
    tableaux: list = field(default_factory=list)  # start-of-iteration tableaux, if kept

    @property
    def final_tableau(self) -> Tableau | None:
        return self.tableaux[-1] if self.tableaux else None


def iterate(t: Tableau, pricing: PricingRule, state: ExpandState | None = None):
    """One simplex iteration.

    Returns ``(tableau, state, record, terminal)`` where ``terminal`` is
    None or OPTIMAL/UNBOUNDED (and then the tableau is unchanged).
    """
    n = t.iteration + 1
    col = select_column(t, pricing)
    if col is None:
        return t, state, None, OutcomeKind.OPTIMAL
    if state is None:
        step = standard_ratio_test(t, col)
    else:
        try:
            step, state = expand_ratio_test(t, col, state)
        except InfeasibleStateError as exc:
            raise EngineError(str(exc), n) from exc
    if step.unbounded:
        return t, state, None, OutcomeKind.UNBOUNDED
    record = IterationRecord(
        n=n,
        entering=col,
        leaving=t.basis[step.row],
        pivot_row=step.row,
        alpha=step.alpha,
        kind=step.kind,
        objective=t.objective_value(),
        values=tuple(t.values),
        basis_key=t.basis_key,
    )
    values = apply_step(t, col, step)
    nxt = pivot(t, step.row, col)
    nxt.values = values
    nxt.iteration = n
    return nxt, state, record, None


def _first_repeat(states: list) -> tuple[int, int] | None:
    seen = {}
    for i, s in enumerate(states):
        if s in seen:
            return i - seen[s], seen[s] + 1
        seen[s] = i
    return None


def basis_periodicity(keys: list, periods_required: int = PERIODS_REQUIRED) -> tuple[int, int] | None:
    """Smallest ``p`` with ``keys`` p-periodic over ``periods_required`` consecutive periods.

    Returns ``(p, start)`` with ``start`` the 1-based position where the
    earliest such window begins.
    """
    n = len(keys)
    for p in range(1, n // periods_required + 1):
        need = periods_required * p
        run = 0
        for i in range(n - p):
            run = run + 1 if keys[i] == keys[i + p] else 0
            if run >= need:
                return p, i - need + 2
    return None


def detect_cycle(report: RunReport) -> tuple[int, int] | None:
    """``(period, start)`` of the cycle in a run, or None."""
    if not report.expand:
        states = [(r.basis_key, r.values) for r in report.records]
        states.append((report.final_basis, report.final_values))
        return _first_repeat(states)
    keys = [r.basis_key for r in report.records] + [report.final_basis]
    return basis_periodicity(keys)


def run(
    instance: LpInstance,
    pricing: PricingRule = PricingRule.DANTZIG,
    expand: ExpandState | None = None,
    max_iters: int = DEFAULT_MAX_ITERS,
    backend: Backend | None = None,
    keep_tableaux: bool = False,
) -> RunReport:
    """Run the simplex method from the all-slack basis.

    ``expand=None`` selects the standard ratio test; otherwise EXPAND with
    the given tolerance schedule (tau and u0 must use the run's backend).
    Resets happen every ``expand.reset_period`` iterations when set.
    """
    if backend is not None:
        instance = instance.as_backend(backend)
    if any(b < 0 for b in instance.rhs):
        raise ValueError("the origin must be feasible (rhs >= 0)")
    t = to_tableau(instance)
    exact = t.backend is Backend.EXACT
    state = expand
    records, tableaux = [], []
    seen = {}
    outcome = None
    for _ in range(max_iters):
        if state is not None and state.due_for_reset:
            t, state = expand_reset(t, state)
        if state is None:
            key = (t.basis_key, tuple(t.values))
            if key in seen:
                start = seen[key]
                outcome = Outcome(OutcomeKind.CYCLES, period=t.iteration - start, start=start + 1)
                break
            seen[key] = t.iteration
        if keep_tableaux:
            tableaux.append(t)
        t, state, record, terminal = iterate(t, pricing, state)
        if terminal is not None:
            outcome = Outcome(terminal, at=t.iteration + 1)
            break
        if exact:
            t.check_basis()
        records.append(record)
    if keep_tableaux and (not tableaux or tableaux[-1] is not t):
        tableaux.append(t)
    report = RunReport(records, outcome, t.basis_key, tuple(t.values), expand is not None, pricing, tableaux)
    if outcome is None:
        found = detect_cycle(report) if expand is not None else None
        if found:
            report.outcome = Outcome(OutcomeKind.CYCLES, period=found[0], start=found[1], empirical=True)
        else:
            report.outcome = Outcome(OutcomeKind.ITERATION_LIMIT)
    return report


# -- trajectory checks -----------------------------------------------------


@dataclass(frozen=True)
class Mismatch:
    n: int
    var: int  # 0-based
    expected: Scalar
    actual: Scalar

    def __str__(self) -> str:
        return f"iteration {self.n}, x{self.var + 1}: expected {format_scalar(self.expected)}, got {format_scalar(self.actual)}"


def verify_trajectory(report: RunReport, p: FamilyParams, tau: Scalar) -> list[Mismatch]:
    """Compare every start-of-iteration state with the closed-form values.

    Exact scalars must match exactly; floats to a relative 1e-9 (with
    ``tau`` as the magnitude floor for entries that should be zero).
    """
    states = [(r.n, r.values) for r in report.records]
    states.append((len(report.records) + 1, report.final_values))
    mismatches = []
    for n, values in states:
        expected = closed_form_state(p, tau, n)
        for j, (want, got) in enumerate(zip(expected, values[:CYCLE_COLUMNS])):
            if isinstance(got, float):
                ok = rel_close(got, want, TRAJECTORY_REL_TOL, floor=abs(tau))
            else:
                ok = got == want
            if not ok:
                mismatches.append(Mismatch(n, j, want, got))
    return mismatches


def follows_cycle_pattern(record: IterationRecord) -> bool:
    """Row 1 in odd iterations, row 2 in even ones, columns in 2/6 order."""
    return record.pivot_row == (record.n - 1) % 2 and record.entering == (record.n - 1) % CYCLE_COLUMNS


class PatternError(RuntimeError):
    pass


@dataclass(frozen=True)
class Escape:
    """The 2/6 pattern broke by a row-1 pivot in even iteration ``n``."""

    n: int
    unbounded_at: int


def classify_escape(report: RunReport) -> Escape | None:
    """Locate where an EXPAND run left the 2/6 pattern.

    Returns None for standard runs and for runs that never break.  Raises
    PatternError if the break is not a row-1 pivot in an even iteration or
    the run does not end unbounded within two further iterations.
    """
    if not report.expand:
        return None
    for r in report.records:
        if follows_cycle_pattern(r):
            continue
        if r.n % 2 != 0 or r.pivot_row != 0:
            raise PatternError(f"pattern broken at iteration {r.n} by row {r.pivot_row} pivot")
        out = report.outcome
        if out.kind is not OutcomeKind.UNBOUNDED or out.at > r.n + 2:
            raise PatternError(f"iteration {r.n} broke the pattern but the run ended {out}")
        return Escape(r.n, out.at)
    return None


# -- output -------------------------------------------------------------


def iteration_log_csv(report: RunReport) -> str:
    """Iteration log: 1-based variable and row numbers, exact values as p/q."""
    nvars = len(report.final_values)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "entering", "leaving", "pivot_row", "alpha", "kind", "objective"] + [f"x{j + 1}" for j in range(nvars)])
    for r in report.records:
        w.writerow(
            [r.n, r.entering + 1, "" if r.leaving is None else r.leaving + 1, r.pivot_row + 1, format_scalar(r.alpha), r.kind.value, format_scalar(r.objective)]
            + [format_scalar(v) for v in r.values]
        )
    return buf.getvalue()
