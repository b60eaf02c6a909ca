"""Row selection: the textbook ratio test and the EXPAND ratio test.

The standard test breaks ratio ties by the largest pivot, then by the
lowest row index.  EXPAND (Gill, Murray, Saunders and Wright) grows the
primary feasibility tolerance by ``tau`` every iteration and always takes
a strictly positive step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .model import Tableau
from .numeric import Backend, Scalar, common_backend

FLOAT_FEASIBILITY_SLACK = 1e-12


class InfeasibleStateError(RuntimeError):
    """A variable lies below its previous expanded bound."""


class StepKind(enum.Enum):
    FULL = "full"
    MIN = "min"
    ZERO = "zero"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class StepChoice:
    row: int | None
    alpha: Scalar | None
    kind: StepKind

    @property
    def unbounded(self) -> bool:
        return self.kind is StepKind.UNBOUNDED


UNBOUNDED = StepChoice(None, None, StepKind.UNBOUNDED)


@dataclass(frozen=True)
class ExpandState:
    """Tolerance schedule: after ``n`` iterations the tolerance is ``tau * (u0 + n)``.

    ``reset_period`` is the number of iterations after which the tolerance
    returns to ``tau * u0`` (None disables resets).
    """

    tau: Scalar
    u0: Scalar
    n: int = 0
    reset_period: int | None = None

    def __post_init__(self):
        common_backend((self.tau, self.u0))
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.u0 < 0:
            raise ValueError("u0 must be non-negative")

    @classmethod
    def default(cls, backend: Backend = Backend.FLOAT) -> "ExpandState":
        """Half of a 1e-6 feasibility tolerance to start, reaching it after 10000 iterations."""
        return cls(backend.parse("0.00000000005"), backend.parse("10000"), reset_period=10000)

    @property
    def backend(self) -> Backend:
        return common_backend((self.tau, self.u0))

    @property
    def delta(self) -> Scalar:
        return self.tau * (self.u0 + self.n)

    @property
    def delta_initial(self) -> Scalar:
        return self.tau * self.u0

    def advanced(self) -> "ExpandState":
        return replace(self, n=self.n + 1)

    @property
    def due_for_reset(self) -> bool:
        return self.reset_period is not None and self.n >= self.reset_period


def standard_ratio_test(t: Tableau, col: int) -> StepChoice:
    best = None
    best_alpha = None
    for i, row in enumerate(t.body):
        p = row[col]
        if p <= 0:
            continue
        alpha = t.values[t.basis[i]] / p
        if best is None or alpha < best_alpha or (alpha == best_alpha and p > t.body[best][col]):
            best, best_alpha = i, alpha
    if best is None:
        return UNBOUNDED
    return StepChoice(best, best_alpha, StepKind.ZERO if best_alpha == 0 else StepKind.FULL)


def expand_ratio_test(t: Tableau, col: int, state: ExpandState) -> tuple[StepChoice, ExpandState]:
    """Two-pass EXPAND ratio test for pivot column ``col``.

    Pass 1 finds the largest step keeping every basic variable above the
    new bound ``-delta``; pass 2 takes the largest pivot among rows whose
    zeroing step fits within it.  The returned step is
    ``max(tau / p_r, x_r / p_r)``.
    """
    previous = state.delta
    slack = FLOAT_FEASIBILITY_SLACK if t.backend is Backend.FLOAT else 0
    for j, x in enumerate(t.values):
        if x < -previous - slack:
            raise InfeasibleStateError(f"x{j + 1} = {x} is below the expanded bound -{previous}")
    state = state.advanced()
    delta = state.delta

    pivots = [(i, row[col]) for i, row in enumerate(t.body) if row[col] > 0]
    if not pivots:
        return UNBOUNDED, state
    values = [t.values[b] for b in t.basis]
    alpha_max = min((values[i] + delta) / p for i, p in pivots)

    r = None
    for i, p in pivots:
        if values[i] / p <= alpha_max and (r is None or p > t.body[r][col]):
            r = i
    p_r = t.body[r][col]
    alpha_full = values[r] / p_r
    alpha_min = state.tau / p_r
    if alpha_min > alpha_full:
        return StepChoice(r, alpha_min, StepKind.MIN), state
    return StepChoice(r, alpha_full, StepKind.FULL), state


def apply_step(t: Tableau, col: int, step: StepChoice) -> list:
    """Variable values after moving ``x_col`` by ``step.alpha`` along its edge."""
    values = list(t.values)
    alpha = step.alpha
    if alpha != 0:
        for i, row in enumerate(t.body):
            p = row[col]
            if p != 0:
                values[t.basis[i]] -= alpha * p
        values[col] += alpha
    return values


def expand_reset(t: Tableau, state: ExpandState) -> tuple[Tableau, ExpandState]:
    """Snap nonbasics to their bound 0 and recompute basics; restart the schedule."""
    values = [t.backend.zero] * t.num_vars
    for i, b in enumerate(t.basis):
        values[b] = t.rhs[i]
    return t.copy(values=values), replace(state, n=0)
