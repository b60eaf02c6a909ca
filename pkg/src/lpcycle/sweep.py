"""Map the cycling region over (a11, a12) by predicate and by simulation."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .engine import OutcomeKind, run
from .family import (
    FamilyParams,
    build_instance,
    cycling_predicate_dantzig,
    cycling_predicate_expand,
    mu_bounds,
    region_curve,
)
from .numeric import Scalar, format_decimal, parse_number
from .pricing import PricingRule
from .ratio import ExpandState

SWEEP_MAX_ITERS = 600


@dataclass(frozen=True)
class AxisRange:
    lo: Fraction
    hi: Fraction
    steps: int

    def __post_init__(self):
        if self.steps < 0 or self.hi < self.lo:
            raise ValueError(f"bad range {self.lo}:{self.hi}:{self.steps}")

    @classmethod
    def parse(cls, text: str) -> "AxisRange":
        """``lo:hi:n``, e.g. ``0:1:40``."""
        try:
            lo, hi, n = text.split(":")
            return cls(parse_number(lo), parse_number(hi), int(n))
        except ValueError as exc:
            raise ValueError(f"expected lo:hi:n, got {text!r}") from exc

    @property
    def step(self) -> Fraction:
        return (self.hi - self.lo) / self.steps if self.steps else Fraction(0)

    def centers(self) -> list[Fraction]:
        return [self.lo + (i + Fraction(1, 2)) * self.step for i in range(self.steps)]


@dataclass(frozen=True)
class MuRule:
    """A fixed mu for every cell, or the midpoint of each cell's mu interval."""

    fixed: Scalar | None = None

    @classmethod
    def parse(cls, text: str) -> "MuRule":
        if text == "mid":
            return cls()
        kind, sep, value = text.partition(":")
        if kind != "fixed" or not sep:
            raise ValueError(f"expected 'mid' or 'fixed:<value>', got {text!r}")
        return cls(parse_number(value))

    def mu_for(self, a11: Scalar, a12: Scalar) -> Scalar:
        if self.fixed is not None:
            return self.fixed
        lo, hi = mu_bounds(a11, a12)
        # For an empty interval this lands outside both bounds, which is still a valid probe.
        return (lo + hi) / 2

    def __str__(self) -> str:
        return "mid" if self.fixed is None else f"fixed:{self.fixed}"


@dataclass(frozen=True)
class Cell:
    a11: Fraction
    a12: Fraction
    mu: Fraction
    pred_dantzig: bool
    pred_expand: bool
    sim_dantzig: OutcomeKind
    sim_expand: OutcomeKind
    boundary: bool

    @property
    def agrees(self) -> bool:
        return self.pred_dantzig == (self.sim_dantzig is OutcomeKind.CYCLES) and self.pred_expand == (
            self.sim_expand is OutcomeKind.CYCLES
        )


@dataclass
class RegionGrid:
    a11_range: AxisRange
    a12_range: AxisRange
    mu_rule: MuRule
    cells: list  # cells[i][j] for a11 index i, a12 index j

    def flat(self) -> list[Cell]:
        return [c for row in self.cells for c in row]

    def disagreements(self) -> list[Cell]:
        return [c for c in self.flat() if not c.boundary and not c.agrees]


def _mu_side(mu_rule: MuRule, a11, a12) -> tuple[bool, bool]:
    lo, hi = mu_bounds(a11, a12)
    mu = mu_rule.mu_for(a11, a12)
    return mu > lo, mu < hi


def is_boundary(a11, a12, mu_rule: MuRule, a11_range: AxisRange, a12_range: AxisRange) -> bool:
    """Within one grid step of a curve where the predicted outcome changes.

    The curves are ``a11 = 1/2``, ``a12 = 1``, ``a12 = a11(a11+1)/(a11+2)``
    and the two mu bounds.  A cell is near a mu bound when the rule's mu
    lands on a different side of it at some neighbouring grid point.
    """
    d11, d12 = a11_range.step, a12_range.step
    if abs(a11 - Fraction(1, 2)) <= d11 or abs(a12 - 1) <= d12:
        return True
    # the curve has slope below 1, so a step in a11 moves it by less than d11
    if abs(a12 - region_curve(a11)) <= d12 + d11:
        return True
    side = _mu_side(mu_rule, a11, a12)
    for s11 in (-d11, 0, d11):
        for s12 in (-d12, 0, d12):
            if a11 + s11 > 0 and a12 + s12 > 0 and _mu_side(mu_rule, a11 + s11, a12 + s12) != side:
                return True
    return False


def _simulate(args):
    a11, a12, mu, max_iters, tau, u0 = args
    inst = build_instance(FamilyParams(a11, a12, mu))
    dantzig = run(inst, PricingRule.DANTZIG, None, max_iters).outcome.kind
    expand = run(inst, PricingRule.DANTZIG, ExpandState(tau, u0), max_iters).outcome.kind
    return dantzig, expand


def region_sweep(
    a11_range: AxisRange,
    a12_range: AxisRange,
    mu_rule: MuRule = MuRule(),
    max_iters: int = SWEEP_MAX_ITERS,
    tau: Fraction = Fraction(1),
    u0: Fraction = Fraction(1),
    workers: int | None = None,
) -> RegionGrid:
    """Evaluate both predicates and both exact simulations on every cell center.

    EXPAND cells use ``tau = u0 = 1`` by default: the outcome does not
    depend on tau, and a small u0 keeps escapes for ``a11 > 1/2`` well
    inside the iteration cap.
    """
    points = []
    for a11 in a11_range.centers():
        for a12 in a12_range.centers():
            points.append((a11, a12, Fraction(mu_rule.mu_for(a11, a12))))
    jobs = [(a11, a12, mu, max_iters, Fraction(tau), Fraction(u0)) for a11, a12, mu in points]
    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            sims = list(pool.map(_simulate, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        sims = [_simulate(j) for j in jobs]
    cells = []
    it = iter(zip(points, sims))
    for _ in range(a11_range.steps):
        row = []
        for _ in range(a12_range.steps):
            (a11, a12, mu), (sd, se) = next(it)
            p = FamilyParams(a11, a12, mu)
            row.append(
                Cell(
                    a11,
                    a12,
                    mu,
                    cycling_predicate_dantzig(p),
                    cycling_predicate_expand(p),
                    sd,
                    se,
                    is_boundary(a11, a12, mu_rule, a11_range, a12_range),
                )
            )
        cells.append(row)
    return RegionGrid(a11_range, a12_range, mu_rule, cells)


def emit_region_csv(grid: RegionGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a11", "a12", "mu", "pred_dantzig", "pred_expand", "sim_dantzig", "sim_expand", "boundary"])
    for c in grid.flat():
        w.writerow(
            [
                format_decimal(c.a11),
                format_decimal(c.a12),
                format_decimal(c.mu),
                int(c.pred_dantzig),
                int(c.pred_expand),
                c.sim_dantzig.value,
                c.sim_expand.value,
                int(c.boundary),
            ]
        )
    return buf.getvalue()


def emit_region_svg(grid: RegionGrid) -> str:
    from .plotting import region_figure_svg

    return region_figure_svg(grid)
