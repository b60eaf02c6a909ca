"""The three-parameter family of 2/6-cycle examples.

Each example has two "<= 0" constraints over four structural variables.
The 2x2 block ``A`` of the constraint matrix satisfies ``A^3 = I``, which
for a real 2x2 matrix means trace ``-1`` and determinant ``1``::

    A = [[a11, a12], [a21, -(1 + a11)]],   -a21 * a12 = 1 + a11 + a11^2

The constraint rows are ``[A | A^-1 | I]`` and the objective row is
``scale * [a | b | 0]`` with ``a = [-1, mu]`` and ``b = -a A^-1``.  Pivoting
on (1, 1) and then (2, 2) reproduces the same coefficients shifted two
columns to the right, so the basis returns after six iterations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import LpInstance, Tableau, to_tableau
from .numeric import Backend, Scalar, common_backend

CYCLE_COLUMNS = 6


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    a11: Scalar
    a12: Scalar
    mu: Scalar
    scale: Scalar = 1

    def __post_init__(self):
        if self.a12 == 0:
            raise FamilyError("a12 must be nonzero")
        b = common_backend((self.a11, self.a12, self.mu, self.scale)) or Backend.EXACT
        for name in ("a11", "a12", "mu", "scale"):
            object.__setattr__(self, name, b.convert(getattr(self, name)))
        if self.scale <= 0:
            raise FamilyError("scale must be positive")

    @classmethod
    def parse(cls, a11: str, a12: str, mu: str, scale: str = "1", backend: Backend = Backend.EXACT) -> "FamilyParams":
        p = backend.parse
        return cls(p(a11), p(a12), p(mu), p(scale))

    @property
    def backend(self) -> Backend:
        return common_backend((self.a11, self.a12, self.mu, self.scale))

    def as_backend(self, backend: Backend) -> "FamilyParams":
        c = backend.convert
        return FamilyParams(c(self.a11), c(self.a12), c(self.mu), c(self.scale))

    @property
    def a21(self) -> Scalar:
        return -(1 + self.a11 + self.a11 * self.a11) / self.a12

    @property
    def a22(self) -> Scalar:
        return -1 - self.a11

    def block_a(self) -> list:
        return [[self.a11, self.a12], [self.a21, self.a22]]

    def block_b(self) -> list:
        """``A^-1``, which equals ``A^2`` because ``A^3 = I``."""
        return inverse_2x2(self.block_a())

    def cost_a(self) -> list:
        one = self.backend.one
        return [-one, self.mu]

    def cost_b(self) -> list:
        return [-(self.a11 + 1) + self.mu * self.a21, -self.a12 - self.mu * self.a11]


def inverse_2x2(m: list) -> list:
    (a, b), (c, d) = m
    det = a * d - b * c
    if det == 0:
        raise FamilyError("singular 2x2 block")
    return [[d / det, -b / det], [-c / det, a / det]]


def matmul(x: list, y: list) -> list:
    return [[sum(x[i][k] * y[k][j] for k in range(len(y))) for j in range(len(y[0]))] for i in range(len(x))]


def build_instance(p: FamilyParams, name: str = "family") -> LpInstance:
    """The LP whose first tableau is M(1): constraints ``[A | A^-1] x <= 0``."""
    a, b = p.block_a(), p.block_b()
    matrix = [a[0] + b[0], a[1] + b[1]]
    # objective row = -c
    objective = [-p.scale * v for v in p.cost_a() + p.cost_b()]
    zero = p.backend.zero
    return LpInstance(objective, matrix, [zero, zero], name)


def build_m1(p: FamilyParams) -> Tableau:
    return to_tableau(build_instance(p))


def expected_m2(p: FamilyParams) -> tuple[list, list]:
    """Closed-form rows of M(2), the tableau after pivoting M(1) on (1, 1).

    Returns ``(constraint_rows, objective_row)`` over the six columns with
    the objective row unscaled.
    """
    a11, a12, a21, mu = p.a11, p.a12, p.a21, p.mu
    one, zero = p.backend.one, p.backend.zero
    rows = [
        [one, a12 / a11, -(1 + 1 / a11), -a12 / a11, 1 / a11, zero],
        [zero, 1 / a11, a21 / a11, -(1 + 1 / a11), -a21 / a11, one],
    ]
    obj = [zero, mu + a12 / a11, mu * a21 - (2 + a11 + 1 / a11), -a12 * (1 + 1 / a11) - mu * a11, 1 / a11, zero]
    return rows, obj


def augment_instance(instance: LpInstance, a_extra: list, rhs: Scalar) -> LpInstance:
    """Append a constraint ``[a_extra | -a_extra A^-1] x <= rhs``.

    Like the objective row, such a row reproduces itself shifted under the
    cycle pivots, so it changes steepest-edge weights without disturbing
    the cycle.
    """
    block = [row[:2] for row in instance.matrix[:2]]
    inv = inverse_2x2(block)
    tail = [-(a_extra[0] * inv[0][j] + a_extra[1] * inv[1][j]) for j in range(2)]
    row = list(a_extra) + tail + [0 * v for v in instance.matrix[0][4:]]
    return LpInstance(instance.objective, instance.matrix + [row], instance.rhs + [rhs], instance.name)


def augment_extra_row(t: Tableau, a_extra: list, rhs: Scalar) -> Tableau:
    """Tableau form of :func:`augment_instance`.

    ``t`` must be an initial M(1)-form tableau; the new row gets its own
    slack, placed after the existing ones.
    """
    if t.iteration != 0 or list(t.basis) != list(range(t.num_vars - t.num_rows, t.num_vars)):
        raise FamilyError("augment_extra_row needs an initial all-slack tableau")
    n = t.num_vars - t.num_rows
    inst = LpInstance(
        [-d for d in t.objective_row[:n]],
        [row[:n] for row in t.body],
        list(t.rhs),
    )
    return to_tableau(augment_instance(inst, a_extra, rhs))


def problem1(backend: Backend = Backend.EXACT) -> LpInstance:
    """The introductory example: ``(0.4, 0.2, -2.15/2.3)`` with the objective scaled by 2.3."""
    p = FamilyParams.parse("0.4", "0.2", "-2.15/2.3", "2.3", backend=backend)
    return build_instance(p, name="problem1")


def steepest_edge_example(backend: Backend = Backend.EXACT) -> LpInstance:
    """``mu = -1.75`` plus the extra row ``a = [0, -20]`` with rhs 1."""
    p = FamilyParams.parse("0.4", "0.2", "-1.75", backend=backend)
    inst = augment_instance(build_instance(p), [backend.zero, backend.parse("-20")], backend.one)
    inst.name = "steepest"
    return inst


# -- pivot-selection conditions ------------------------------------------


def mu_bounds(a11: Scalar, a12: Scalar) -> tuple[Scalar, Scalar]:
    """Open interval of ``mu`` for which Dantzig pricing follows the 2/6 columns.

    Nonempty iff ``a12 < a11 (a11 + 1) / (a11 + 2)``.
    """
    b = common_backend((a11, a12)) or Backend.EXACT
    return -b.one, -a12 * (a11 + 2) / (a11 * (a11 + 1))


def region_curve(a11: Scalar) -> Scalar:
    """``a12`` at which the mu interval closes."""
    return a11 * (a11 + 1) / (a11 + 2)


def mu_interval_nonempty(a11: Scalar, a12: Scalar) -> bool:
    lo, hi = mu_bounds(a11, a12)
    return lo < hi


def column_choice_bounds(a11: Scalar, a12: Scalar) -> dict[str, Scalar]:
    """Upper bounds on ``mu`` from each pairwise column comparison.

    Keys name the comparison: in M(1) column 1 must beat columns 3 and 4,
    in M(2) column 2 must be a candidate and beat columns 3 and 4.  Only
    ``m2_col2_vs_col4`` is ever binding; the others are implied by it and
    ``mu > -1`` whenever ``a11 > 0`` and ``0 < a12 < 1``.
    """
    a21 = -(1 + a11 + a11 * a11) / a12
    return {
        "m1_col1_vs_col3": a11 / a21,
        "m1_col1_vs_col4": (1 - a12) / a11,
        "m2_col2_candidate": -a12 / a11,
        "m2_col2_vs_col3": -(2 + a11 + 1 / a11 + a12 / a11) / (1 - a21),
        "m2_col2_vs_col4": -a12 * (1 + 2 / a11) / (a11 + 1),
    }


def cycling_predicate_dantzig(p: FamilyParams) -> bool:
    """Cycles under Dantzig pricing with the largest-pivot ratio test."""
    if not (p.a11 > 0 and 0 < p.a12 < 1):
        return False
    lo, hi = mu_bounds(p.a11, p.a12)
    return lo < p.mu < hi


def cycling_predicate_expand(p: FamilyParams) -> bool:
    """Cycles under Dantzig pricing with the EXPAND ratio test.

    ``a12 < 1`` is not imposed: it follows from a nonempty mu interval
    when ``a11 <= 1/2``.
    """
    if not (0 < p.a11 and 2 * p.a11 <= 1 and p.a12 > 0):
        return False
    lo, hi = mu_bounds(p.a11, p.a12)
    return lo < p.mu < hi


# -- EXPAND trajectory series ------------------------------------------------


def geometric_sums(a11: Scalar, k: int) -> tuple[Scalar, Scalar]:
    """``(s_k, S_k)`` from their closed forms; both are 0 for ``k < 0``.

    ``s_k = sum_{i<=k} a11^i`` and ``S_k = sum_{i<=k} (k + 1 - i) a11^i``.
    """
    b = common_backend((a11,)) or Backend.EXACT
    if k < 0:
        return b.zero, b.zero
    if a11 == 1:
        return b.convert(k + 1), b.convert((k + 1) * (k + 2) // 2)
    q = 1 - a11
    tail = 1 - a11 ** (k + 1)
    s = tail / q
    S = (k + 1) / q - a11 * tail / (q * q)
    return s, S


@dataclass
class SeriesCache:
    a11: Scalar
    u0: Scalar
    s: list = field(default_factory=list)  # s[k], k = 0..kmax+2
    S: list = field(default_factory=list)
    g: list = field(default_factory=list)  # g[k], k = 0..kmax

    def s_at(self, k: int) -> Scalar:
        return self.s[k] if k >= 0 else 0 * self.a11

    def S_at(self, k: int) -> Scalar:
        return self.S[k] if k >= 0 else 0 * self.a11


def _g_term(p: FamilyParams, u0: Scalar, k: int, s_k: Scalar, S_km2: Scalar) -> Scalar:
    return p.a12 * p.a21 / p.a11 * s_k + 1 / p.a11 - S_km2 + u0 + 2 * k + 2


def series(p: FamilyParams, u0: Scalar, kmax: int) -> SeriesCache:
    """Fill ``s_k``, ``S_k`` and ``G_k`` for ``k <= kmax`` by recurrence.

    ``G_k >= 0`` is the condition for the row-2 pivot to stay acceptable in
    iteration ``2k + 2``.  Checks ``G_{k+1} - G_k == 2 - s_{k+2}`` on the way
    (exactly in exact mode) and raises ArithmeticError if it fails.
    """
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    common_backend((p.a11, u0))
    out = SeriesCache(p.a11, u0)
    s_prev = S_prev = 0 * p.a11
    for _ in range(kmax + 3):
        s_prev = 1 + p.a11 * s_prev
        S_prev = S_prev + s_prev
        out.s.append(s_prev)
        out.S.append(S_prev)
    for k in range(kmax + 1):
        out.g.append(_g_term(p, u0, k, out.s[k], out.S_at(k - 2)))
    exact = p.backend is Backend.EXACT
    for k in range(kmax):
        dg = out.g[k + 1] - out.g[k]
        want = 2 - out.s[k + 2]
        if dg != want if exact else abs(dg - want) > 1e-9 * max(1.0, abs(want), abs(out.g[k])):
            raise ArithmeticError(f"G increment check failed at k={k}: {dg} != {want}")
    return out


def first_negative_g(p: FamilyParams, u0: Scalar, cap: int) -> int | None:
    """Smallest ``k <= cap`` with ``G_k < 0``, or None.

    For ``a11 <= 1/2`` the increments ``2 - s_{k+2}`` are nonnegative, so
    ``G`` never decreases and the scan stops at the first nonnegative term.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    nondecreasing = p.a11 > 0 and 2 * p.a11 <= 1
    zero = 0 * p.a11
    s = S_km1 = S_km2 = zero
    for k in range(cap + 1):
        s = 1 + p.a11 * s
        if _g_term(p, u0, k, s, S_km2) < 0:
            return k
        if nondecreasing:
            return None
        S_km2, S_km1 = S_km1, S_km1 + s
    return None


def closed_form_state(p: FamilyParams, tau: Scalar, n: int) -> list:
    """Start-of-iteration values of ``x1..x6`` on a cycling EXPAND run.

    Valid while the 2/6 pattern holds with the tolerance starting at
    ``tau * u0`` (the formulas do not depend on ``u0``).  Entries are listed
    from ``x_{2k+1}`` upward and rotated back to variable order.
    """
    if n < 1:
        raise ValueError("iterations are numbered from 1")
    common_backend((p.a11, tau))
    k, odd = divmod(n - 1, 2)
    a11, a21 = p.a11, p.a21
    s_km1, S_km1 = geometric_sums(a11, k - 1)
    s_k, S_k = geometric_sums(a11, k)
    _, S_km2 = geometric_sums(a11, k - 2)
    zero = 0 * tau
    if not odd:  # n = 2k + 1
        rel = [-tau * S_km2, zero, -tau * S_km1, zero, tau * (1 - S_k), -tau * a21 * s_km1]
    else:  # n = 2k + 2
        rel = [tau * (1 / a11 - S_km2), zero, -tau * S_km1, zero, -tau * S_k, -tau * a21 / a11 * s_k]
    first = (2 * k) % CYCLE_COLUMNS
    state = [zero] * CYCLE_COLUMNS
    for offset, v in enumerate(rel):
        state[(first + offset) % CYCLE_COLUMNS] = v
    return state


def a_cubed(p: FamilyParams) -> list:
    a = p.block_a()
    return matmul(matmul(a, a), a)

