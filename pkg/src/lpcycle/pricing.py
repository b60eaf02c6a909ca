"""Column selection: Dantzig's most negative reduced cost and steepest edge."""

from __future__ import annotations

import enum
import math

from .model import Tableau
from .numeric import Backend


class PricingRule(enum.Enum):
    DANTZIG = "dantzig"
    STEEPEST_EDGE = "steepest"


def _candidates(t: Tableau) -> list[int]:
    d = t.objective_row
    return [j for j in t.nonbasic() if d[j] < 0]


def dantzig_select(t: Tableau) -> int | None:
    """Most negative reduced cost; ties go to the lowest column index."""
    best = None
    for j in _candidates(t):
        if best is None or t.objective_row[j] < t.objective_row[best]:
            best = j
    return best


def edge_weight(t: Tableau, j: int):
    """Squared length of the edge direction for a unit increase in ``x_j``."""
    return 1 + sum(row[j] * row[j] for row in t.body)


def steepest_edge_scores(t: Tableau) -> dict[int, float]:
    """``d_j / sqrt(weight_j)`` for every candidate column, as floats for reporting."""
    return {j: float(t.objective_row[j]) / math.sqrt(float(edge_weight(t, j))) for j in _candidates(t)}


def _steeper(t: Tableau, j: int, k: int) -> bool:
    # d_j/sqrt(w_j) < d_k/sqrt(w_k) with both d negative  <=>  d_j^2 w_k > d_k^2 w_j
    dj, dk = t.objective_row[j], t.objective_row[k]
    return dj * dj * edge_weight(t, k) > dk * dk * edge_weight(t, j)


def steepest_edge_select(t: Tableau) -> int | None:
    """Candidate minimizing reduced cost over edge length; lowest index on ties.

    Weights are recomputed from the current tableau.  In exact mode columns
    are compared by cross-multiplied squares so no square root is taken.
    """
    cands = _candidates(t)
    if not cands:
        return None
    if t.backend is Backend.FLOAT:
        scores = steepest_edge_scores(t)
        return min(cands, key=lambda j: (scores[j], j))
    best = cands[0]
    for j in cands[1:]:
        if _steeper(t, j, best):
            best = j
    return best


def select_column(t: Tableau, rule: PricingRule) -> int | None:
    if rule is PricingRule.DANTZIG:
        return dantzig_select(t)
    return steepest_edge_select(t)
