"""Simplest cycling examples for the simplex method, and when EXPAND fails to stop them."""

from .engine import OutcomeKind, RunReport, detect_cycle, run, verify_trajectory
from .family import FamilyParams, build_instance, build_m1, problem1, steepest_edge_example
from .model import LpInstance, Tableau, pivot, to_tableau
from .numeric import Backend
from .pricing import PricingRule
from .ratio import ExpandState

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "ExpandState",
    "FamilyParams",
    "LpInstance",
    "OutcomeKind",
    "PricingRule",
    "RunReport",
    "Tableau",
    "build_instance",
    "build_m1",
    "detect_cycle",
    "pivot",
    "problem1",
    "run",
    "steepest_edge_example",
    "to_tableau",
    "verify_trajectory",
]
