"""Coxeter systems, parabolic closures, rank-one elements, buildings and counting quasi-morphisms."""

from .classify import Kind, Reason, ShapeReport, TypeLabel, classify_component, components, shape
from .coxeter import (BallCache, CoxeterError, CoxeterSystem, Element, Reflection, from_matrix,
                      parse_system)
from .parabolic import (ParabolicSubgroup, closure_step, coxeter_element, is_essential, is_standard,
                        parabolic_closure)
from .rankone import (RankOneDecision, Status, equivalence_witness, inequivalent_pair, is_rank_one,
                      reversibility_search, z2_witness_search)

__version__ = "0.1.0"

__all__ = [
    "BallCache", "CoxeterError", "CoxeterSystem", "Element", "Kind", "ParabolicSubgroup",
    "RankOneDecision", "Reason", "Reflection", "ShapeReport", "Status", "TypeLabel",
    "classify_component", "closure_step", "components", "coxeter_element", "equivalence_witness",
    "from_matrix", "inequivalent_pair", "is_essential", "is_rank_one", "is_standard",
    "parabolic_closure", "parse_system", "reversibility_search", "shape", "z2_witness_search",
]
