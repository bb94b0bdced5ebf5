"""Probabilistic entailment with specificity-prioritised CI defaults and maximum entropy."""

from .entail import Bound, ConstraintSet, bound, build_constraint_set, consistent, entails_certain, point_value
from .kb import CIGTuple, Conditional, KnowledgeBase, ProbConstraint, Relation, parse_conditional, parse_kb, parse_sentence
from .maxent import Distribution, MEResult, MEStatus, ci_report, entropy, max_entropy, me_query
from .spmci import BlockReason, Extension, compute_extension, generate_candidates, spmci_bound
from .worlds import WorldSet, WorldTable, build_world_table, is_valid, satisfying_set

__version__ = "0.1.0"

__all__ = [
    "BlockReason",
    "Bound",
    "CIGTuple",
    "Conditional",
    "ConstraintSet",
    "Distribution",
    "Extension",
    "KnowledgeBase",
    "MEResult",
    "MEStatus",
    "ProbConstraint",
    "Relation",
    "WorldSet",
    "WorldTable",
    "bound",
    "build_constraint_set",
    "build_world_table",
    "ci_report",
    "compute_extension",
    "consistent",
    "entails_certain",
    "entropy",
    "generate_candidates",
    "is_valid",
    "max_entropy",
    "me_query",
    "parse_conditional",
    "parse_kb",
    "parse_sentence",
    "point_value",
    "satisfying_set",
    "spmci_bound",
]
