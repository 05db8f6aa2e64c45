from .ground import GroundAction, GroundTask, ground_task, static_predicates
from .model import (
    ActionSchema,
    GroundAtom,
    Literal,
    Parameter,
    PlanningDomain,
    PlanningProblem,
    Predicate,
    TypeDecl,
    TypedObject,
)
from .parser import parse_domain, parse_problem
from .printer import serialize_domain, serialize_problem
from .state import apply_action, goal_satisfied, precondition_holds

__all__ = [
    "ActionSchema",
    "GroundAction",
    "GroundAtom",
    "GroundTask",
    "Literal",
    "Parameter",
    "PlanningDomain",
    "PlanningProblem",
    "Predicate",
    "TypeDecl",
    "TypedObject",
    "apply_action",
    "goal_satisfied",
    "ground_task",
    "parse_domain",
    "parse_problem",
    "precondition_holds",
    "serialize_domain",
    "serialize_problem",
    "static_predicates",
]
