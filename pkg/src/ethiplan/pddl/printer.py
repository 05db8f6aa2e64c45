"""Deterministic PDDL text emission; output reparses to an equal value."""

from __future__ import annotations

from .model import (
    ActionSchema,
    GroundAtom,
    Literal,
    PlanningDomain,
    PlanningProblem,
)

_REQ_ORDER = [":strips", ":typing", ":negative-preconditions", ":action-costs"]


def format_atom(atom: GroundAtom) -> str:
    return str(atom)


def format_literal(lit: Literal) -> str:
    return str(lit)


def format_condition(literals: tuple[Literal, ...]) -> str:
    return "(and " + " ".join(str(l) for l in literals) + ")" if literals else "(and )"


def _typed_line(names: list[str], type_name: str) -> str:
    return " ".join(names) + " - " + type_name


def _format_action(action: ActionSchema, with_cost: bool) -> list[str]:
    lines = [f"  (:action {action.name}"]
    params = " ".join(f"{p.name} - {p.type}" for p in action.parameters)
    lines.append(f"    :parameters ({params})")
    lines.append(f"    :precondition {format_condition(action.precondition)}")
    effects = [str(a) for a in action.add_effects]
    effects += [f"(not {a})" for a in action.delete_effects]
    if with_cost:
        effects.append(f"(increase (total-cost) {action.cost})")
    lines.append("    :effect (and " + " ".join(effects) + ")")
    lines.append("  )")
    return lines


def serialize_domain(domain: PlanningDomain) -> str:
    """Emit domain text. Deterministic: two calls yield identical bytes."""
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        flags = [r for r in _REQ_ORDER if r in domain.requirements]
        flags += sorted(set(domain.requirements) - set(flags))
        lines.append("  (:requirements " + " ".join(flags) + ")")
    if domain.types:
        decls = " ".join(f"{t.name} - {t.parent}" for t in domain.types)
        lines.append(f"  (:types {decls})")
    if domain.predicates:
        lines.append("  (:predicates")
        for pred in domain.predicates:
            params = "".join(f" {p.name} - {p.type}" for p in pred.params)
            lines.append(f"    ({pred.name}{params})")
        lines.append("  )")
    if domain.explicit_costs:
        lines.append("  (:functions (total-cost))")
    for action in domain.actions:
        lines.extend(_format_action(action, with_cost=domain.explicit_costs))
    lines.append(")")
    return "\n".join(lines) + "\n"


def serialize_problem(problem: PlanningProblem) -> str:
    """Emit problem text. Deterministic; round-trips via parse_problem."""
    lines = [f"(define (problem {problem.name})"]
    lines.append(f"  (:domain {problem.domain_name})")
    if problem.objects:
        lines.append("  (:objects")
        for obj in problem.objects:
            lines.append(f"    {obj.name} - {obj.type}")
        lines.append("  )")
    lines.append("  (:init")
    for atom in problem.init:
        lines.append(f"    {atom}")
    if problem.uses_total_cost:
        lines.append("    (= (total-cost) 0)")
    lines.append("  )")
    goal = " ".join(str(l) for l in problem.goal)
    lines.append(f"  (:goal (and {goal}))")
    if problem.uses_total_cost:
        lines.append("  (:metric minimize (total-cost))")
    lines.append(")")
    return "\n".join(lines) + "\n"
