"""Instantiate action schemas over problem objects into a propositional task."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..errors import GroundingError, ResourceLimitError
from .model import (
    ActionSchema,
    GroundAtom,
    Literal,
    PlanningDomain,
    PlanningProblem,
    is_variable,
)

DEFAULT_GROUND_ACTION_CAP = 200_000


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    precondition: tuple[tuple[int, bool], ...]  # (proposition index, positive)
    add: frozenset[int]
    delete: frozenset[int]
    cost: int

    @property
    def signature(self) -> str:
        return "(" + " ".join((self.name,) + self.args) + ")"


@dataclass(frozen=True)
class GroundTask:
    propositions: tuple[GroundAtom, ...]
    init: frozenset[int]
    goal: tuple[tuple[int, bool], ...]
    actions: tuple[GroundAction, ...]
    index: dict[GroundAtom, int] = field(compare=False, hash=False, default_factory=dict)

    def atom_of(self, idx: int) -> GroundAtom:
        return self.propositions[idx]

    def action_by_signature(self) -> dict[str, GroundAction]:
        return {a.signature: a for a in self.actions}


def static_predicates(domain: PlanningDomain) -> frozenset[str]:
    """Predicates never appearing in any effect (lowercase names)."""
    dynamic = {
        atom.predicate.lower()
        for a in domain.actions
        for atom in a.add_effects + a.delete_effects
    }
    return frozenset(p.name.lower() for p in domain.predicates) - frozenset(dynamic)


def _candidates(domain: PlanningDomain, problem: PlanningProblem, schema: ActionSchema):
    """Type-correct bindings, in object declaration order per parameter."""
    pools = []
    for param in schema.parameters:
        pool = [o.name for o in problem.objects if domain.is_subtype(o.type, param.type)]
        pools.append(pool)
    return product(*pools)


def ground_task(
    domain: PlanningDomain,
    problem: PlanningProblem,
    action_cap: int = DEFAULT_GROUND_ACTION_CAP,
    prune_static: bool = True,
) -> GroundTask:
    """Ground all schemas; prune instantiations whose positive static
    preconditions are absent from init (they can never become true)."""
    statics = static_predicates(domain) if prune_static else frozenset()
    init_atoms = {_canon(a) for a in problem.init}
    objects = {o.name.lower() for o in problem.objects}

    props: dict[GroundAtom, int] = {}

    def intern(atom: GroundAtom) -> int:
        atom = _canon(atom)
        idx = props.get(atom)
        if idx is None:
            idx = len(props)
            props[atom] = idx
        return idx

    for atom in problem.init:
        intern(atom)
    for lit in problem.goal:
        intern(lit.atom)

    goal = tuple((intern(l.atom), l.positive) for l in problem.goal)

    actions: list[GroundAction] = []
    for schema in domain.actions:
        param_names = [p.name for p in schema.parameters]
        for combo in _candidates(domain, problem, schema):
            binding = dict(zip(param_names, combo))
            ok = True
            pre: list[tuple[GroundAtom, bool]] = []
            for lit in schema.precondition:
                atom = _ground_atom(lit.atom, binding, objects, schema.name)
                if lit.positive and atom.predicate.lower() in statics and atom not in init_atoms:
                    ok = False
                    break
                pre.append((atom, lit.positive))
            if not ok:
                continue
            adds = {
                _ground_atom(a, binding, objects, schema.name) for a in schema.add_effects
            }
            dels = {
                _ground_atom(a, binding, objects, schema.name) for a in schema.delete_effects
            }
            # distinct schema atoms can collide after substitution; the
            # STRIPS successor (s \ del) | add makes add win, so the
            # overlap is dropped from del without changing semantics
            dels -= adds
            actions.append(
                GroundAction(
                    name=schema.name,
                    args=combo,
                    precondition=tuple((intern(a), pos) for a, pos in pre),
                    add=frozenset(intern(a) for a in sorted(adds)),
                    delete=frozenset(intern(a) for a in sorted(dels)),
                    cost=schema.cost,
                )
            )
            if len(actions) > action_cap:
                raise ResourceLimitError(
                    f"grounding produced more than {action_cap} ground actions"
                )

    task = GroundTask(
        propositions=tuple(props),
        init=frozenset(props[_canon(a)] for a in problem.init),
        goal=goal,
        actions=tuple(actions),
        index=props,
    )
    return task


def _canon(atom: GroundAtom) -> GroundAtom:
    return GroundAtom(atom.predicate.lower(), tuple(a.lower() for a in atom.args))


def _ground_atom(
    atom: GroundAtom, binding: dict[str, str], objects: set[str], action: str
) -> GroundAtom:
    args = []
    for term in atom.args:
        if is_variable(term):
            args.append(binding[term].lower())
        else:
            if term.lower() not in objects:
                raise GroundingError(
                    f"action {action}: constant '{term}' is not a problem object"
                )
            args.append(term.lower())
    return GroundAtom(atom.predicate.lower(), tuple(args))
