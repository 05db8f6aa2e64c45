"""Typed STRIPS task representation (immutable values).

Supported fragment: typing, negative preconditions, and a single additive
total-cost metric. Identifiers are stored in first-seen casing; all
comparisons and lookups go through lowercase keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

OBJECT_TYPE = "object"


def is_variable(term: str) -> bool:
    return term.startswith("?")


@dataclass(frozen=True, order=True)
class GroundAtom:
    """Predicate applied to terms (variables and/or constants)."""

    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.args) + ")"

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(a for a in self.args if is_variable(a))

    def substitute(self, binding: dict[str, str]) -> "GroundAtom":
        return GroundAtom(self.predicate, tuple(binding.get(a, a) for a in self.args))


@dataclass(frozen=True, order=True)
class Literal:
    atom: GroundAtom
    positive: bool = True

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"(not {self.atom})"

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def substitute(self, binding: dict[str, str]) -> "Literal":
        return Literal(self.atom.substitute(binding), self.positive)


@dataclass(frozen=True)
class Parameter:
    name: str
    type: str = OBJECT_TYPE


@dataclass(frozen=True)
class Predicate:
    name: str
    params: tuple[Parameter, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class TypeDecl:
    name: str
    parent: str = OBJECT_TYPE


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: tuple[Parameter, ...] = ()
    precondition: tuple[Literal, ...] = ()
    add_effects: tuple[GroundAtom, ...] = ()
    delete_effects: tuple[GroundAtom, ...] = ()
    cost: int = 1

    def __post_init__(self):
        if self.cost < 0:
            raise ValidationError(f"action {self.name}: negative base cost {self.cost}")
        adds = set(self.add_effects)
        if adds & set(self.delete_effects):
            clash = sorted(str(a) for a in adds & set(self.delete_effects))
            raise ValidationError(
                f"action {self.name}: atom added and deleted: {', '.join(clash)}"
            )
        params = {p.name.lower() for p in self.parameters}
        for atom in self.atoms():
            for v in atom.variables:
                if v.lower() not in params:
                    raise ValidationError(
                        f"action {self.name}: variable {v} not in parameters"
                    )

    def atoms(self) -> tuple[GroundAtom, ...]:
        return (
            tuple(lit.atom for lit in self.precondition)
            + self.add_effects
            + self.delete_effects
        )


@dataclass(frozen=True)
class PlanningDomain:
    name: str
    requirements: frozenset[str] = frozenset()
    types: tuple[TypeDecl, ...] = ()
    predicates: tuple[Predicate, ...] = ()
    actions: tuple[ActionSchema, ...] = ()
    explicit_costs: bool = False

    def __post_init__(self):
        seen = set()
        for a in self.actions:
            key = a.name.lower()
            if key in seen:
                raise ValidationError(f"duplicate action name: {a.name}")
            seen.add(key)
        seen = set()
        for p in self.predicates:
            key = p.name.lower()
            if key in seen:
                raise ValidationError(f"duplicate predicate name: {p.name}")
            seen.add(key)
        declared = {t.name.lower() for t in self.types} | {OBJECT_TYPE}
        for t in self.types:
            if t.parent.lower() not in declared:
                raise ValidationError(f"type {t.name}: undeclared parent {t.parent}")
        for p in self.predicates:
            for par in p.params:
                if par.type.lower() not in declared:
                    raise ValidationError(
                        f"predicate {p.name}: undeclared type {par.type}"
                    )
        for a in self.actions:
            for par in a.parameters:
                if par.type.lower() not in declared:
                    raise ValidationError(f"action {a.name}: undeclared type {par.type}")
        preds = self.predicate_table()
        for a in self.actions:
            for atom in a.atoms():
                decl = preds.get(atom.predicate.lower())
                if decl is None:
                    raise ValidationError(
                        f"action {a.name}: unknown predicate {atom.predicate}"
                    )
                if decl.arity != len(atom.args):
                    raise ValidationError(
                        f"action {a.name}: {atom} has arity {len(atom.args)}, "
                        f"declared {decl.arity}"
                    )

    def predicate_table(self) -> dict[str, Predicate]:
        return {p.name.lower(): p for p in self.predicates}

    def action_table(self) -> dict[str, ActionSchema]:
        return {a.name.lower(): a for a in self.actions}

    def type_parents(self) -> dict[str, str]:
        return {t.name.lower(): t.parent.lower() for t in self.types}

    def is_subtype(self, sub: str, sup: str) -> bool:
        """True when an object of type `sub` can fill a slot of type `sup`."""
        sub, sup = sub.lower(), sup.lower()
        if sup == OBJECT_TYPE:
            return True
        parents = self.type_parents()
        cur = sub
        while True:
            if cur == sup:
                return True
            if cur == OBJECT_TYPE or cur not in parents:
                return False
            cur = parents[cur]


@dataclass(frozen=True)
class TypedObject:
    name: str
    type: str = OBJECT_TYPE


@dataclass(frozen=True)
class PlanningProblem:
    name: str
    domain_name: str
    objects: tuple[TypedObject, ...] = ()
    init: tuple[GroundAtom, ...] = ()
    goal: tuple[Literal, ...] = ()
    uses_total_cost: bool = False
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        seen = set()
        for o in self.objects:
            key = o.name.lower()
            if key in seen:
                raise ValidationError(f"duplicate object name: {o.name}")
            seen.add(key)

    def object_table(self) -> dict[str, TypedObject]:
        return {o.name.lower(): o for o in self.objects}


def validate_ground_atom(
    atom: GroundAtom, domain: PlanningDomain, problem: PlanningProblem, where: str
) -> None:
    """Check predicate resolution, arity, and argument type compatibility."""
    decl = domain.predicate_table().get(atom.predicate.lower())
    if decl is None:
        raise ValidationError(f"{where}: unknown predicate in {atom}")
    if decl.arity != len(atom.args):
        raise ValidationError(
            f"{where}: {atom} has arity {len(atom.args)}, declared {decl.arity}"
        )
    objects = problem.object_table()
    for arg, par in zip(atom.args, decl.params):
        if is_variable(arg):
            raise ValidationError(f"{where}: unexpected variable {arg} in {atom}")
        obj = objects.get(arg.lower())
        if obj is None:
            raise ValidationError(f"{where}: unknown object {arg} in {atom}")
        if not domain.is_subtype(obj.type, par.type):
            raise ValidationError(
                f"{where}: object {obj.name} of type {obj.type} is not "
                f"compatible with {par.type} in {atom}"
            )
