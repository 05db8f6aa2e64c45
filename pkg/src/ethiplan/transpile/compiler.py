"""Compile an ethical task into plain cost-annotated STRIPS.

Per original action, the attached rules' conditions induce an exclusive,
exhaustive partition of the states satisfying the original precondition:
a cell either entails a condition (all its literals appended) or commits
to the first failing literal (prefix + negation appended). One schema
variant is emitted per cell; entailed negative features ride on the
variant's cost, entailed positive features add an achieved marker.

After the original goal, a staged audit charges each positive rule
exactly once: `finalize` (requires the goal, leaves planning mode), then
per positive rule an audit-yes (achieved, free) or audit-no (not
achieved, costs the rule's positive weight). The compiled goal is the
last audit token, so every compiled plan runs the full audit.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import CompilationError, ResourceLimitError, ValidationError
from ..ethics.model import EthicalRule, EthicalTask
from ..ethics.validate import validate_rules
from ..pddl.model import (
    ActionSchema,
    GroundAtom,
    Literal,
    PlanningDomain,
    PlanningProblem,
    Predicate,
)
from .weights import DEFAULT_SCHEME, WeightScheme

PREFIX = "p2p--"
PLANNING_MODE = PREFIX + "planning-mode"
FINALIZE = PREFIX + "finalize"
DEFAULT_VARIANT_CAP = 256


def achieved_predicate(rule_id: str) -> str:
    return f"{PREFIX}achieved-{rule_id.lower()}"


def audit_token(j: int) -> str:
    return f"{PREFIX}audit-token-{j}"


def audit_action(j: int, yes: bool) -> str:
    return f"{PREFIX}audit-{j}-{'yes' if yes else 'no'}"


def variant_name(action: str, i: int) -> str:
    return f"{PREFIX}{action}--v{i}"


@dataclass(frozen=True)
class BackMapEntry:
    original_action: str | None  # None for finalize/audit actions
    charged_rule_ids: tuple[str, ...]
    fired_rule_ids: tuple[str, ...]
    base_cost: int
    penalty: int


@dataclass(frozen=True)
class CompiledTask:
    domain: PlanningDomain
    problem: PlanningProblem
    back_map: dict[str, BackMapEntry]
    audit_actions: tuple[str, ...]
    scheme: WeightScheme


def _canon_lit(lit: Literal) -> tuple:
    return (lit.positive, lit.atom.predicate.lower(), tuple(a.lower() for a in lit.atom.args))


@dataclass
class _Cell:
    literals: list[Literal]
    keys: set[tuple]
    entailed: list[EthicalRule]

    def clone(self) -> "_Cell":
        return _Cell(list(self.literals), set(self.keys), list(self.entailed))

    def try_add(self, lit: Literal) -> bool:
        """Append a literal; False when it contradicts the cell."""
        key = _canon_lit(lit)
        neg = _canon_lit(lit.negate())
        if neg in self.keys:
            return False
        if key not in self.keys:
            self.keys.add(key)
            self.literals.append(lit)
        return True


def _split_cells(cells: list[_Cell], condition: tuple[Literal, ...], group: list[EthicalRule]) -> list[_Cell]:
    out: list[_Cell] = []
    for cell in cells:
        # entail branch: all condition literals hold
        sat = cell.clone()
        if all(sat.try_add(lit) for lit in condition):
            sat.entailed.extend(group)
            out.append(sat)
        # fail branches: condition fails first at literal i
        for i in range(len(condition)):
            fail = cell.clone()
            ok = all(fail.try_add(lit) for lit in condition[:i])
            if ok and fail.try_add(condition[i].negate()):
                out.append(fail)
    return out


def _partition(
    schema: ActionSchema, rules: list[EthicalRule], variant_cap: int
) -> list[_Cell]:
    base = _Cell([], set(), [])
    for lit in schema.precondition:
        base.try_add(lit)
    cells = [base]

    groups: dict[tuple, tuple[tuple[Literal, ...], list[EthicalRule]]] = {}
    for rule in rules:
        key = tuple(_canon_lit(l) for l in rule.condition)
        if key not in groups:
            groups[key] = (rule.condition, [])
        groups[key][1].append(rule)

    for condition, group in groups.values():
        cells = _split_cells(cells, condition, group)
        if len(cells) > variant_cap:
            raise ResourceLimitError(
                f"action {schema.name}: rule conditions expand to more than "
                f"{variant_cap} variants"
            )
    return cells


def compile_task(
    task: EthicalTask,
    scheme: WeightScheme = DEFAULT_SCHEME,
    variant_cap: int = DEFAULT_VARIANT_CAP,
) -> CompiledTask:
    """Compile rules into action costs plus a post-goal audit stage."""
    report = validate_rules(task.rules, task.domain)
    if not report.ok:
        details = "; ".join(str(f) for f in report.errors)
        raise CompilationError(f"task has invalid rules: {details}")

    domain, problem = task.domain, task.problem
    for name in [a.name for a in domain.actions] + [p.name for p in domain.predicates]:
        if name.lower().startswith(PREFIX):
            raise CompilationError(
                f"domain identifier '{name}' collides with the reserved "
                f"'{PREFIX}' namespace"
            )

    positive_rules = [r for r in task.rules if r.has_positive()]
    rules_by_action: dict[str, list[EthicalRule]] = {}
    for rule in task.rules:
        rules_by_action.setdefault(rule.trigger_action.lower(), []).append(rule)

    planning_mode = Literal(GroundAtom(PLANNING_MODE))
    back_map: dict[str, BackMapEntry] = {}
    actions: list[ActionSchema] = []
    negative_used = any(not l.positive for a in domain.actions for l in a.precondition)

    for schema in domain.actions:
        matching = rules_by_action.get(schema.name.lower(), [])
        cells = _partition(schema, matching, variant_cap)
        rename = bool(matching)
        for i, cell in enumerate(cells, start=1):
            entailed_ids = [r.id for r in task.rules if r in cell.entailed]
            charged = [r.id for r in task.rules if r in cell.entailed and r.has_negative()]
            penalty = sum(r.negative_weight(scheme) for r in cell.entailed)
            adds = schema.add_effects + tuple(
                GroundAtom(achieved_predicate(r.id))
                for r in task.rules
                if r in cell.entailed and r.has_positive()
            )
            name = variant_name(schema.name, i) if rename else schema.name
            negative_used = negative_used or any(not l.positive for l in cell.literals)
            actions.append(
                ActionSchema(
                    name=name,
                    parameters=schema.parameters,
                    precondition=tuple(cell.literals) + (planning_mode,),
                    add_effects=adds,
                    delete_effects=schema.delete_effects,
                    cost=schema.cost + penalty,
                )
            )
            back_map[name.lower()] = BackMapEntry(
                original_action=schema.name,
                charged_rule_ids=tuple(charged),
                fired_rule_ids=tuple(entailed_ids),
                base_cost=schema.cost,
                penalty=penalty,
            )

    audit_names = [FINALIZE]
    actions.append(
        ActionSchema(
            name=FINALIZE,
            precondition=problem.goal + (planning_mode,),
            add_effects=(GroundAtom(audit_token(0)),),
            delete_effects=(GroundAtom(PLANNING_MODE),),
            cost=0,
        )
    )
    back_map[FINALIZE] = BackMapEntry(None, (), (), 0, 0)
    negative_used = negative_used or any(not l.positive for l in problem.goal)

    for j, rule in enumerate(positive_rules, start=1):
        achieved = GroundAtom(achieved_predicate(rule.id))
        token_pre = Literal(GroundAtom(audit_token(j - 1)))
        token_add = (GroundAtom(audit_token(j)),)
        # consuming the previous token makes every audit step fire at
        # most once, so each original plan has a unique completion
        token_del = (GroundAtom(audit_token(j - 1)),)
        yes = ActionSchema(
            name=audit_action(j, yes=True),
            precondition=(token_pre, Literal(achieved)),
            add_effects=token_add,
            delete_effects=token_del,
            cost=0,
        )
        charge = rule.positive_weight(scheme)
        no = ActionSchema(
            name=audit_action(j, yes=False),
            precondition=(token_pre, Literal(achieved, positive=False)),
            add_effects=token_add,
            delete_effects=token_del,
            cost=charge,
        )
        negative_used = True
        actions.extend([yes, no])
        audit_names.extend([yes.name, no.name])
        back_map[yes.name] = BackMapEntry(None, (), (rule.id,), 0, 0)
        back_map[no.name] = BackMapEntry(None, (rule.id,), (), 0, charge)

    predicates = list(domain.predicates)
    predicates.append(Predicate(PLANNING_MODE))
    for rule in positive_rules:
        predicates.append(Predicate(achieved_predicate(rule.id)))
    for j in range(len(positive_rules) + 1):
        predicates.append(Predicate(audit_token(j)))

    requirements = set(domain.requirements) | {":action-costs"}
    if negative_used:
        requirements.add(":negative-preconditions")

    try:
        compiled_domain = PlanningDomain(
            name=PREFIX + domain.name,
            requirements=frozenset(requirements),
            types=domain.types,
            predicates=tuple(predicates),
            actions=tuple(actions),
            explicit_costs=True,
        )
        compiled_problem = PlanningProblem(
            name=PREFIX + problem.name,
            domain_name=PREFIX + domain.name,
            objects=problem.objects,
            init=problem.init + (GroundAtom(PLANNING_MODE),),
            goal=(Literal(GroundAtom(audit_token(len(positive_rules)))),),
            uses_total_cost=True,
        )
    except ValidationError as exc:
        raise CompilationError(str(exc)) from exc

    return CompiledTask(
        domain=compiled_domain,
        problem=compiled_problem,
        back_map=back_map,
        audit_actions=tuple(audit_names),
        scheme=scheme,
    )
