"""Reference semantics for rule firing over a plan.

Walks the plan at the atom level, independent of grounding and of the
transpiler: a rule fires on a step when the step instantiates its
trigger action and its condition holds in the state the action is
applied in (the pre-state). This is the oracle the compiled task's cost
accounting is checked against.
"""

from __future__ import annotations

from ..errors import PreconditionError, ValidationError
from ..pddl.model import GroundAtom
from ..transpile.weights import DEFAULT_SCHEME, WeightScheme
from .model import NEGATIVE, EthicalTask, FeatureCharge, FeatureTally


def parse_step(step: str) -> tuple[str, tuple[str, ...]]:
    """Split a plan step like '(drive home mid)' into name and arguments."""
    inner = step.strip()
    if inner.startswith("(") and inner.endswith(")"):
        inner = inner[1:-1]
    parts = inner.split()
    if not parts:
        raise ValidationError(f"empty plan step: '{step}'")
    return parts[0], tuple(parts[1:])


def _canon(atom: GroundAtom) -> GroundAtom:
    return GroundAtom(atom.predicate.lower(), tuple(a.lower() for a in atom.args))


def simulate_features(
    task: EthicalTask,
    plan: list[str] | tuple[str, ...],
    scheme: WeightScheme = DEFAULT_SCHEME,
) -> FeatureTally:
    """Tally rule firings over a plan valid for the original task."""
    actions = task.domain.action_table()
    rules_by_action: dict[str, list] = {}
    for rule in task.rules:
        rules_by_action.setdefault(rule.trigger_action.lower(), []).append(rule)

    counts: dict[str, int] = {r.id: 0 for r in task.rules if r.has_negative()}
    achieved: dict[str, bool] = {r.id: False for r in task.rules if r.has_positive()}
    fired: dict[str, int] = {r.id: 0 for r in task.rules}

    state = {_canon(a) for a in task.problem.init}
    for step_index, step in enumerate(plan):
        name, args = parse_step(step)
        schema = actions.get(name.lower())
        if schema is None:
            raise ValidationError(f"step {step_index}: unknown action '{name}'")
        if len(args) != len(schema.parameters):
            raise ValidationError(
                f"step {step_index}: {schema.name} takes "
                f"{len(schema.parameters)} arguments, got {len(args)}"
            )
        binding = {p.name: a for p, a in zip(schema.parameters, args)}

        for lit in schema.precondition:
            atom = _canon(lit.atom.substitute(binding))
            if (atom in state) != lit.positive:
                raise PreconditionError(
                    f"step {step_index}: precondition of {step} violated: "
                    f"{lit.substitute(binding)}",
                    literal=str(lit.substitute(binding)),
                    step=step_index,
                )

        # rule firing is judged in the pre-state
        for rule in rules_by_action.get(schema.name.lower(), []):
            holds = all(
                (_canon(l.atom.substitute(binding)) in state) == l.positive
                for l in rule.condition
            )
            if not holds:
                continue
            fired[rule.id] += 1
            if rule.id in counts:
                counts[rule.id] += 1
            if rule.id in achieved:
                achieved[rule.id] = True

        dels = {_canon(a.substitute(binding)) for a in schema.delete_effects}
        adds = {_canon(a.substitute(binding)) for a in schema.add_effects}
        state = (state - dels) | adds

    breakdown: list[FeatureCharge] = []
    total = 0
    for rule in task.rules:
        for f in rule.features:
            if f.polarity == NEGATIVE:
                penalty = scheme.weight(f.significance) * counts[rule.id]
            else:
                penalty = 0 if achieved[rule.id] else scheme.weight(f.significance)
            total += penalty
            breakdown.append(
                FeatureCharge(
                    rule_id=rule.id,
                    feature=f.name,
                    polarity=f.polarity,
                    significance=f.significance,
                    fired_count=fired[rule.id],
                    penalty=penalty,
                )
            )
    return FeatureTally(
        counts=counts, achieved=achieved, penalty_total=total, breakdown=tuple(breakdown)
    )
