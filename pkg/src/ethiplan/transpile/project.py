"""Map compiled plans back to original actions and per-step charges."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from ..ethics.simulate import parse_step
from .compiler import CompiledTask


@dataclass(frozen=True)
class ProjectedStep:
    signature: str  # original action with arguments
    charged_rule_ids: tuple[str, ...]
    fired_rule_ids: tuple[str, ...]
    base_cost: int
    penalty: int


@dataclass(frozen=True)
class ProjectedPlan:
    steps: tuple[ProjectedStep, ...]
    unachieved_rule_ids: tuple[str, ...]  # positive rules charged at audit
    base_cost_total: int
    penalty_total: int

    @property
    def signatures(self) -> tuple[str, ...]:
        return tuple(s.signature for s in self.steps)


def project_plan(
    compiled_plan: list[str] | tuple[str, ...], compiled: CompiledTask
) -> ProjectedPlan:
    """Strip finalize/audit steps and rename variants via the back-map."""
    steps: list[ProjectedStep] = []
    unachieved: list[str] = []
    base_total = 0
    penalty_total = 0
    for step in compiled_plan:
        name, args = parse_step(step)
        entry = compiled.back_map.get(name.lower())
        if entry is None:
            raise ValidationError(f"unknown compiled action '{name}'")
        penalty_total += entry.penalty
        if entry.original_action is None:
            unachieved.extend(entry.charged_rule_ids)
            continue
        base_total += entry.base_cost
        signature = "(" + " ".join((entry.original_action,) + args) + ")"
        steps.append(
            ProjectedStep(
                signature=signature,
                charged_rule_ids=entry.charged_rule_ids,
                fired_rule_ids=entry.fired_rule_ids,
                base_cost=entry.base_cost,
                penalty=entry.penalty,
            )
        )
    return ProjectedPlan(
        steps=tuple(steps),
        unachieved_rule_ids=tuple(unachieved),
        base_cost_total=base_total,
        penalty_total=penalty_total,
    )
