"""Step-by-step plan checking with independent cost recomputation."""

from __future__ import annotations

from dataclasses import dataclass

from ..pddl.ground import GroundTask
from ..pddl.state import first_failing_literal, goal_satisfied
from .model import Plan


@dataclass(frozen=True)
class PlanFinding:
    step: int | None
    message: str


@dataclass(frozen=True)
class PlanValidation:
    ok: bool
    findings: tuple[PlanFinding, ...]
    recomputed_cost: int | None
    claimed_cost: int | None

    @property
    def cost_matches(self) -> bool:
        return self.claimed_cost is None or self.claimed_cost == self.recomputed_cost


def validate_plan(task: GroundTask, plan: Plan) -> PlanValidation:
    """Check applicability and goal satisfaction; recompute the cost
    independently of the plan's claimed total."""
    findings: list[PlanFinding] = []
    by_signature = task.action_by_signature()
    state = task.init
    cost = 0
    for i, step in enumerate(plan.steps):
        action = by_signature.get(_normalize(step))
        if action is None:
            findings.append(PlanFinding(i, f"unknown ground action {step}"))
            break
        failing = first_failing_literal(state, action, task)
        if failing is not None:
            findings.append(
                PlanFinding(i, f"step {i} not applicable: {failing} fails for {step}")
            )
            break
        cost += action.cost
        state = frozenset((state - action.delete) | action.add)
    else:
        if not goal_satisfied(state, task):
            findings.append(PlanFinding(None, "goal not satisfied in final state"))

    ok = not findings
    return PlanValidation(
        ok=ok,
        findings=tuple(findings),
        recomputed_cost=cost if ok else None,
        claimed_cost=plan.total_cost,
    )


def _normalize(step: str) -> str:
    inner = step.strip()
    if inner.startswith("(") and inner.endswith(")"):
        inner = inner[1:-1]
    return "(" + " ".join(inner.lower().split()) + ")"
