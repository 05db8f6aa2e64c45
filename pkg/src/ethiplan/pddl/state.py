"""STRIPS successor function and goal test over grounded states."""

from __future__ import annotations

from ..errors import PreconditionError
from .ground import GroundAction, GroundTask


def precondition_holds(state: frozenset[int], action: GroundAction) -> bool:
    return all((idx in state) == positive for idx, positive in action.precondition)


def first_failing_literal(
    state: frozenset[int], action: GroundAction, task: GroundTask
) -> str | None:
    for idx, positive in action.precondition:
        if (idx in state) != positive:
            atom = str(task.atom_of(idx))
            return atom if positive else f"(not {atom})"
    return None


def apply_action(
    state: frozenset[int], action: GroundAction, task: GroundTask | None = None
) -> frozenset[int]:
    """Successor state (state \\ delete) | add; raises if the
    precondition does not hold, naming the first failing literal."""
    for idx, positive in action.precondition:
        if (idx in state) != positive:
            detail = ""
            if task is not None:
                detail = f": {first_failing_literal(state, action, task)}"
            raise PreconditionError(
                f"precondition of {action.signature} violated{detail}",
                literal=detail.lstrip(": ") or None,
            )
    return frozenset((state - action.delete) | action.add)


def goal_satisfied(state: frozenset[int], task: GroundTask) -> bool:
    return all((idx in state) == positive for idx, positive in task.goal)
