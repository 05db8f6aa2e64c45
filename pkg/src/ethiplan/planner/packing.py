"""Bitmask encoding of ground tasks for the search kernels."""

from __future__ import annotations

from dataclasses import dataclass

from ..pddl.ground import GroundTask


@dataclass(frozen=True)
class PackedTask:
    nprops: int
    full_mask: int
    init: int
    goal_pos: int
    goal_neg: int
    pre_pos: tuple[int, ...]
    pre_neg: tuple[int, ...]
    add: tuple[int, ...]
    del_keep: tuple[int, ...]  # complement of the delete mask
    cost: tuple[int, ...]
    signatures: tuple[str, ...]

    def applicable(self, state: int, i: int) -> bool:
        return (state & self.pre_pos[i]) == self.pre_pos[i] and not state & self.pre_neg[i]

    def successor(self, state: int, i: int) -> int:
        return (state & self.del_keep[i]) | self.add[i]

    def is_goal(self, state: int) -> bool:
        return (state & self.goal_pos) == self.goal_pos and not state & self.goal_neg


def pack_task(task: GroundTask) -> PackedTask:
    n = len(task.propositions)
    full = (1 << n) - 1
    init = 0
    for i in task.init:
        init |= 1 << i
    goal_pos = goal_neg = 0
    for idx, positive in task.goal:
        if positive:
            goal_pos |= 1 << idx
        else:
            goal_neg |= 1 << idx

    pre_pos, pre_neg, add, del_keep, cost, sigs = [], [], [], [], [], []
    for a in task.actions:
        pp = pn = am = dm = 0
        for idx, positive in a.precondition:
            if positive:
                pp |= 1 << idx
            else:
                pn |= 1 << idx
        for idx in a.add:
            am |= 1 << idx
        for idx in a.delete:
            dm |= 1 << idx
        pre_pos.append(pp)
        pre_neg.append(pn)
        add.append(am)
        del_keep.append(full ^ dm)
        cost.append(a.cost)
        sigs.append(a.signature)

    return PackedTask(
        nprops=n,
        full_mask=full,
        init=init,
        goal_pos=goal_pos,
        goal_neg=goal_neg,
        pre_pos=tuple(pre_pos),
        pre_neg=tuple(pre_neg),
        add=tuple(add),
        del_keep=tuple(del_keep),
        cost=tuple(cost),
        signatures=tuple(sigs),
    )


def mask_to_state(mask: int, nprops: int) -> frozenset[int]:
    return frozenset(i for i in range(nprops) if mask >> i & 1)
