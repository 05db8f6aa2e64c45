"""Pure-Python Dijkstra kernel over bitmask states.

Same contract as the compiled kernel in _csearch: settle states in
nondecreasing (cost, steps) order until the first goal key is fully
drained, and hand the settled distance map to the shared plan
reconstruction. Works for any proposition count (states are Python
ints); the compiled kernel covers the <=64-proposition fast path.
"""

from __future__ import annotations

import time
from heapq import heappop, heappush

from .packing import PackedTask

FOUND = "found"
EXHAUSTED = "exhausted"
NODE_LIMIT = "node-limit"
TIME_LIMIT = "time-limit"
CANCELLED = "cancelled"

_CHECK_EVERY = 1024


def dijkstra(
    packed: PackedTask,
    node_cap: int,
    time_cap: float,
    should_stop=None,
) -> tuple[str, dict[int, tuple[int, int]], list[int], tuple[int, int] | None, int]:
    """Returns (status, dist, goal_states, best_key, expansions)."""
    deadline = time.monotonic() + time_cap
    actions = range(len(packed.cost))
    pre_pos, pre_neg = packed.pre_pos, packed.pre_neg
    add, del_keep, cost = packed.add, packed.del_keep, packed.cost

    dist: dict[int, tuple[int, int]] = {}
    goal_states: list[int] = []
    best_key: tuple[int, int] | None = None
    heap: list[tuple[int, int, int]] = [(0, 0, packed.init)]
    expansions = 0

    while heap:
        g, steps, state = heappop(heap)
        key = (g, steps)
        if best_key is not None and key > best_key:
            break
        if state in dist:
            continue
        dist[state] = key
        expansions += 1

        if (state & packed.goal_pos) == packed.goal_pos and not state & packed.goal_neg:
            if best_key is None:
                best_key = key
            goal_states.append(state)
            continue
        if best_key is not None:
            # equal-key non-goal states cannot sit on an optimal path
            continue

        if expansions % _CHECK_EVERY == 0:
            if expansions > node_cap:
                return NODE_LIMIT, dist, goal_states, best_key, expansions
            if time.monotonic() > deadline:
                return TIME_LIMIT, dist, goal_states, best_key, expansions
            if should_stop is not None and should_stop():
                return CANCELLED, dist, goal_states, best_key, expansions
        elif expansions > node_cap:
            return NODE_LIMIT, dist, goal_states, best_key, expansions

        for i in actions:
            pp = pre_pos[i]
            if (state & pp) == pp and not state & pre_neg[i]:
                ns = (state & del_keep[i]) | add[i]
                if ns not in dist:
                    heappush(heap, (g + cost[i], steps + 1, ns))

    status = FOUND if best_key is not None else EXHAUSTED
    return status, dist, goal_states, best_key, expansions
