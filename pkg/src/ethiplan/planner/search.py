"""Optimal and greedy forward search over ground tasks.

Optimal mode settles states in lexicographic (cost, steps) order; the
returned plan is then the unique optimum under the full tie-break:
minimum cost, then fewest steps, then lexicographically smallest step
signature sequence. The lexicographic winner is reconstructed by a
greedy walk over the optimal subgraph restricted to states that can
still reach a best-key goal, which is exact and engine-independent, so
the compiled and pure kernels return identical plans.
"""

from __future__ import annotations

import os
import time
from heapq import heappop, heappush

from ..errors import ValidationError
from ..pddl.ground import GroundTask
from . import _pysearch
from ._pysearch import CANCELLED, EXHAUSTED, FOUND, NODE_LIMIT, TIME_LIMIT
from .model import (
    MODE_GREEDY,
    MODE_OPTIMAL,
    STATUS_RESOURCE_LIMIT,
    STATUS_SOLVED,
    STATUS_UNSOLVABLE,
    Plan,
    SearchConfig,
    SolveOutcome,
)
from .packing import PackedTask, pack_task

try:
    from . import _csearch  # compiled kernel, optional
except ImportError:  # pragma: no cover - depends on build environment
    _csearch = None

_KERNEL_PROP_LIMIT = 64


def compiled_kernel_available() -> bool:
    return _csearch is not None and os.environ.get("ETHIPLAN_FORCE_PURE") != "1"


def _select_engine(packed: PackedTask) -> tuple[str, object]:
    if compiled_kernel_available() and packed.nprops <= _KERNEL_PROP_LIMIT:
        return "compiled", _csearch.dijkstra
    return "pure", _pysearch.dijkstra


def _action_order(packed: PackedTask) -> list[int]:
    return sorted(range(len(packed.signatures)), key=lambda i: packed.signatures[i])


def _reconstruct(
    packed: PackedTask,
    dist: dict[int, tuple[int, int]],
    goal_states: list[int],
    best_key: tuple[int, int],
) -> list[int]:
    """Lexicographically smallest optimal plan as action indices.

    Smallest-action-first DFS over the optimal subgraph (edges where
    dist[s] + (cost, 1) == dist[t]), memoizing dead ends. Optimal edges
    strictly increase the step count, so the subgraph is a DAG and each
    state is explored at most once; the first complete path is the
    lexicographic minimum.
    """
    order = _action_order(packed)
    goal_set = set(goal_states)
    dead: set[int] = set()
    plan: list[int] = []
    frames: list[list[int]] = [[packed.init, 0, 0, 0]]  # state, g, steps, resume
    while frames:
        state, g, steps, pos = frames[-1]
        if (g, steps) == best_key and state in goal_set:
            return plan
        advanced = False
        while pos < len(order):
            i = order[pos]
            pos += 1
            if packed.applicable(state, i):
                nxt = packed.successor(state, i)
                if nxt not in dead and dist.get(nxt) == (g + packed.cost[i], steps + 1):
                    frames[-1][3] = pos
                    plan.append(i)
                    frames.append([nxt, g + packed.cost[i], steps + 1, 0])
                    advanced = True
                    break
        if not advanced:
            dead.add(state)
            frames.pop()
            if plan:
                plan.pop()
    raise ValidationError(  # pragma: no cover - guarded by Dijkstra correctness
        "internal error: optimal plan reconstruction failed"
    )


def hmax(packed: PackedTask, state: int) -> int:
    """Admissible max-cost relaxation; negative preconditions ignored."""
    INF = float("inf")
    values = [0 if state >> i & 1 else INF for i in range(packed.nprops)]
    pre_props = [
        [i for i in range(packed.nprops) if packed.pre_pos[a] >> i & 1]
        for a in range(len(packed.cost))
    ]
    add_props = [
        [i for i in range(packed.nprops) if packed.add[a] >> i & 1]
        for a in range(len(packed.cost))
    ]
    changed = True
    while changed:
        changed = False
        for a in range(len(packed.cost)):
            pre = max((values[p] for p in pre_props[a]), default=0)
            if pre == INF:
                continue
            reach = pre + packed.cost[a]
            for p in add_props[a]:
                if reach < values[p]:
                    values[p] = reach
                    changed = True
    goal = max(
        (values[i] for i in range(packed.nprops) if packed.goal_pos >> i & 1),
        default=0,
    )
    return -1 if goal == INF else int(goal)


def _astar_min_cost(
    packed: PackedTask, cfg: SearchConfig, should_stop
) -> tuple[str, int | None, int]:
    """A* with hmax; returns (status, optimal cost, expansions)."""
    deadline = time.monotonic() + cfg.time_cap
    h0 = hmax(packed, packed.init)
    if h0 < 0:
        return EXHAUSTED, None, 0
    heap = [(h0, 0, packed.init)]
    settled: set[int] = set()
    expansions = 0
    while heap:
        f, g, state = heappop(heap)
        if state in settled:
            continue
        settled.add(state)
        expansions += 1
        if packed.is_goal(state):
            return FOUND, g, expansions
        if expansions > cfg.node_cap:
            return NODE_LIMIT, None, expansions
        if expansions % 256 == 0:
            if time.monotonic() > deadline:
                return TIME_LIMIT, None, expansions
            if should_stop is not None and should_stop():
                return CANCELLED, None, expansions
        for i in range(len(packed.cost)):
            if packed.applicable(state, i):
                ns = packed.successor(state, i)
                if ns not in settled:
                    h = hmax(packed, ns)
                    if h >= 0:
                        heappush(heap, (g + packed.cost[i] + h, g + packed.cost[i], ns))
    return EXHAUSTED, None, expansions


def _bounded_dijkstra(
    packed: PackedTask, cost_bound: int
) -> tuple[dict[int, tuple[int, int]], list[int], tuple[int, int] | None]:
    """Settle every state with cost <= bound; used after A* fixes g*."""
    dist: dict[int, tuple[int, int]] = {}
    goal_states: list[int] = []
    best_key: tuple[int, int] | None = None
    heap = [(0, 0, packed.init)]
    while heap:
        g, steps, state = heappop(heap)
        key = (g, steps)
        if best_key is not None and key > best_key:
            break
        if state in dist:
            continue
        dist[state] = key
        if packed.is_goal(state):
            if best_key is None:
                best_key = key
            goal_states.append(state)
            continue
        if best_key is not None:
            continue
        for i in range(len(packed.cost)):
            if packed.applicable(state, i):
                ng = g + packed.cost[i]
                if ng <= cost_bound:
                    ns = packed.successor(state, i)
                    if ns not in dist:
                        heappush(heap, (ng, steps + 1, ns))
    return dist, goal_states, best_key


def _greedy(
    packed: PackedTask, cfg: SearchConfig, should_stop
) -> tuple[str, list[int] | None, int]:
    """Greedy best-first on the additive relaxation (inadmissible)."""

    def hadd(state: int) -> int:
        INF = float("inf")
        values = [0 if state >> i & 1 else INF for i in range(packed.nprops)]
        changed = True
        while changed:
            changed = False
            for a in range(len(packed.cost)):
                total = 0
                for p in range(packed.nprops):
                    if packed.pre_pos[a] >> p & 1:
                        if values[p] == INF:
                            total = INF
                            break
                        total += values[p]
                if total == INF:
                    continue
                reach = total + packed.cost[a]
                for p in range(packed.nprops):
                    if packed.add[a] >> p & 1 and reach < values[p]:
                        values[p] = reach
                        changed = True
        total = 0
        for p in range(packed.nprops):
            if packed.goal_pos >> p & 1:
                if values[p] == INF:
                    return -1
                total += values[p]
        return int(total)

    deadline = time.monotonic() + cfg.time_cap
    h0 = hadd(packed.init)
    if h0 < 0:
        return EXHAUSTED, None, 0
    order = _action_order(packed)
    heap = [(h0, 0, 0, packed.init)]
    parents: dict[int, tuple[int, int]] = {packed.init: (-1, -1)}
    settled: set[int] = set()
    expansions = 0
    while heap:
        _, g, steps, state = heappop(heap)
        if state in settled:
            continue
        settled.add(state)
        expansions += 1
        if packed.is_goal(state):
            plan: list[int] = []
            cur = state
            while parents[cur][0] != -1:
                prev, action = parents[cur]
                plan.append(action)
                cur = prev
            plan.reverse()
            return FOUND, plan, expansions
        if expansions > cfg.node_cap:
            return NODE_LIMIT, None, expansions
        if expansions % 256 == 0:
            if time.monotonic() > deadline:
                return TIME_LIMIT, None, expansions
            if should_stop is not None and should_stop():
                return CANCELLED, None, expansions
        for i in order:
            if packed.applicable(state, i):
                ns = packed.successor(state, i)
                if ns not in settled and ns not in parents:
                    h = hadd(ns)
                    if h >= 0:
                        parents[ns] = (state, i)
                        heappush(heap, (h, g + packed.cost[i], steps + 1, ns))
    return EXHAUSTED, None, expansions


def solve(
    task: GroundTask, cfg: SearchConfig | None = None, should_stop=None
) -> SolveOutcome:
    """Search for a plan; optimal mode returns the exact tie-broken optimum."""
    cfg = cfg or SearchConfig()
    packed = pack_task(task)
    started = time.monotonic()

    if cfg.mode == MODE_GREEDY:
        status, plan_idx, expansions = _greedy(packed, cfg, should_stop)
        engine = "pure"
    elif cfg.heuristic == "hmax":
        engine = "pure"
        status, gstar, expansions = _astar_min_cost(packed, cfg, should_stop)
        if status == FOUND:
            dist, goal_states, best_key = _bounded_dijkstra(packed, gstar)
            plan_idx = _reconstruct(packed, dist, goal_states, best_key)
        else:
            plan_idx = None
    else:
        engine, kernel = _select_engine(packed)
        status, dist, goal_states, best_key, expansions = kernel(
            packed, cfg.node_cap, cfg.time_cap, should_stop
        )
        plan_idx = (
            _reconstruct(packed, dist, goal_states, best_key) if status == FOUND else None
        )

    stats = {
        "engine": engine,
        "expansions": expansions,
        "elapsed": time.monotonic() - started,
        "kernel_status": status,
    }
    if status == FOUND:
        steps = tuple(packed.signatures[i] for i in plan_idx)
        total = sum(packed.cost[i] for i in plan_idx)
        return SolveOutcome(
            status=STATUS_SOLVED,
            plan=Plan(steps=steps, total_cost=total, provenance="internal", mode=cfg.mode),
            stats=stats,
        )
    if status == EXHAUSTED:
        return SolveOutcome(status=STATUS_UNSOLVABLE, stats=stats)
    return SolveOutcome(status=STATUS_RESOURCE_LIMIT, stats=stats)
