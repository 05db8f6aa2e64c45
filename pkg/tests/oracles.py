"""Independent brute-force oracles.

Deliberately dumb and separate from the library's search/compilation
paths: plan enumeration by DFS over applicable actions, and a textbook
Dijkstra over the explicitly materialised state graph.
"""

import heapq

from ethiplan.pddl.ground import GroundTask
from ethiplan.pddl.state import goal_satisfied, precondition_holds


def enumerate_plans(task: GroundTask, max_len: int):
    """Yield every valid plan (action signature list) of length <= max_len."""

    def rec(state, prefix):
        if goal_satisfied(state, task):
            yield list(prefix)
        if len(prefix) == max_len:
            return
        for action in task.actions:
            if precondition_holds(state, action):
                nxt = frozenset((state - action.delete) | action.add)
                prefix.append(action.signature)
                yield from rec(nxt, prefix)
                prefix.pop()

    yield from rec(task.init, [])


def plan_cost(task: GroundTask, plan: list[str]) -> int:
    by_sig = {a.signature: a for a in task.actions}
    return sum(by_sig[s].cost for s in plan)


def explicit_state_graph(task: GroundTask, state_cap: int = 200_000):
    """Materialise all reachable states and transitions."""
    states = {task.init: 0}
    edges = []  # (src, dst, cost)
    frontier = [task.init]
    while frontier:
        state = frontier.pop()
        src = states[state]
        for action in task.actions:
            if precondition_holds(state, action):
                nxt = frozenset((state - action.delete) | action.add)
                if nxt not in states:
                    if len(states) >= state_cap:
                        raise RuntimeError("state graph too large for the oracle")
                    states[nxt] = len(states)
                    frontier.append(nxt)
                edges.append((src, states[nxt], action.cost))
    return states, edges


def dijkstra_optimal_cost(task: GroundTask) -> int | None:
    """Minimum goal cost over the explicit graph; None when unreachable."""
    states, edges = explicit_state_graph(task)
    adjacency = {}
    for src, dst, cost in edges:
        adjacency.setdefault(src, []).append((dst, cost))
    goals = {idx for state, idx in states.items() if goal_satisfied(state, task)}

    dist = {0: 0}
    heap = [(0, 0)]
    done = set()
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        if node in goals:
            return d
        for dst, cost in adjacency.get(node, []):
            nd = d + cost
            if dst not in dist or nd < dist[dst]:
                dist[dst] = nd
                heapq.heappush(heap, (nd, dst))
    return None
