# distutils: language = c++
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dijkstra kernel over single-word bitmask states.

Mirrors _pysearch.dijkstra exactly: settles states in nondecreasing
(cost, steps) order, drains every state whose key equals the first goal
key, and returns the settled distance map for the shared, pure-Python
plan reconstruction. Only tasks with <= 64 propositions are accepted;
the dispatcher in ethiplan.planner.search routes larger tasks to the
pure kernel.
"""

import time as _time

from libc.stdint cimport int64_t, uint64_t
from libcpp.pair cimport pair
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

FOUND = "found"
EXHAUSTED = "exhausted"
NODE_LIMIT = "node-limit"
TIME_LIMIT = "time-limit"
CANCELLED = "cancelled"

cdef struct Entry:
    int64_t g
    int64_t steps
    uint64_t state

ctypedef pair[int64_t, int64_t] Key


cdef inline bint _less(const Entry &a, const Entry &b) noexcept nogil:
    if a.g != b.g:
        return a.g < b.g
    if a.steps != b.steps:
        return a.steps < b.steps
    return a.state < b.state


cdef inline void _heap_push(vector[Entry] &heap, Entry e) noexcept nogil:
    cdef size_t i = heap.size()
    cdef size_t parent
    cdef Entry tmp
    heap.push_back(e)
    while i > 0:
        parent = (i - 1) >> 1
        if _less(heap[i], heap[parent]):
            tmp = heap[i]
            heap[i] = heap[parent]
            heap[parent] = tmp
            i = parent
        else:
            break


cdef inline Entry _heap_pop(vector[Entry] &heap) noexcept nogil:
    cdef Entry top = heap[0]
    cdef Entry tmp
    cdef size_t n, i = 0, child
    heap[0] = heap[heap.size() - 1]
    heap.pop_back()
    n = heap.size()
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and _less(heap[child + 1], heap[child]):
            child += 1
        if _less(heap[child], heap[i]):
            tmp = heap[i]
            heap[i] = heap[child]
            heap[child] = tmp
            i = child
        else:
            break
    return top


def dijkstra(packed, node_cap, time_cap, should_stop=None):
    """Same return shape as the pure kernel:
    (status, dist, goal_states, best_key, expansions)."""
    if packed.nprops > 64:
        raise ValueError("compiled kernel handles at most 64 propositions")

    cdef int nact = len(packed.cost)
    cdef vector[uint64_t] pre_pos, pre_neg, addm, delk
    cdef vector[int64_t] cost
    cdef int i
    for i in range(nact):
        pre_pos.push_back(<uint64_t> packed.pre_pos[i])
        pre_neg.push_back(<uint64_t> packed.pre_neg[i])
        addm.push_back(<uint64_t> packed.add[i])
        delk.push_back(<uint64_t> packed.del_keep[i])
        cost.push_back(<int64_t> packed.cost[i])

    cdef uint64_t goal_pos = <uint64_t> packed.goal_pos
    cdef uint64_t goal_neg = <uint64_t> packed.goal_neg
    cdef int64_t cap = <int64_t> node_cap

    cdef unordered_map[uint64_t, Key] dist
    cdef vector[uint64_t] goal_states
    cdef vector[Entry] heap
    cdef Entry cur, nxt
    cdef bint have_best = False
    cdef int64_t best_g = 0, best_steps = 0
    cdef int64_t expansions = 0
    cdef uint64_t state, ns
    cdef double deadline = _time.monotonic() + <double> time_cap
    cdef str status = EXHAUSTED

    cur.g = 0
    cur.steps = 0
    cur.state = <uint64_t> packed.init
    _heap_push(heap, cur)

    while heap.size() > 0:
        cur = _heap_pop(heap)
        if have_best and (cur.g > best_g or (cur.g == best_g and cur.steps > best_steps)):
            break
        if dist.count(cur.state):
            continue
        dist[cur.state] = Key(cur.g, cur.steps)
        expansions += 1
        state = cur.state

        if (state & goal_pos) == goal_pos and not (state & goal_neg):
            if not have_best:
                have_best = True
                best_g = cur.g
                best_steps = cur.steps
            goal_states.push_back(state)
            continue
        if have_best:
            continue

        if expansions > cap:
            status = NODE_LIMIT
            break
        if expansions % 4096 == 0:
            if _time.monotonic() > deadline:
                status = TIME_LIMIT
                break
            if should_stop is not None and should_stop():
                status = CANCELLED
                break

        for i in range(nact):
            if (state & pre_pos[i]) == pre_pos[i] and not (state & pre_neg[i]):
                ns = (state & delk[i]) | addm[i]
                if not dist.count(ns):
                    nxt.g = cur.g + cost[i]
                    nxt.steps = cur.steps + 1
                    nxt.state = ns
                    _heap_push(heap, nxt)

    if have_best:
        status = FOUND

    out_dist = {}
    cdef pair[uint64_t, Key] kv
    for kv in dist:
        out_dist[int(kv.first)] = (int(kv.second.first), int(kv.second.second))

    out_goals = [int(goal_states[j]) for j in range(goal_states.size())]
    best_key = (int(best_g), int(best_steps)) if have_best else None
    return status, out_dist, out_goals, best_key, int(expansions)
