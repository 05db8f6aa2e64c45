#!/usr/bin/env python3
"""Compare the compiled and pure search kernels on a gripper-style family.

Usage: python3 benchmarks/bench_search.py [--balls 4 6 8 10]

Each task moves N balls between two rooms with a one-ball gripper, which
gives blind uniform-cost search an exponentially growing frontier while
staying under the compiled kernel's 64-proposition bound.
"""

import argparse
import os
import time

from ethiplan.pddl import ground_task, parse_domain, parse_problem
from ethiplan.planner import SearchConfig, compiled_kernel_available, solve

DOMAIN = """
(define (domain gripper)
  (:requirements :typing)
  (:types room ball)
  (:predicates (robot-in ?r - room) (ball-in ?b - ball ?r - room)
               (carrying ?b - ball) (hand-free))
  (:action move
    :parameters (?from - room ?to - room)
    :precondition (and (robot-in ?from))
    :effect (and (not (robot-in ?from)) (robot-in ?to)))
  (:action pick
    :parameters (?b - ball ?r - room)
    :precondition (and (robot-in ?r) (ball-in ?b ?r) (hand-free))
    :effect (and (carrying ?b) (not (ball-in ?b ?r)) (not (hand-free))))
  (:action drop
    :parameters (?b - ball ?r - room)
    :precondition (and (robot-in ?r) (carrying ?b))
    :effect (and (ball-in ?b ?r) (not (carrying ?b)) (hand-free)))
)
"""


def make_problem(balls: int) -> str:
    names = " ".join(f"b{i}" for i in range(balls))
    init = " ".join(f"(ball-in b{i} left)" for i in range(balls))
    goal = " ".join(f"(ball-in b{i} right)" for i in range(balls))
    return (
        f"(define (problem gripper-{balls}) (:domain gripper)\n"
        f"  (:objects left right - room {names} - ball)\n"
        f"  (:init (robot-in left) (hand-free) {init})\n"
        f"  (:goal (and {goal})))"
    )


def run(task, engine: str):
    forced = os.environ.pop("ETHIPLAN_FORCE_PURE", None)
    if engine == "pure":
        os.environ["ETHIPLAN_FORCE_PURE"] = "1"
    try:
        start = time.perf_counter()
        outcome = solve(task, SearchConfig(node_cap=20_000_000, time_cap=600.0))
        elapsed = time.perf_counter() - start
    finally:
        os.environ.pop("ETHIPLAN_FORCE_PURE", None)
        if forced is not None:
            os.environ["ETHIPLAN_FORCE_PURE"] = forced
    assert outcome.status == "solved"
    assert outcome.stats["engine"] == engine, outcome.stats
    return outcome, elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--balls", nargs="*", type=int, default=[4, 6, 8, 10])
    args = parser.parse_args()

    if not compiled_kernel_available():
        print("compiled kernel not available; benchmarking the pure engine only")

    domain = parse_domain(DOMAIN)
    print(
        f"{'balls':>5} {'props':>6} {'actions':>8} {'expansions':>11} "
        f"{'pure (s)':>9} {'compiled (s)':>13} {'speedup':>8}"
    )
    for balls in args.balls:
        problem = parse_problem(make_problem(balls), domain)
        task = ground_task(domain, problem)
        pure_outcome, pure_time = run(task, "pure")
        row = (
            f"{balls:>5} {len(task.propositions):>6} {len(task.actions):>8} "
            f"{pure_outcome.stats['expansions']:>11} {pure_time:>9.3f}"
        )
        if compiled_kernel_available():
            compiled_outcome, compiled_time = run(task, "compiled")
            assert compiled_outcome.plan == pure_outcome.plan, "engines disagree"
            row += f" {compiled_time:>13.3f} {pure_time / compiled_time:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
