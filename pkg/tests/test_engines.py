"""Engine selection: compiled kernel when available, pure fallback, parity."""

import os

import pytest

from ethiplan.pddl import ground_task, parse_domain, parse_problem
from ethiplan.planner import compiled_kernel_available, solve

from micros import av_micro_task


@pytest.fixture()
def small_task():
    t = av_micro_task(emergency=True)
    return ground_task(t.domain, t.problem)


def test_small_task_uses_compiled_kernel_when_available(small_task):
    outcome = solve(small_task)
    expected = "compiled" if compiled_kernel_available() else "pure"
    assert outcome.stats["engine"] == expected


def test_force_pure_env_switch(small_task):
    os.environ["ETHIPLAN_FORCE_PURE"] = "1"
    try:
        assert solve(small_task).stats["engine"] == "pure"
    finally:
        del os.environ["ETHIPLAN_FORCE_PURE"]


def test_wide_task_falls_back_to_pure():
    # more than 64 propositions exceeds the compiled kernel's state word
    preds = " ".join(f"(p{i})" for i in range(70))
    effects = " ".join(f"(p{i})" for i in range(70))
    domain = parse_domain(
        f"(define (domain wide) (:predicates {preds}) "
        f"(:action all-on :parameters () :precondition (and) :effect (and {effects})))"
    )
    problem = parse_problem(
        "(define (problem widep) (:domain wide) (:init) (:goal (and (p69))))", domain
    )
    task = ground_task(domain, problem)
    outcome = solve(task)
    assert outcome.stats["engine"] == "pure"
    assert outcome.status == "solved"
    assert outcome.plan.steps == ("(all-on)",)


@pytest.mark.skipif(not compiled_kernel_available(), reason="compiled kernel not built")
def test_gripper_parity_with_pure(small_task):
    import importlib

    bench = importlib.import_module("bench_search")
    domain = parse_domain(bench.DOMAIN)
    problem = parse_problem(bench.make_problem(4), domain)
    task = ground_task(domain, problem)
    compiled_outcome, _ = bench.run(task, "compiled")
    pure_outcome, _ = bench.run(task, "pure")
    assert compiled_outcome.plan == pure_outcome.plan
    # pick+drop per ball, one crossing per delivery, a return per re-load
    assert compiled_outcome.plan.total_cost == 4 * 2 + (2 * 4 - 1)
