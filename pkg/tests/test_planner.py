"""Solver optimality, determinism, validation, and the external adapter."""

import os
import random
import stat
import sys
import textwrap

import pytest

from ethiplan.errors import ParseError
from ethiplan.pddl import ground_task, parse_domain, parse_problem
from ethiplan.pddl.ground import GroundAction, GroundTask
from ethiplan.pddl.model import GroundAtom
from ethiplan.planner import (
    ExternalPlannerConfig,
    Plan,
    SearchConfig,
    compiled_kernel_available,
    parse_external_plan,
    run_external_planner,
    solve,
    validate_plan,
)
from ethiplan.planner.external import format_plan_file

from oracles import dijkstra_optimal_cost
from micros import av_micro_task


def make_task(props, init, goal, actions) -> GroundTask:
    """actions: list of (name, pre[(idx,pos)], add, delete, cost)."""
    atoms = tuple(GroundAtom(f"p{i}") for i in range(props))
    ground = tuple(
        GroundAction(
            name=name,
            args=(),
            precondition=tuple(pre),
            add=frozenset(add),
            delete=frozenset(delete),
            cost=cost,
        )
        for name, pre, add, delete, cost in actions
    )
    return GroundTask(
        propositions=atoms,
        init=frozenset(init),
        goal=tuple(goal),
        actions=ground,
        index={a: i for i, a in enumerate(atoms)},
    )


def random_task(rng: random.Random) -> GroundTask:
    nprops = rng.randint(4, 12)
    nactions = rng.randint(3, 20)
    actions = []
    for i in range(nactions):
        pre = rng.sample(range(nprops), rng.randint(0, 2))
        pre = [(p, rng.random() < 0.8) for p in pre]
        add = set(rng.sample(range(nprops), rng.randint(1, 3)))
        delete = set(rng.sample(range(nprops), rng.randint(0, 2))) - add
        actions.append((f"act-{i:02d}", pre, add, delete, rng.randint(0, 9)))
    init = set(rng.sample(range(nprops), rng.randint(0, nprops // 2)))
    goal = [(p, rng.random() < 0.8) for p in rng.sample(range(nprops), rng.randint(1, 3))]
    return make_task(nprops, init, goal, actions)


def test_goal_in_init_gives_empty_plan():
    task = make_task(2, {0}, [(0, True)], [("noop", [], {1}, set(), 1)])
    out = solve(task)
    assert out.status == "solved"
    assert out.plan.steps == ()
    assert out.plan.total_cost == 0


def test_single_action_cost_seven():
    task = make_task(2, {0}, [(1, True)], [("go", [(0, True)], {1}, set(), 7)])
    out = solve(task)
    assert out.plan.steps == ("(go)",)
    assert out.plan.total_cost == 7


def test_optimality_matches_bruteforce_dijkstra():
    rng = random.Random(7)
    solvable = 0
    for _ in range(30):
        task = random_task(rng)
        expected = dijkstra_optimal_cost(task)
        out = solve(task)
        if expected is None:
            assert out.status == "unsolvable"
        else:
            solvable += 1
            assert out.status == "solved"
            assert out.plan.total_cost == expected
            check = validate_plan(task, out.plan)
            assert check.ok and check.recomputed_cost == expected
    assert solvable >= 10


def test_tie_break_prefers_fewer_steps():
    # cost 4 either as two 2-cost hops or one 4-cost hop
    task = make_task(
        3,
        {0},
        [(2, True)],
        [
            ("hop-a", [(0, True)], {1}, set(), 2),
            ("hop-b", [(1, True)], {2}, set(), 2),
            ("jump", [(0, True)], {2}, set(), 4),
        ],
    )
    out = solve(task)
    assert out.plan.total_cost == 4
    assert out.plan.steps == ("(jump)",)


def test_tie_break_prefers_lexicographic_sequence():
    # two cost-5 two-step plans; the lexicographically smaller sequence
    # starts with the more expensive first hop, which a naive
    # counter-tie-broken Dijkstra would not return
    task = make_task(
        4,
        {0},
        [(3, True)],
        [
            ("act-a", [(0, True)], {1}, {0}, 5),
            ("act-z", [(1, True)], {3}, set(), 0),
            ("act-aa", [(0, True)], {2}, {0}, 0),
            ("act-b", [(2, True)], {3}, set(), 5),
        ],
    )
    out = solve(task)
    assert out.plan.total_cost == 5
    assert out.plan.steps == ("(act-a)", "(act-z)")


def test_determinism_across_runs_and_engines():
    rng = random.Random(99)
    for _ in range(10):
        task = random_task(rng)
        first = solve(task)
        second = solve(task)
        assert first.plan == second.plan and first.status == second.status
        if compiled_kernel_available():
            os.environ["ETHIPLAN_FORCE_PURE"] = "1"
            try:
                pure = solve(task)
            finally:
                del os.environ["ETHIPLAN_FORCE_PURE"]
            assert pure.plan == first.plan and pure.status == first.status


def test_unsolvable_vs_resource_limit_distinct():
    # unreachable goal, tiny space: exhausted -> unsolvable
    task = make_task(3, {0}, [(2, True)], [("spin", [(0, True)], {1}, set(), 1)])
    assert solve(task).status == "unsolvable"

    # large toggle space with unreachable goal: cap -> resource-limit
    toggles = [(f"on-{i:02d}", [], {i}, set(), 1) for i in range(16)]
    big = make_task(17, set(), [(16, True)], toggles)
    out = solve(big, SearchConfig(node_cap=50))
    assert out.status == "resource-limit"
    assert out.stats["kernel_status"] == "node-limit"


def test_cooperative_cancellation():
    toggles = [(f"on-{i:02d}", [], {i}, set(), 1) for i in range(16)]
    big = make_task(17, set(), [(16, True)], toggles)
    out = solve(big, should_stop=lambda: True)
    assert out.status == "resource-limit"
    assert out.stats["kernel_status"] == "cancelled"


def test_hmax_mode_matches_blind():
    rng = random.Random(3)
    for _ in range(8):
        task = random_task(rng)
        blind = solve(task)
        informed = solve(task, SearchConfig(heuristic="hmax"))
        assert informed.status == blind.status
        assert informed.plan == blind.plan


def test_greedy_mode_finds_valid_plan():
    task = av_task_ground()
    out = solve(task, SearchConfig(mode="greedy"))
    assert out.status == "solved"
    assert out.plan.mode == "greedy"
    assert validate_plan(task, out.plan).ok


def av_task_ground():
    t = av_micro_task(emergency=False)
    return ground_task(t.domain, t.problem)


def test_validate_plan_reports_bad_step():
    task = av_task_ground()
    bogus = Plan(steps=("(drive mid hospital)",), total_cost=1)
    report = validate_plan(task, bogus)
    assert not report.ok
    assert report.findings[0].step == 0


def test_validate_plan_checks_goal():
    task = av_task_ground()
    report = validate_plan(task, Plan(steps=(), total_cost=0))
    assert not report.ok
    assert "goal" in report.findings[0].message


def test_parse_external_plan_formats():
    plan = parse_external_plan(
        "(drive home mid)\n(drive mid hospital)\n; cost = 12 (unit cost)\n"
    )
    assert plan.steps == ("(drive home mid)", "(drive mid hospital)")
    assert plan.total_cost == 12
    assert plan.provenance == "external"

    empty = parse_external_plan("")
    assert empty.steps == () and empty.total_cost is None

    with pytest.raises(ParseError) as exc:
        parse_external_plan("(ok step)\nnot a step\n")
    assert exc.value.line == 2


def test_format_plan_file_roundtrip():
    plan = Plan(steps=("(a)", "(b c)"), total_cost=3)
    again = parse_external_plan(format_plan_file(plan))
    assert again.steps == plan.steps and again.total_cost == 3


FAKE_PLANNER = textwrap.dedent(
    """\
    #!{python}
    import sys
    from ethiplan.pddl import ground_task, parse_domain, parse_problem
    from ethiplan.planner import solve
    from ethiplan.planner.external import format_plan_file

    domain_path, problem_path = sys.argv[1], sys.argv[2]
    plan_path = sys.argv[sys.argv.index("--plan-file") + 1]
    domain = parse_domain(open(domain_path).read())
    problem = parse_problem(open(problem_path).read(), domain)
    outcome = solve(ground_task(domain, problem))
    if outcome.status != "solved":
        sys.exit(2)
    open(plan_path, "w").write(format_plan_file(outcome.plan))
    """
)


def test_external_adapter_matches_internal(tmp_path):
    script = tmp_path / "fake-planner"
    script.write_text(FAKE_PLANNER.format(python=sys.executable))
    script.chmod(script.stat().st_mode | stat.S_IEXEC)

    t = av_micro_task(emergency=False)
    task = ground_task(t.domain, t.problem)
    internal = solve(task)

    config = ExternalPlannerConfig(executable=str(script))
    plan, validation = run_external_planner(config, t.domain, t.problem, task)
    assert validation.ok
    assert plan.provenance == "external"
    assert plan.total_cost == internal.plan.total_cost
    assert validation.recomputed_cost == internal.plan.total_cost
