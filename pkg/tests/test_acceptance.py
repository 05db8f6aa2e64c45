"""Acceptance suite: one test per criterion, exact tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to get one line per
criterion. Criteria 1-8 are the primary gate and run with no UI built;
criterion 9 (UI flow) lives in the frontend's own test suite.
"""

import json
import random
import time

import pytest
from fastapi.testclient import TestClient

from ethiplan.errors import ValidationError
from ethiplan.ethics import EthicalFeature, EthicalRule, EthicalTask, parse_ethical, print_ethical, simulate_features
from ethiplan.examplelib import list_examples
from ethiplan.llm import RepairPolicy, RuleGenerationContext, ScriptedProvider, generate_rules, rules_to_document
from ethiplan.pddl import (
    ground_task,
    parse_domain,
    parse_problem,
    serialize_domain,
    serialize_problem,
    static_predicates,
)
from ethiplan.pddl.state import precondition_holds
from ethiplan.planner import SearchConfig, solve
from ethiplan.service import ServiceConfig, create_app
from ethiplan.transpile import compile_task, project_plan
from ethiplan.transpile.compiler import PLANNING_MODE

from micros import all_micro_tasks
from oracles import dijkstra_optimal_cost, enumerate_plans, plan_cost
from test_planner import random_task


def report(criterion: int, detail: str):
    print(f"[acceptance] criterion {criterion}: PASS ({detail})")


def test_criterion_1_roundtrip_bundled_corpus():
    """Parse -> serialize -> parse is structurally identical on the corpus."""
    start = time.monotonic()
    entries = list_examples()
    assert len(entries) >= 6
    assert {e.domain_key for e in entries} == {
        "autonomous-vehicles",
        "elderly-care",
        "firefighting-rescue",
    }
    for entry in entries:
        domain, problem, rules = entry.parse()
        assert parse_domain(serialize_domain(domain)) == domain, entry.id
        assert parse_problem(serialize_problem(problem), domain) == problem, entry.id
        assert parse_ethical(print_ethical(rules), domain) == rules, entry.id
    elapsed = time.monotonic() - start
    assert elapsed < 2.0
    report(1, f"{len(entries)} tasks round-tripped in {elapsed:.2f}s")


def test_criterion_2_cost_accounting_theorem():
    """Compiled cost = base + simulated penalty, exactly; completions unique."""
    start = time.monotonic()
    bound = 6
    checked = 0
    for name, task in all_micro_tasks():
        orig = ground_task(task.domain, task.problem)
        assert len(orig.actions) <= 8, name
        compiled = compile_task(task)
        comp = ground_task(compiled.domain, compiled.problem)
        m = sum(1 for r in task.rules if r.has_positive())

        completions = {}
        for comp_plan in enumerate_plans(comp, bound + 1 + m):
            projected = project_plan(comp_plan, compiled)
            pi = list(projected.signatures)
            tally = simulate_features(task, pi)
            assert plan_cost(comp, comp_plan) == plan_cost(orig, pi) + tally.penalty_total
            completions[tuple(pi)] = completions.get(tuple(pi), 0) + 1
            checked += 1

        original_plans = {tuple(p) for p in enumerate_plans(orig, bound)}
        assert set(completions) == original_plans, name
        assert all(count == 1 for count in completions.values()), name
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    report(2, f"{checked} compiled plans checked across 3 micro-domains in {elapsed:.1f}s")


def test_criterion_3_variant_exclusivity():
    """1000 random states per compiled micro-domain; exactly one variant."""
    rng = random.Random(1729)
    checks = 0
    for name, task in all_micro_tasks():
        orig = ground_task(task.domain, task.problem)
        compiled = compile_task(task)
        comp = ground_task(compiled.domain, compiled.problem)
        statics = static_predicates(compiled.domain)
        static_truth = {
            i: (i in comp.init)
            for i, atom in enumerate(comp.propositions)
            if atom.predicate in statics
        }
        mode_idx = next(
            i for i, a in enumerate(comp.propositions) if a.predicate == PLANNING_MODE
        )
        variants_of = {}
        for ga in comp.actions:
            entry = compiled.back_map.get(ga.name.lower())
            if entry and entry.original_action is not None:
                variants_of.setdefault(
                    (entry.original_action.lower(), ga.args), []
                ).append(ga)
        comp_index = {str(atom): i for i, atom in enumerate(comp.propositions)}
        orig_pre = {
            (a.name.lower(), a.args): [
                (comp_index[str(orig.atom_of(i))], pos) for i, pos in a.precondition
            ]
            for a in orig.actions
        }
        for _ in range(1000):
            state = {
                i
                for i in range(len(comp.propositions))
                if static_truth.get(i, rng.random() < 0.5)
            }
            state.add(mode_idx)
            state -= {i for i, truth in static_truth.items() if not truth}
            fstate = frozenset(state)
            for key, pre in orig_pre.items():
                if all((idx in fstate) == pos for idx, pos in pre):
                    applicable = [
                        v
                        for v in variants_of.get(key, [])
                        if precondition_holds(fstate, v)
                    ]
                    assert len(applicable) == 1, (name, key)
                    checks += 1
    report(3, f"{checks} (state, action) applicability checks, zero violations")


def test_criterion_4_planner_optimality():
    """Internal optimal cost == brute-force Dijkstra, exactly."""
    start = time.monotonic()
    rng = random.Random(424242)
    solved = 0
    total = 0
    while solved < 10:
        task = random_task(rng)
        total += 1
        expected = dijkstra_optimal_cost(task)
        outcome = solve(task)
        if expected is None:
            assert outcome.status == "unsolvable"
            continue
        assert outcome.status == "solved"
        assert outcome.plan.total_cost == expected
        solved += 1
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    report(4, f"{solved} solvable of {total} random micro-tasks matched in {elapsed:.1f}s")


RANK_DOMAIN = """
(define (domain rank-dominance)
  (:requirements :typing :action-costs)
  (:types stage)
  (:predicates (pos ?s - stage) (next ?a - stage ?b - stage) (leap ?a - stage ?b - stage))
  (:functions (total-cost))
  (:action advance
    :parameters (?a - stage ?b - stage)
    :precondition (and (pos ?a) (next ?a ?b))
    :effect (and (not (pos ?a)) (pos ?b) (increase (total-cost) 0)))
  (:action jump
    :parameters (?a - stage ?b - stage)
    :precondition (and (pos ?a) (leap ?a ?b))
    :effect (and (not (pos ?a)) (pos ?b) (increase (total-cost) 0)))
)
"""


def _rank_dominance_task():
    n = 99
    objects = " ".join(f"s{i}" for i in range(n + 1)) + " - stage"
    nexts = " ".join(f"(next s{i} s{i+1})" for i in range(n))
    problem_text = (
        f"(define (problem rank-choice) (:domain rank-dominance)\n"
        f"  (:objects {objects})\n"
        f"  (:init (pos s0) {nexts} (leap s0 s{n}) (= (total-cost) 0))\n"
        f"  (:goal (and (pos s{n})))\n"
        f"  (:metric minimize (total-cost)))"
    )
    domain = parse_domain(RANK_DOMAIN)
    problem = parse_problem(problem_text, domain)
    rules = (
        EthicalRule(
            id="small-harm",
            trigger_action="advance",
            features=(EthicalFeature("minor-violation", "negative", 2),),
        ),
        EthicalRule(
            id="big-harm",
            trigger_action="jump",
            features=(EthicalFeature("major-violation", "negative", 3),),
        ),
    )
    return EthicalTask(domain, problem, rules)


def test_criterion_5_rank_dominance():
    """99 rank-2 firings (99000) beat one rank-3 firing (100000), exactly."""
    task = _rank_dominance_task()
    compiled = compile_task(task)
    comp = ground_task(compiled.domain, compiled.problem)
    outcome = solve(comp, SearchConfig(node_cap=1_000_000, time_cap=60.0))
    assert outcome.status == "solved"
    projected = project_plan(outcome.plan.steps, compiled)
    # plan B: the 99-step chain, not the single jump
    assert len(projected.steps) == 99
    assert all(s.signature.startswith("(advance") for s in projected.steps)
    assert outcome.plan.total_cost == 99 * 1000
    tally = simulate_features(task, projected.signatures)
    assert tally.penalty_total == 99000 < 100000
    report(5, "optimal solver picked 99 rank-2 firings (99000) over one rank-3 (100000)")


def _run_pipeline(client, example_id):
    r = client.post("/api/v1/sessions", json={"example_id": example_id})
    assert r.status_code == 201
    sid = r.json()["id"]
    for target in ("RulesGenerated", "RulesFinalized", "CodeGenerated", "CodeFinalized", "Planned"):
        resp = client.post(f"/api/v1/sessions/{sid}/advance", json={"target": target})
        assert resp.status_code == 200, (target, resp.text)
    comparison = client.get(f"/api/v1/sessions/{sid}/comparison")
    assert comparison.status_code == 200
    return sid, comparison.content


def _bruteforce_shortcut_verdict(example_id):
    entry = [e for e in list_examples() if e.id == example_id][0]
    domain, problem, rules = entry.parse()
    task = EthicalTask(domain, problem, rules)
    ground = ground_task(domain, problem)
    best = {True: None, False: None}
    for plan in enumerate_plans(ground, 6):
        value = plan_cost(ground, plan) + simulate_features(task, plan).penalty_total
        uses = any("drive-shortcut" in s for s in plan)
        if best[uses] is None or value < best[uses]:
            best[uses] = value
    return best


def test_criterion_6_end_to_end_determinism(tmp_path):
    """Byte-identical comparisons across runs; shortcut decision matches
    exhaustive enumeration in both scenario variants."""
    config = ServiceConfig(storage_dir=str(tmp_path / "sessions"))
    with TestClient(create_app(config)) as client:
        for example_id, expect_shortcut in (
            ("av-hospital-emergency", True),
            ("av-leisure-trip", False),
        ):
            sid1, bytes1 = _run_pipeline(client, example_id)
            sid2, bytes2 = _run_pipeline(client, example_id)
            assert sid1 != sid2
            assert bytes1 == bytes2, example_id

            doc = json.loads(bytes1)
            steps = doc["ethical"]["steps"]
            used = any("drive-shortcut" in s for s in steps)
            assert used == expect_shortcut, example_id

            best = _bruteforce_shortcut_verdict(example_id)
            assert best[True] is not None and best[False] is not None
            if expect_shortcut:
                assert best[True] < best[False]
                assert doc["ethical"]["total_cost"] == best[True]
            else:
                assert best[False] < best[True]
                assert doc["ethical"]["total_cost"] == best[False]
    report(6, "two runs byte-identical; shortcut choice matches enumeration in both variants")


def test_criterion_7_repair_loop_contract():
    entry = [e for e in list_examples() if e.id == "av-hospital-emergency"][0]
    domain, _, rules = entry.parse()
    ctx = RuleGenerationContext(
        domain_text=entry.domain_text,
        problem_text=entry.problem_text,
        principles=entry.principles,
        initial_state_notes=entry.initial_state_notes,
        assumptions=entry.assumptions,
    )
    good = f"```json\n{rules_to_document(rules)}\n```"

    scripted = ScriptedProvider(["bad one", "bad two", good])
    result = generate_rules(scripted, ctx, RepairPolicy(max_attempts=3))
    assert result.ok and result.attempts == 3 and scripted.calls == 3

    always_bad = ScriptedProvider(["never valid"])
    failure = generate_rules(always_bad, ctx, RepairPolicy(max_attempts=3))
    assert not failure.ok
    assert failure.attempts == 3 and always_bad.calls == 3
    assert failure.findings  # last findings preserved
    report(7, "invalid,invalid,valid -> attempts=3; always-invalid fails at the bound with findings")


def test_criterion_8_downstream_invalidation_and_baseline_independence(tmp_path):
    config = ServiceConfig(storage_dir=str(tmp_path / "sessions"))
    with TestClient(create_app(config)) as client:
        sid, before_bytes = _run_pipeline(client, "av-leisure-trip")
        before = json.loads(before_bytes)

        r = client.patch(
            f"/api/v1/sessions/{sid}/rules",
            json={
                "edits": [
                    {
                        "op": "set-significance",
                        "rule_id": "avoid-restricted-roads",
                        "feature": "unauthorised-route",
                        "significance": 5,
                    }
                ]
            },
        )
        assert r.status_code == 200
        gone = client.get(f"/api/v1/sessions/{sid}/comparison")
        assert gone.status_code == 404
        assert gone.json()["code"] == "not-available"

        for target in ("RulesFinalized", "CodeGenerated", "CodeFinalized", "Planned"):
            resp = client.post(f"/api/v1/sessions/{sid}/advance", json={"target": target})
            assert resp.status_code == 200, (target, resp.text)
        after = json.loads(client.get(f"/api/v1/sessions/{sid}/comparison").read())
        assert after["baseline"] == before["baseline"]  # exact plan equality
        row = [
            r
            for r in after["tally"]["rows"]
            if r["rule_id"] == "avoid-restricted-roads"
        ][0]
        assert row["significance"] == 5
    report(8, "comparison invalidated after mutation; recomputed baseline identical")
