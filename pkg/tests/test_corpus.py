"""Corpus CI: every bundled example parses, validates, compiles, solves."""

import pytest

from ethiplan.ethics import EthicalTask, simulate_features, validate_rules
from ethiplan.examplelib import get_example, list_examples
from ethiplan.pddl import ground_task
from ethiplan.planner import solve
from ethiplan.transpile import compile_task, project_plan


@pytest.mark.parametrize("entry", list_examples(), ids=lambda e: e.id)
def test_example_parses_and_solves_end_to_end(entry):
    domain, problem, rules = entry.parse()
    assert not problem.warnings
    report = validate_rules(rules, domain)
    assert report.findings == (), entry.id

    baseline = solve(ground_task(domain, problem))
    assert baseline.status == "solved", entry.id

    task = EthicalTask(domain, problem, rules)
    compiled = compile_task(task)
    outcome = solve(ground_task(compiled.domain, compiled.problem))
    assert outcome.status == "solved", entry.id

    projected = project_plan(outcome.plan.steps, compiled)
    tally = simulate_features(task, projected.signatures)
    assert outcome.plan.total_cost == projected.base_cost_total + tally.penalty_total


def test_example_object_counts():
    expected = {
        "av-hospital-emergency": 4,
        "av-leisure-trip": 4,
        "eldercare-morning-medication": 5,
        "eldercare-evening-round": 5,
        "rescue-apartment-fire": 4,
        "rescue-warehouse-sweep": 5,
    }
    for entry in list_examples():
        domain, problem, _ = entry.parse()
        assert len(problem.objects) == expected[entry.id], entry.id


def test_catalog_covers_three_domains_twice():
    entries = list_examples()
    per_domain = {}
    for entry in entries:
        per_domain.setdefault(entry.domain_key, []).append(entry.id)
    assert set(per_domain) == {
        "autonomous-vehicles",
        "elderly-care",
        "firefighting-rescue",
    }
    assert all(len(ids) >= 2 for ids in per_domain.values())
    for entry in entries:
        assert entry.principles
        assert entry.initial_state_notes
        assert entry.assumptions


def test_examples_showcase_behavioural_differences():
    """The eldercare and rescue examples change plans, not just costs."""
    for example_id, marker in (
        ("eldercare-morning-medication", "announce-entry"),
        ("rescue-apartment-fire", "vent"),
    ):
        entry = get_example(example_id)
        domain, problem, rules = entry.parse()
        baseline = solve(ground_task(domain, problem))
        compiled = compile_task(EthicalTask(domain, problem, rules))
        ethical = solve(ground_task(compiled.domain, compiled.problem))
        projected = project_plan(ethical.plan.steps, compiled)
        assert not any(marker in s for s in baseline.plan.steps)
        assert any(marker in s for s in projected.signatures)
