"""Compilation correctness: partitions, audit stage, cost accounting."""

import random

import pytest

from ethiplan.errors import CompilationError, ResourceLimitError
from ethiplan.ethics import EthicalFeature, EthicalRule, EthicalTask, simulate_features
from ethiplan.pddl import (
    ground_task,
    parse_domain,
    parse_problem,
    serialize_domain,
    serialize_problem,
    static_predicates,
)
from ethiplan.pddl.state import precondition_holds
from ethiplan.transpile import compile_task, project_plan
from ethiplan.transpile.compiler import FINALIZE, PLANNING_MODE, audit_token

from micros import WARD_DOMAIN, WARD_PROBLEM, all_micro_tasks, av_micro_task, ward_task
from oracles import enumerate_plans, plan_cost


def _ground(compiled):
    return ground_task(compiled.domain, compiled.problem)


def test_no_rules_wrapper_preserves_optimal_cost():
    task = EthicalTask(*_ward_domain_problem(), rules=())
    compiled = compile_task(task)
    assert compiled.problem.goal[0].atom.predicate == audit_token(0)
    # original actions keep their names, plus the finalize wrapper
    names = {a.name for a in compiled.domain.actions}
    assert names == {"enter", "leave", "check-patient", "notify-family", FINALIZE}

    orig = ground_task(task.domain, task.problem)
    comp = _ground(compiled)
    best_orig = min(
        (plan_cost(orig, p) for p in enumerate_plans(orig, 4)), default=None
    )
    best_comp = min(
        (plan_cost(comp, p) for p in enumerate_plans(comp, 5)), default=None
    )
    assert best_orig is not None
    assert best_comp == best_orig  # finalize costs 0


def _ward_domain_problem():
    d = parse_domain(WARD_DOMAIN)
    return d, parse_problem(WARD_PROBLEM, d)


def test_unconditional_negative_single_variant_cost():
    d, p = _ward_domain_problem()
    rule = EthicalRule(
        id="noisy",
        trigger_action="enter",
        features=(EthicalFeature("noise", "negative", 2),),
    )
    compiled = compile_task(EthicalTask(d, p, (rule,)))
    variants = [a for a in compiled.domain.actions if a.name.startswith("p2p--enter")]
    assert len(variants) == 1
    assert variants[0].cost == 1 + 1000
    entry = compiled.back_map[variants[0].name]
    assert entry.original_action == "enter"
    assert entry.charged_rule_ids == ("noisy",)


def test_two_literal_condition_gives_three_exclusive_variants():
    d, p = _ward_domain_problem()
    rule = EthicalRule(
        id="privacy",
        trigger_action="enter",
        condition=ward_task().rules[0].condition,  # (asleep) and (not (checked))
        features=(EthicalFeature("intrusion", "negative", 2),),
    )
    compiled = compile_task(EthicalTask(d, p, (rule,)))
    variants = [a for a in compiled.domain.actions if a.name.startswith("p2p--enter")]
    assert len(variants) == 3
    charged = [
        compiled.back_map[v.name].charged_rule_ids == ("privacy",) for v in variants
    ]
    assert charged.count(True) == 1
    texts = [
        " ".join(str(l) for l in v.precondition if l.atom.predicate != PLANNING_MODE)
        for v in variants
    ]
    # entail-first, then fail-at-literal-i, per the deterministic cell order
    assert texts == [
        "(at-base) (asleep) (not (checked))",
        "(at-base) (not (asleep))",
        "(at-base) (asleep) (checked)",
    ]


def test_compile_rejects_p2p_collision():
    d = parse_domain(
        "(define (domain clash) (:predicates (p2p--token)) "
        "(:action a :parameters () :precondition (and) :effect (and (p2p--token))))"
    )
    p = parse_problem("(define (problem c) (:domain clash) (:init) (:goal (and)))", d)
    with pytest.raises(CompilationError, match="p2p--"):
        compile_task(EthicalTask(d, p, ()))


def test_variant_cap():
    d, p = _ward_domain_problem()
    # four independent single-literal conditions split enter into 2^4 cells
    rules = tuple(
        EthicalRule(
            id=f"r-{pred}",
            trigger_action="enter",
            condition=_cond(d, "enter", f"(and ({pred}))"),
            features=(EthicalFeature(f"f-{pred}", "negative", 1),),
        )
        for pred in ("asleep", "checked", "notified", "in-room")
    )
    with pytest.raises(ResourceLimitError, match="variants"):
        compile_task(EthicalTask(d, p, rules), variant_cap=8)
    # and compiles fine under a roomier cap
    assert compile_task(EthicalTask(d, p, rules), variant_cap=16)


def _cond(domain, action, text):
    from micros import _condition

    return _condition(domain, action, text)


def test_compiled_text_roundtrips():
    for _, task in all_micro_tasks():
        compiled = compile_task(task)
        dom_text = serialize_domain(compiled.domain)
        prob_text = serialize_problem(compiled.problem)
        assert parse_domain(dom_text) == compiled.domain
        assert parse_problem(prob_text, compiled.domain) == compiled.problem
        # plain cost-annotated PDDL, consumable by any external planner
        assert ":action-costs" in dom_text
        assert "(increase (total-cost)" in dom_text
        assert "(:metric minimize (total-cost))" in prob_text


def test_hospital_micro_shortcut_choice():
    for emergency, expect_shortcut in ((True, True), (False, False)):
        task = av_micro_task(emergency)
        orig = ground_task(task.domain, task.problem)
        # brute-force objective: base costs + simulated penalties
        best_plan, best_value = None, None
        for plan in enumerate_plans(orig, 6):
            value = plan_cost(orig, plan) + simulate_features(task, plan).penalty_total
            if best_value is None or value < best_value:
                best_plan, best_value = plan, value
        assert best_plan is not None
        used_shortcut = any("drive-shortcut" in s for s in best_plan)
        assert used_shortcut == expect_shortcut

        # the compiled task agrees: its cheapest goal plan projects to the same choice
        compiled = compile_task(task)
        comp = _ground(compiled)
        comp_best, comp_value = None, None
        for plan in enumerate_plans(comp, 6 + 1 + 1):
            value = plan_cost(comp, plan)
            if comp_value is None or value < comp_value:
                comp_best, comp_value = plan, value
        assert comp_value == best_value
        projected = project_plan(comp_best, compiled)
        assert any("drive-shortcut" in s for s in projected.signatures) == expect_shortcut


@pytest.mark.parametrize("name,task", all_micro_tasks())
def test_cost_accounting_theorem(name, task):
    """Every compiled goal plan's cost equals base costs plus simulated
    penalties of its projection, and original goal plans are in bijection
    with compiled goal plans."""
    orig_bound = 5
    orig = ground_task(task.domain, task.problem)
    compiled = compile_task(task)
    comp = _ground(compiled)
    m = sum(1 for r in task.rules if r.has_positive())

    completions: dict[tuple, int] = {}
    for comp_plan in enumerate_plans(comp, orig_bound + 1 + m):
        projected = project_plan(comp_plan, compiled)
        pi = list(projected.signatures)
        compiled_cost = plan_cost(comp, comp_plan)
        base = plan_cost(orig, pi)
        tally = simulate_features(task, pi)
        assert compiled_cost == base + tally.penalty_total, (name, comp_plan)
        # projection consistency: per-step charges + audit charges = penalty
        assert projected.penalty_total == tally.penalty_total
        assert projected.base_cost_total == base
        completions[tuple(pi)] = completions.get(tuple(pi), 0) + 1

    original_plans = {tuple(p) for p in enumerate_plans(orig, orig_bound)}
    assert set(completions) == original_plans
    assert all(count == 1 for count in completions.values())


@pytest.mark.parametrize("name,task", all_micro_tasks())
def test_variant_exclusivity_randomized(name, task):
    rng = random.Random(20240811)
    orig = ground_task(task.domain, task.problem)
    compiled = compile_task(task)
    comp = _ground(compiled)

    statics = static_predicates(compiled.domain)
    static_truth = {
        i: (i in comp.init)
        for i, atom in enumerate(comp.propositions)
        if atom.predicate in statics
    }
    planning_mode_idx = next(
        i for i, atom in enumerate(comp.propositions) if atom.predicate == PLANNING_MODE
    )
    # compiled ground actions grouped by (original action, args)
    variants_of: dict[tuple, list] = {}
    for ga in comp.actions:
        entry = compiled.back_map.get(ga.name.lower())
        if entry and entry.original_action is not None:
            variants_of.setdefault((entry.original_action.lower(), ga.args), []).append(ga)

    # original ground actions need their preconditions evaluated over the
    # compiled proposition universe
    comp_index = {str(atom): i for i, atom in enumerate(comp.propositions)}
    orig_pre = {
        (a.name.lower(), a.args): [
            (comp_index[str(orig.atom_of(idx))], pos) for idx, pos in a.precondition
        ]
        for a in orig.actions
    }

    for _ in range(1000):
        state = set()
        for i in range(len(comp.propositions)):
            if i in static_truth:
                if static_truth[i]:
                    state.add(i)
            elif rng.random() < 0.5:
                state.add(i)
        state.add(planning_mode_idx)  # planning phase
        fstate = frozenset(state)
        for key, pre in orig_pre.items():
            if all((idx in fstate) == pos for idx, pos in pre):
                applicable = [
                    v for v in variants_of.get(key, []) if precondition_holds(fstate, v)
                ]
                assert len(applicable) == 1, (name, key, len(applicable))


def test_project_plan_strips_audit_and_maps_names():
    task = ward_task()
    compiled = compile_task(task)
    comp = _ground(compiled)
    outcome_plan = None
    for plan in enumerate_plans(comp, 8):
        outcome_plan = plan
        break
    assert outcome_plan is not None
    projected = project_plan(outcome_plan, compiled)
    for step in projected.signatures:
        name = step.strip("()").split()[0]
        assert not name.startswith("p2p--")

    # compiled plan consisting only of finalize + audits projects to []
    empty_proj = project_plan(
        ["(p2p--finalize)", "(p2p--audit-1-no)", "(p2p--audit-2-no)"], compiled
    )
    assert empty_proj.signatures == ()
    assert set(empty_proj.unachieved_rule_ids) == {
        "keep-family-informed",
        "night-check",
    }


def test_project_unknown_action_rejected():
    compiled = compile_task(ward_task())
    with pytest.raises(Exception, match="unknown compiled action"):
        project_plan(["(mystery)"], compiled)
