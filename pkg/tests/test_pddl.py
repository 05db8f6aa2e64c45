"""Parser, printer, grounding, and successor-function tests."""

import pytest

from ethiplan.errors import (
    GroundingError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedConstructError,
)
from ethiplan.pddl import (
    apply_action,
    goal_satisfied,
    ground_task,
    parse_domain,
    parse_problem,
    serialize_domain,
    serialize_problem,
    static_predicates,
)

MINIMAL_DOMAIN = """
(define (domain tiny)
  (:predicates (done))
  (:action finish
    :parameters ()
    :precondition (and)
    :effect (and (done)))
)
"""

DRIVE_DOMAIN = """
(define (domain roads)
  (:requirements :typing :negative-preconditions)
  (:types loc)
  (:predicates (at ?l - loc) (road ?a - loc ?b - loc) (authorised ?a - loc ?b - loc)
               (emergency))
  (:action drive
    :parameters (?from - loc ?to - loc)
    :precondition (and (at ?from) (road ?from ?to))
    :effect (and (not (at ?from)) (at ?to)))
  (:action drive-shortcut
    :parameters (?from - loc ?to - loc)
    :precondition (and (at ?from) (authorised ?from ?to) (not (emergency)))
    :effect (and (not (at ?from)) (at ?to)))
)
"""

DRIVE_PROBLEM = """
(define (problem trip)
  (:domain roads)
  (:objects home mid hospital - loc)
  (:init (at home) (road home mid) (road mid hospital) (authorised home hospital))
  (:goal (and (at hospital)))
)
"""


def test_parse_minimal_domain():
    d = parse_domain(MINIMAL_DOMAIN)
    assert d.name == "tiny"
    assert len(d.actions) == 1
    assert d.actions[0].cost == 1  # unit-cost default
    assert not d.explicit_costs


def test_keywords_case_insensitive_identifiers_preserved():
    d = parse_domain(
        "(DEFINE (Domain CamelCase) (:PREDICATES (Flag)) "
        "(:Action Go :parameters () :precondition (and (flag)) :effect (and)))"
    )
    assert d.name == "CamelCase"
    assert d.predicates[0].name == "Flag"
    # reference re-spelled with declared casing
    assert d.actions[0].precondition[0].atom.predicate == "Flag"


def test_comments_are_insignificant():
    d = parse_domain("; header\n" + MINIMAL_DOMAIN.replace("(:action", "; c\n(:action"))
    assert len(d.actions) == 1


def test_forall_is_unsupported_and_named():
    text = MINIMAL_DOMAIN.replace("(and)", "(forall (?x) (done))")
    with pytest.raises(UnsupportedConstructError, match="forall"):
        parse_domain(text)


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_domain("(define (domain x) (:predicates (p))")
    assert exc.value.line == 1


def test_duplicate_action_rejected():
    text = MINIMAL_DOMAIN.rstrip()[:-1] + (
        "(:action finish :parameters () :precondition (and) :effect (and)))"
    )
    with pytest.raises(ParseError, match="duplicate action"):
        parse_domain(text)


def test_arity_mismatch_rejected():
    text = MINIMAL_DOMAIN.replace("(and (done))", "(and (done ?x))").replace(
        ":parameters ()", ":parameters (?x - object)"
    )
    with pytest.raises(ParseError, match="arity mismatch"):
        parse_domain(text)


def test_action_costs_parsed():
    text = """
    (define (domain costed)
      (:requirements :action-costs)
      (:functions (total-cost))
      (:predicates (p))
      (:action a :parameters () :precondition (and)
        :effect (and (p) (increase (total-cost) 7)))
    )
    """
    d = parse_domain(text)
    assert d.explicit_costs
    assert d.actions[0].cost == 7


def test_domain_roundtrip():
    d = parse_domain(DRIVE_DOMAIN)
    text = serialize_domain(d)
    assert parse_domain(text) == d
    assert serialize_domain(parse_domain(text)) == text  # deterministic


def test_problem_roundtrip_and_validation():
    d = parse_domain(DRIVE_DOMAIN)
    p = parse_problem(DRIVE_PROBLEM, d)
    assert len(p.objects) == 3
    text = serialize_problem(p)
    assert parse_problem(text, d) == p


def test_problem_empty_goal_is_valid():
    d = parse_domain(DRIVE_DOMAIN)
    p = parse_problem(DRIVE_PROBLEM.replace("(and (at hospital))", "(and)"), d)
    assert p.goal == ()
    task = ground_task(d, p)
    assert goal_satisfied(task.init, task)


def test_problem_wrong_arity_cites_atom():
    d = parse_domain(DRIVE_DOMAIN)
    with pytest.raises(ParseError, match=r"\(at home mid\)"):
        parse_problem(DRIVE_PROBLEM.replace("(at home)", "(at home mid)"), d)


def test_domain_name_mismatch_is_warning():
    d = parse_domain(DRIVE_DOMAIN)
    p = parse_problem(DRIVE_PROBLEM.replace("(:domain roads)", "(:domain streets)"), d)
    assert p.warnings and "streets" in p.warnings[0]


def test_unknown_object_rejected():
    d = parse_domain(DRIVE_DOMAIN)
    with pytest.raises(ParseError, match="unknown object"):
        parse_problem(DRIVE_PROBLEM.replace("(at home)", "(at mars)"), d)


def test_grounding_counts_and_static_pruning():
    d = parse_domain(DRIVE_DOMAIN)
    p = parse_problem(DRIVE_PROBLEM, d)
    assert static_predicates(d) == {"road", "authorised", "emergency"}
    task = ground_task(d, p)
    by_name = {}
    for a in task.actions:
        by_name.setdefault(a.name, []).append(a)
    # road holds for 2 of 9 pairs; authorised for 1 of 9
    assert len(by_name["drive"]) == 2
    assert len(by_name["drive-shortcut"]) == 1
    assert by_name["drive-shortcut"][0].args == ("home", "hospital")


def test_grounding_one_param_three_objects():
    d = parse_domain(
        "(define (domain g) (:predicates (p ?x)) "
        "(:action touch :parameters (?x) :precondition (and) :effect (and (p ?x))))"
    )
    p = parse_problem(
        "(define (problem gp) (:domain g) (:objects a b c) (:init) (:goal (and)))", d
    )
    task = ground_task(d, p)
    assert len(task.actions) == 3


def test_grounding_zero_objects_parameterless_schemas():
    d = parse_domain(MINIMAL_DOMAIN)
    p = parse_problem(
        "(define (problem t) (:domain tiny) (:init) (:goal (and (done))))", d
    )
    task = ground_task(d, p)
    assert len(task.actions) == len(d.actions) == 1


def test_grounding_cap():
    d = parse_domain(
        "(define (domain big) (:predicates (p ?x ?y ?z)) "
        "(:action a :parameters (?x ?y ?z) :precondition (and) :effect (and (p ?x ?y ?z))))"
    )
    objs = " ".join(f"o{i}" for i in range(10))
    p = parse_problem(
        f"(define (problem bp) (:domain big) (:objects {objs}) (:init) (:goal (and)))", d
    )
    with pytest.raises(ResourceLimitError):
        ground_task(d, p, action_cap=100)


def test_unknown_constant_in_schema_detected_at_grounding():
    d = parse_domain(
        "(define (domain c) (:predicates (p ?x)) "
        "(:action a :parameters () :precondition (and (p ghost)) :effect (and)))"
    )
    p = parse_problem(
        "(define (problem cp) (:domain c) (:objects a) (:init) (:goal (and)))", d
    )
    with pytest.raises(GroundingError, match="ghost"):
        ground_task(d, p)


def test_apply_action_identity_and_effects():
    d = parse_domain(DRIVE_DOMAIN)
    p = parse_problem(DRIVE_PROBLEM, d)
    task = ground_task(d, p)
    drive = [a for a in task.actions if a.args == ("home", "mid")][0]
    nxt = apply_action(task.init, drive, task)
    at_mid = [i for i, atom in enumerate(task.propositions) if str(atom) == "(at mid)"][0]
    at_home = [i for i, atom in enumerate(task.propositions) if str(atom) == "(at home)"][0]
    assert at_mid in nxt and at_home not in nxt
    # identity when no effects
    noop_domain = parse_domain(
        "(define (domain n) (:predicates (q)) "
        "(:action idle :parameters () :precondition (and) :effect (and)))"
    )
    noop_problem = parse_problem(
        "(define (problem np) (:domain n) (:init (q)) (:goal (and)))", noop_domain
    )
    ntask = ground_task(noop_domain, noop_problem)
    assert apply_action(ntask.init, ntask.actions[0], ntask) == ntask.init


def test_apply_action_precondition_violation_names_literal():
    d = parse_domain(DRIVE_DOMAIN)
    p = parse_problem(DRIVE_PROBLEM, d)
    task = ground_task(d, p)
    drive = [a for a in task.actions if a.args == ("mid", "hospital")][0]
    with pytest.raises(PreconditionError, match=r"\(at mid\)"):
        apply_action(task.init, drive, task)


def test_pruning_safety():
    """Every plan valid in the unpruned ground task stays valid after
    static pruning (pruned actions were never applicable)."""
    from oracles import enumerate_plans

    d = parse_domain(DRIVE_DOMAIN)
    p = parse_problem(DRIVE_PROBLEM, d)
    unpruned = ground_task(d, p, prune_static=False)
    pruned = ground_task(d, p)
    assert len(pruned.actions) < len(unpruned.actions)
    pruned_by_sig = pruned.action_by_signature()
    plans = 0
    for plan in enumerate_plans(unpruned, 4):
        state = pruned.init
        for step in plan:
            action = pruned_by_sig.get(step)
            assert action is not None, f"pruned task lost used action {step}"
            state = apply_action(state, action, pruned)
        assert goal_satisfied(state, pruned)
        plans += 1
    assert plans > 0


def test_serialization_is_deterministic():
    d = parse_domain(DRIVE_DOMAIN)
    assert serialize_domain(d) == serialize_domain(d)
    p = parse_problem(DRIVE_PROBLEM, d)
    assert serialize_problem(p) == serialize_problem(p)
