"""Dialect round-trip, validation findings, and firing semantics."""

import pytest

from ethiplan.errors import ParseError, ValidationError
from ethiplan.ethics import (
    EthicalFeature,
    EthicalRule,
    EthicalTask,
    parse_ethical,
    print_ethical,
    set_significance,
    simulate_features,
    validate_rules,
)
from ethiplan.pddl import parse_domain, parse_problem
from ethiplan.transpile import WeightScheme

from test_pddl import DRIVE_DOMAIN, DRIVE_PROBLEM

RULES_TEXT = """
(:ethical-rules
  (rule no-unauthorised-shortcut
    :action drive-shortcut
    :condition (and (not (emergency)))
    :features ((unauthorised-route negative 3))
    :statement "Do not take the shortcut without an emergency."
    :principle "legality"
    :explanation "The shortcut is restricted; using it casually breaks the law.")
  (rule timely-arrival
    :action drive-shortcut
    :condition (and (emergency))
    :features ((timely-medical-care positive 4)))
)
"""


@pytest.fixture()
def domain():
    return parse_domain(DRIVE_DOMAIN)


@pytest.fixture()
def problem(domain):
    return parse_problem(DRIVE_PROBLEM, domain)


def test_parse_minimal_rule(domain):
    rules = parse_ethical(
        "(:ethical-rules (rule r1 :action drive-shortcut "
        ":features ((rule-violation negative 2))))",
        domain,
    )
    assert len(rules) == 1
    assert rules[0].condition == ()
    assert rules[0].features[0].significance == 2


def test_rank_out_of_range_cites_bounds(domain):
    with pytest.raises(ParseError, match=r"\[1,5\]"):
        parse_ethical(
            "(:ethical-rules (rule r1 :action drive "
            ":features ((speeding negative 7))))",
            domain,
        )


def test_unknown_action_rejected(domain):
    with pytest.raises(ParseError, match="fly"):
        parse_ethical(
            "(:ethical-rules (rule r1 :action fly :features ((f negative 1))))",
            domain,
        )


def test_duplicate_rule_id_rejected(domain):
    text = (
        "(:ethical-rules"
        " (rule r1 :action drive :features ((a negative 1)))"
        " (rule r1 :action drive :features ((b negative 1))))"
    )
    with pytest.raises(ParseError, match="duplicate rule id"):
        parse_ethical(text, domain)


def test_roundtrip(domain):
    rules = parse_ethical(RULES_TEXT, domain)
    text = print_ethical(rules)
    assert parse_ethical(text, domain) == rules
    assert print_ethical(parse_ethical(text, domain)) == text
    assert print_ethical(rules) == print_ethical(rules)


def test_empty_rules_print(domain):
    assert print_ethical([]) == "(:ethical-rules)\n"
    assert parse_ethical("(:ethical-rules)", domain) == ()


def test_section_embedded_after_domain(domain):
    text = DRIVE_DOMAIN + "\n" + RULES_TEXT
    rules = parse_ethical(text, domain)
    assert len(rules) == 2


def test_validate_clean_set_is_empty(domain):
    rules = parse_ethical(RULES_TEXT, domain)
    assert validate_rules(rules, domain).findings == ()


def test_validate_unknown_action_finding(domain):
    rule = EthicalRule(
        id="bad", trigger_action="fly", features=(EthicalFeature("f", "negative", 1),)
    )
    report = validate_rules([rule], domain)
    assert len(report.errors) == 1
    assert "fly" in report.errors[0].message


def test_validate_duplicate_warning(domain):
    rules = parse_ethical(RULES_TEXT, domain)
    clone = EthicalRule(
        id="no-unauthorised-shortcut-2",
        trigger_action=rules[0].trigger_action,
        condition=rules[0].condition,
        features=rules[0].features,
    )
    report = validate_rules(list(rules) + [clone], domain)
    assert report.ok
    assert len(report.warnings) == 1
    assert "duplicate" in report.warnings[0].message


def test_set_significance(domain):
    rules = parse_ethical(RULES_TEXT, domain)
    updated = set_significance(rules, "timely-arrival", "timely-medical-care", 5)
    assert updated[1].features[0].significance == 5
    # everything else untouched
    assert updated[0] == rules[0]
    assert set_significance(updated, "timely-arrival", "timely-medical-care", 5) == updated
    with pytest.raises(ValidationError, match=r"\[1,5\]"):
        set_significance(rules, "timely-arrival", "timely-medical-care", 0)
    with pytest.raises(ValidationError, match="unknown rule"):
        set_significance(rules, "nope", "timely-medical-care", 3)
    with pytest.raises(ValidationError, match="no feature"):
        set_significance(rules, "timely-arrival", "nope", 3)


def test_simulate_empty_plan_positive_rule(domain, problem):
    rule = EthicalRule(
        id="greet",
        trigger_action="drive",
        features=(EthicalFeature("courtesy", "positive", 1),),
    )
    task = EthicalTask(domain, problem, (rule,))
    tally = simulate_features(task, [])
    assert tally.achieved == {"greet": False}
    assert tally.penalty_total == 10  # weight(1)


def test_simulate_counts_double_firing(domain, problem):
    rule = EthicalRule(
        id="shortcutting",
        trigger_action="drive-shortcut",
        features=(EthicalFeature("rough-ride", "negative", 2),),
    )
    # loop home -> hospital -> home -> hospital over the authorised link
    text = DRIVE_PROBLEM.replace(
        "(authorised home hospital)",
        "(authorised home hospital) (authorised hospital home)",
    )
    problem2 = parse_problem(text, domain)
    task = EthicalTask(domain, problem2, (rule,))
    plan = [
        "(drive-shortcut home hospital)",
        "(drive-shortcut hospital home)",
        "(drive-shortcut home hospital)",
    ]
    tally = simulate_features(task, plan)
    assert tally.counts == {"shortcutting": 3}
    assert tally.penalty_total == 3 * 1000


def test_simulate_pre_state_semantics(domain, problem):
    # condition (at home) only holds on the very first step
    rule = EthicalRule(
        id="leaving-home",
        trigger_action="drive",
        condition=parse_ethical(
            "(:ethical-rules (rule x :action drive :condition (and (at ?from)) "
            ":features ((f negative 1))))",
            domain,
        )[0].condition,
        features=(EthicalFeature("f", "negative", 1),),
    )
    task = EthicalTask(domain, problem, (rule,))
    plan = ["(drive home mid)", "(drive mid hospital)"]
    tally = simulate_features(task, plan)
    # (at ?from) holds in the pre-state of both steps
    assert tally.counts == {"leaving-home": 2}


def test_simulate_invalid_plan_propagates_step(domain, problem):
    task = EthicalTask(domain, problem, ())
    with pytest.raises(Exception) as exc:
        simulate_features(task, ["(drive mid hospital)"])
    assert "step 0" in str(exc.value)


def test_firing_monotonicity(domain, problem):
    rules = parse_ethical(RULES_TEXT, domain)
    task = EthicalTask(domain, problem, rules)
    plan = ["(drive home mid)", "(drive mid hospital)"]
    prev = simulate_features(task, [])
    for k in range(1, len(plan) + 1):
        cur = simulate_features(task, plan[:k])
        for rid, count in prev.counts.items():
            assert cur.counts[rid] >= count
        for rid, ach in prev.achieved.items():
            assert cur.achieved[rid] or not ach
        prev = cur


def test_weight_scheme_values():
    s = WeightScheme()
    assert [s.weight(r) for r in range(1, 6)] == [
        10,
        1000,
        100000,
        10000000,
        1000000000,
    ]
    with pytest.raises(ValidationError):
        s.weight(0)
    with pytest.raises(ValidationError):
        s.weight(6)
