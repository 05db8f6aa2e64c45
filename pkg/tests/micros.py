"""Micro-domains for exhaustive cost-accounting checks (<= 8 ground actions)."""

from ethiplan.ethics import EthicalFeature, EthicalRule, EthicalTask
from ethiplan.pddl import parse_domain, parse_problem

AV_MICRO_DOMAIN = """
(define (domain micro-av)
  (:requirements :typing :negative-preconditions)
  (:types loc)
  (:predicates (at ?l - loc) (road ?a - loc ?b - loc) (scut ?a - loc ?b - loc)
               (emergency))
  (:action drive
    :parameters (?from - loc ?to - loc)
    :precondition (and (at ?from) (road ?from ?to))
    :effect (and (not (at ?from)) (at ?to)))
  (:action drive-shortcut
    :parameters (?from - loc ?to - loc)
    :precondition (and (at ?from) (scut ?from ?to))
    :effect (and (not (at ?from)) (at ?to)))
)
"""

AV_MICRO_PROBLEM = """
(define (problem micro-trip)
  (:domain micro-av)
  (:objects home mid hospital - loc)
  (:init (at home) (road home mid) (road mid hospital) (scut home hospital){EMERGENCY})
  (:goal (and (at hospital)))
)
"""

WARD_DOMAIN = """
(define (domain micro-ward)
  (:requirements :negative-preconditions)
  (:predicates (at-base) (in-room) (asleep) (checked) (notified))
  (:action enter
    :parameters ()
    :precondition (and (at-base))
    :effect (and (in-room) (not (at-base))))
  (:action leave
    :parameters ()
    :precondition (and (in-room))
    :effect (and (at-base) (not (in-room))))
  (:action check-patient
    :parameters ()
    :precondition (and (in-room))
    :effect (and (checked)))
  (:action notify-family
    :parameters ()
    :precondition (and (checked))
    :effect (and (notified)))
)
"""

WARD_PROBLEM = """
(define (problem micro-night-round)
  (:domain micro-ward)
  (:init (at-base) (asleep))
  (:goal (and (checked) (at-base)))
)
"""


def av_micro_rules(domain):
    return (
        EthicalRule(
            id="no-casual-shortcut",
            trigger_action="drive-shortcut",
            condition=_condition(domain, "drive-shortcut", "(and (not (emergency)))"),
            features=(EthicalFeature("unauthorised-route", "negative", 3),),
            statement="Do not take the restricted shortcut without an emergency.",
        ),
        EthicalRule(
            id="swift-care",
            trigger_action="drive-shortcut",
            condition=_condition(domain, "drive-shortcut", "(and (emergency))"),
            features=(EthicalFeature("timely-medical-care", "positive", 4),),
            statement="In a medical emergency, take the fastest route.",
        ),
    )


def ward_rules(domain):
    return (
        EthicalRule(
            id="respect-privacy",
            trigger_action="enter",
            condition=_condition(domain, "enter", "(and (asleep) (not (checked)))"),
            features=(EthicalFeature("privacy-intrusion", "negative", 2),),
        ),
        EthicalRule(
            id="keep-family-informed",
            trigger_action="notify-family",
            features=(EthicalFeature("family-reassured", "positive", 1),),
        ),
        EthicalRule(
            id="night-check",
            trigger_action="check-patient",
            condition=_condition(domain, "check-patient", "(and (asleep))"),
            features=(
                EthicalFeature("disturbed-rest", "negative", 1),
                EthicalFeature("wellbeing-confirmed", "positive", 2),
            ),
        ),
    )


def _condition(domain, action, text):
    from ethiplan.ethics import parse_ethical

    rules = parse_ethical(
        f"(:ethical-rules (rule tmp :action {action} :condition {text} "
        f":features ((tmp-feature negative 1))))",
        domain,
    )
    return rules[0].condition


def av_micro_task(emergency: bool) -> EthicalTask:
    domain = parse_domain(AV_MICRO_DOMAIN)
    init_extra = " (emergency)" if emergency else ""
    problem = parse_problem(AV_MICRO_PROBLEM.replace("{EMERGENCY}", init_extra), domain)
    return EthicalTask(domain, problem, av_micro_rules(domain))


def ward_task() -> EthicalTask:
    domain = parse_domain(WARD_DOMAIN)
    problem = parse_problem(WARD_PROBLEM, domain)
    return EthicalTask(domain, problem, ward_rules(domain))


def all_micro_tasks():
    return [
        ("av-emergency", av_micro_task(emergency=True)),
        ("av-leisure", av_micro_task(emergency=False)),
        ("ward-night-round", ward_task()),
    ]
