"""Rule-set validation and editing operations."""

from __future__ import annotations

from dataclasses import replace

from ..errors import ValidationError
from ..pddl.model import Literal, PlanningDomain, is_variable
from ..transpile.weights import MAX_RANK, MIN_RANK
from .model import EthicalFeature, EthicalRule, Finding, ValidationReport


def _canon_literal(lit: Literal) -> tuple:
    return (lit.positive, lit.atom.predicate.lower(), tuple(a.lower() for a in lit.atom.args))


def _condition_key(rule: EthicalRule) -> frozenset:
    return frozenset(_canon_literal(l) for l in rule.condition)


def validate_rules(
    rules: tuple[EthicalRule, ...] | list[EthicalRule], domain: PlanningDomain
) -> ValidationReport:
    """Collect findings; never raises on structurally well-formed rules.

    Errors: unknown trigger action, unresolved condition predicates, arity
    mismatches, condition variables outside the trigger's parameters,
    duplicate rule ids. Warning: two rules sharing trigger, condition, and
    a feature name (duplicate-rule suspicion).
    """
    findings: list[Finding] = []
    actions = domain.action_table()
    preds = domain.predicate_table()

    seen_ids: dict[str, str] = {}
    for rule in rules:
        if rule.id.lower() in seen_ids:
            findings.append(
                Finding("error", rule.id, f"duplicate rule id (also used by {seen_ids[rule.id.lower()]})")
            )
        else:
            seen_ids[rule.id.lower()] = rule.id

        schema = actions.get(rule.trigger_action.lower())
        if schema is None:
            findings.append(
                Finding("error", rule.id, f"unknown action '{rule.trigger_action}'")
            )
            continue
        params = {p.name.lower() for p in schema.parameters}
        for lit in rule.condition:
            decl = preds.get(lit.atom.predicate.lower())
            if decl is None:
                findings.append(
                    Finding("error", rule.id, f"unknown predicate in condition: {lit.atom}")
                )
                continue
            if decl.arity != len(lit.atom.args):
                findings.append(
                    Finding(
                        "error",
                        rule.id,
                        f"arity mismatch in condition: {lit.atom} "
                        f"(declared arity {decl.arity})",
                    )
                )
            for arg in lit.atom.args:
                if is_variable(arg) and arg.lower() not in params:
                    findings.append(
                        Finding(
                            "error",
                            rule.id,
                            f"condition variable {arg} is not a parameter of "
                            f"{schema.name}",
                        )
                    )

    # duplicate-rule suspicion: same trigger, same condition, shared feature name
    for i, a in enumerate(rules):
        for b in rules[i + 1 :]:
            if a.trigger_action.lower() != b.trigger_action.lower():
                continue
            if _condition_key(a) != _condition_key(b):
                continue
            shared = {f.name.lower() for f in a.features} & {
                f.name.lower() for f in b.features
            }
            if shared:
                findings.append(
                    Finding(
                        "warning",
                        b.id,
                        f"looks like a duplicate of rule {a.id} "
                        f"(same trigger, condition, and feature "
                        f"'{sorted(shared)[0]}')",
                    )
                )
    return ValidationReport(tuple(findings))


def set_significance(
    rules: tuple[EthicalRule, ...],
    rule_id: str,
    feature_name: str,
    rank: int,
) -> tuple[EthicalRule, ...]:
    """Return rules with one feature's significance changed; all else equal."""
    if not MIN_RANK <= rank <= MAX_RANK:
        raise ValidationError(f"significance rank {rank} outside [{MIN_RANK},{MAX_RANK}]")
    out = []
    rule_found = False
    for rule in rules:
        if rule.id.lower() != rule_id.lower():
            out.append(rule)
            continue
        rule_found = True
        if rule.feature(feature_name) is None:
            raise ValidationError(
                f"rule {rule.id} has no feature named '{feature_name}'"
            )
        features = tuple(
            EthicalFeature(f.name, f.polarity, rank)
            if f.name.lower() == feature_name.lower()
            else f
            for f in rule.features
        )
        out.append(replace(rule, features=features))
    if not rule_found:
        raise ValidationError(f"unknown rule id '{rule_id}'")
    return tuple(out)
