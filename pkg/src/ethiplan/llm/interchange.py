"""Structured rules document: extraction, schema validation, mapping."""

from __future__ import annotations

import json
import re

from pydantic import BaseModel, Field, ValidationError as PydanticValidationError

from ..errors import ParseError, ValidationError
from ..ethics.model import (
    STATUS_GENERATED,
    EthicalFeature,
    EthicalRule,
    Finding,
)
from ..ethics.validate import validate_rules
from ..pddl.model import PlanningDomain
from ..pddl.parser import _SymbolTable, parse_literal
from ..sexpr import read_all

_FENCE_RE = re.compile(r"```[a-zA-Z0-9_-]*\n(.*?)```", re.DOTALL)


class FeatureDoc(BaseModel):
    name: str
    polarity: str
    rank: int


class RuleDoc(BaseModel):
    id: str
    action: str
    condition: list[str] = Field(default_factory=list)
    features: list[FeatureDoc]
    statement: str = ""
    principle: str = ""
    explanation: str = ""


class RulesDocument(BaseModel):
    rules: list[RuleDoc]


def extract_json_document(text: str):
    """Pull the rules document out of surrounding prose.

    Tries the whole text, then each fenced block, then the outermost
    brace span. Returns (parsed object | None, finding message | None).
    """
    candidates = [text]
    candidates.extend(m.group(1) for m in _FENCE_RE.finditer(text))
    start, end = text.find("{"), text.rfind("}")
    if start != -1 and end > start:
        candidates.append(text[start : end + 1])
    for candidate in candidates:
        try:
            obj = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict):
            return obj, None
    return None, "no JSON document found in the response"


def parse_condition_strings(
    literals: list[str], domain: PlanningDomain, action_name: str
) -> tuple:
    """Parse condition literal strings against the trigger's parameters."""
    schema = domain.action_table().get(action_name.lower())
    if schema is None:
        raise ValidationError(f"unknown action '{action_name}'")
    scope = {p.name.lower(): p.name for p in schema.parameters}
    symbols = _SymbolTable(domain)
    parsed = []
    for text in literals:
        forms = read_all(text)
        if len(forms) != 1:
            raise ValidationError(f"condition entry is not a single literal: '{text}'")
        parsed.append(parse_literal(forms[0], symbols, scope))
    return tuple(parsed)


def document_to_rules(
    doc: RulesDocument, domain: PlanningDomain
) -> tuple[tuple[EthicalRule, ...], tuple[Finding, ...]]:
    rules: list[EthicalRule] = []
    findings: list[Finding] = []
    for rd in doc.rules:
        try:
            condition = parse_condition_strings(rd.condition, domain, rd.action)
            rule = EthicalRule(
                id=rd.id,
                trigger_action=rd.action,
                condition=condition,
                features=tuple(
                    EthicalFeature(f.name, f.polarity, f.rank) for f in rd.features
                ),
                statement=rd.statement,
                principle=rd.principle,
                explanation=rd.explanation,
                status=STATUS_GENERATED,
            )
        except (ValidationError, ParseError) as exc:
            findings.append(Finding("error", rd.id or "-", str(exc)))
            continue
        rules.append(rule)
    return tuple(rules), tuple(findings)


def parse_rule_response(
    text: str, domain: PlanningDomain
) -> tuple[tuple[EthicalRule, ...] | None, tuple[Finding, ...]]:
    """Extract, validate, and map a provider response to rules.

    Success (rules, ()) only when the document maps cleanly and
    validate_rules reports zero errors; otherwise (None, findings).
    """
    obj, problem = extract_json_document(text)
    if obj is None:
        return None, (Finding("error", "-", problem),)
    try:
        doc = RulesDocument.model_validate(obj)
    except PydanticValidationError as exc:
        findings = tuple(
            Finding("error", "-", f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}")
            for e in exc.errors()
        )
        return None, findings

    rules, findings = document_to_rules(doc, domain)
    report = validate_rules(rules, domain)
    all_findings = findings + report.errors
    if all_findings:
        return None, all_findings
    return rules, ()


def rules_to_document(rules: tuple[EthicalRule, ...]) -> str:
    """Canonical JSON for a rule list (fixture authoring, round-trips)."""
    payload = {
        "rules": [
            {
                "id": r.id,
                "action": r.trigger_action,
                "condition": [str(l) for l in r.condition],
                "features": [
                    {"name": f.name, "polarity": f.polarity, "rank": f.significance}
                    for f in r.features
                ],
                "statement": r.statement,
                "principle": r.principle,
                "explanation": r.explanation,
            }
            for r in rules
        ]
    }
    return json.dumps(payload, indent=2, sort_keys=False)


def extract_code_block(text: str) -> str:
    """Pull dialect text out of a response: prefer a fenced block
    containing the rules section, else the raw text."""
    for m in _FENCE_RE.finditer(text):
        if ":ethical-rules" in m.group(1):
            return m.group(1)
    return text
