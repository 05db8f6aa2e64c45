"""Concrete rule-dialect reader and printer.

Shape:
    (:ethical-rules
      (rule <id> :action <name>
        [:condition (and <literal>*)]
        :features ((<feature> <positive|negative> <rank 1-5>)+)
        [:statement "<text>"] [:principle "<text>"] [:explanation "<text>"])
      ...)

The section may stand alone or follow a domain definition in the same
file; literals in :condition range over the trigger action's parameters
and constants.
"""

from __future__ import annotations

from .. import sexpr
from ..errors import ParseError, ValidationError
from ..pddl.model import PlanningDomain
from ..pddl.parser import _SymbolTable, parse_condition
from ..sexpr import Atom, SList, escape_string, expect_atom, expect_list
from ..transpile.weights import MAX_RANK, MIN_RANK
from .model import NEGATIVE, POSITIVE, EthicalFeature, EthicalRule

SECTION_KEY = ":ethical-rules"
_RULE_KEYS = (":action", ":condition", ":features", ":statement", ":principle", ":explanation")


def _find_section(text: str) -> SList:
    for form in sexpr.read_all(text):
        if not isinstance(form, SList) or len(form) == 0:
            continue
        head = form[0]
        if isinstance(head, Atom) and head.lower() == SECTION_KEY:
            return form
    raise ParseError(f"no ({SECTION_KEY} ...) section found")


def _parse_rank(tok: Atom) -> int:
    try:
        rank = int(tok.text)
    except ValueError:
        raise ParseError(f"rank must be an integer, got '{tok.text}'", tok.line, tok.column)
    if not MIN_RANK <= rank <= MAX_RANK:
        raise ParseError(
            f"significance rank {rank} outside [{MIN_RANK},{MAX_RANK}]",
            tok.line,
            tok.column,
        )
    return rank


def _parse_features(form: SList) -> tuple[EthicalFeature, ...]:
    if len(form) == 0:
        raise ParseError("rule needs at least one feature", form.line, form.column)
    features = []
    for node in form:
        f = expect_list(node, "a (name polarity rank) feature")
        if len(f) != 3:
            raise ParseError(
                "feature must be (name polarity rank)", f.line, f.column
            )
        name = expect_atom(f[0], "a feature name").text
        polarity_tok = expect_atom(f[1], "a polarity")
        polarity = polarity_tok.lower()
        if polarity not in (POSITIVE, NEGATIVE):
            raise ParseError(
                f"polarity must be positive or negative, got '{polarity_tok.text}'",
                polarity_tok.line,
                polarity_tok.column,
            )
        rank = _parse_rank(expect_atom(f[2], "a rank"))
        features.append(EthicalFeature(name, polarity, rank))
    return tuple(features)


def _parse_rule(form: SList, domain: PlanningDomain) -> EthicalRule:
    if len(form) < 2 or not isinstance(form[0], Atom) or form[0].lower() != "rule":
        raise ParseError("expected (rule <id> ...)", form.line, form.column)
    rule_id = expect_atom(form[1], "a rule id").text

    slots: dict[str, object] = {}
    i = 2
    while i < len(form):
        key_tok = expect_atom(form[i], "a rule keyword")
        key = key_tok.lower()
        if key not in _RULE_KEYS:
            raise ParseError(f"unknown rule keyword {key_tok.text}", key_tok.line, key_tok.column)
        if key in slots:
            raise ParseError(f"duplicate {key_tok.text}", key_tok.line, key_tok.column)
        if i + 1 >= len(form):
            raise ParseError(f"missing value for {key_tok.text}", key_tok.line, key_tok.column)
        slots[key] = form[i + 1]
        i += 2

    if ":action" not in slots:
        raise ParseError(f"rule {rule_id}: missing :action", form.line, form.column)
    if ":features" not in slots:
        raise ParseError(f"rule {rule_id}: missing :features", form.line, form.column)

    action_tok = expect_atom(slots[":action"], "an action name")
    schema = domain.action_table().get(action_tok.lower())
    if schema is None:
        raise ParseError(
            f"rule {rule_id}: unknown action '{action_tok.text}'",
            action_tok.line,
            action_tok.column,
        )

    condition = ()
    if ":condition" in slots:
        scope = {p.name.lower(): p.name for p in schema.parameters}
        symbols = _SymbolTable(domain)
        condition = parse_condition(slots[":condition"], symbols, scope)

    features = _parse_features(expect_list(slots[":features"], "a feature list"))

    def text_of(key: str) -> str:
        if key not in slots:
            return ""
        return expect_atom(slots[key], "a quoted string").text

    try:
        return EthicalRule(
            id=rule_id,
            trigger_action=schema.name,
            condition=condition,
            features=features,
            statement=text_of(":statement"),
            principle=text_of(":principle"),
            explanation=text_of(":explanation"),
        )
    except ValidationError as exc:
        raise ParseError(str(exc), form.line, form.column) from exc


def parse_ethical(text: str, domain: PlanningDomain) -> tuple[EthicalRule, ...]:
    """Parse dialect text into validated rules (duplicate ids rejected)."""
    section = _find_section(text)
    rules: list[EthicalRule] = []
    seen: set[str] = set()
    for node in section.items[1:]:
        form = expect_list(node, "a (rule ...) block")
        rule = _parse_rule(form, domain)
        if rule.id.lower() in seen:
            raise ParseError(f"duplicate rule id '{rule.id}'", form.line, form.column)
        seen.add(rule.id.lower())
        rules.append(rule)
    return tuple(rules)


def print_ethical(rules: tuple[EthicalRule, ...] | list[EthicalRule]) -> str:
    """Deterministic dialect text; round-trips through parse_ethical."""
    if not rules:
        return f"({SECTION_KEY})\n"
    lines = [f"({SECTION_KEY}"]
    for rule in rules:
        lines.append(f"  (rule {rule.id}")
        lines.append(f"    :action {rule.trigger_action}")
        if rule.condition:
            cond = " ".join(str(l) for l in rule.condition)
            lines.append(f"    :condition (and {cond})")
        feats = " ".join(
            f"({f.name} {f.polarity} {f.significance})" for f in rule.features
        )
        lines.append(f"    :features ({feats})")
        for key, value in (
            (":statement", rule.statement),
            (":principle", rule.principle),
            (":explanation", rule.explanation),
        ):
            if value:
                lines.append(f"    {key} {escape_string(value)}")
        lines[-1] += ")"
    lines.append(")")
    return "\n".join(lines) + "\n"
