"""Fixture table for the offline mock provider.

For every bundled example the table holds two entries keyed by prompt
digest: the rules-generation response (a JSON document derived from the
example's seed rules) and the code-generation response (the dialect text
for those rules). Building the table through the real prompt builders at
import time keeps the digests in lockstep with the prompt text.
"""

from __future__ import annotations

from functools import lru_cache

from ..ethics.dialect import print_ethical
from ..examplelib import ExampleEntry, list_examples
from .interchange import rules_to_document
from .prompts import RuleGenerationContext, build_code_prompt, build_rule_prompt
from .provider import MockProvider, prompt_digest


def context_for_example(entry: ExampleEntry) -> RuleGenerationContext:
    return RuleGenerationContext(
        domain_text=entry.domain_text,
        problem_text=entry.problem_text,
        principles=entry.principles,
        initial_state_notes=entry.initial_state_notes,
        assumptions=entry.assumptions,
    )


def _rules_response(entry: ExampleEntry, rules) -> str:
    doc = rules_to_document(rules)
    return (
        f"Here are context-specific ethical rules for \"{entry.title}\", "
        "grounded in the stated principles.\n\n"
        "```json\n" + doc + "\n```\n\n"
        "Each rule names the domain action it constrains and carries an "
        "explanation of its reasoning.\n"
    )


def _code_response(rules) -> str:
    return (
        "Encoding the finalized rules in the rule dialect:\n\n"
        "```\n" + print_ethical(rules).rstrip("\n") + "\n```\n"
    )


@lru_cache(maxsize=1)
def build_fixture_table() -> tuple[dict[str, str], str]:
    """(digest -> response) table plus the scripted default response."""
    fixtures: dict[str, str] = {}
    default = ""
    for entry in list_examples():
        domain, _, rules = entry.parse()
        rules_request = build_rule_prompt(context_for_example(entry))
        fixtures[prompt_digest(rules_request)] = _rules_response(entry, rules)
        code_request = build_code_prompt(rules, domain)
        fixtures[prompt_digest(code_request)] = _code_response(rules)
        if entry.id == "av-hospital-emergency":
            default = _rules_response(entry, rules)
    return fixtures, default


def default_mock_provider() -> MockProvider:
    fixtures, default = build_fixture_table()
    return MockProvider(dict(fixtures), default)
