"""Prompt assembly. Deterministic: identical inputs yield identical text.

The prompt text is versioned here, in the repository, so mock fixtures
keyed on its digest stay stable.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from ..ethics.model import EthicalRule
from ..pddl.model import PlanningDomain

DEFAULT_MODEL = "mock-ethicist-v1"

RULES_SYSTEM = (
    "You help a domain expert turn high-level ethical principles into "
    "concrete, operational rules for a classical planning task. You answer "
    "with a single JSON document inside a fenced code block and nothing "
    "else of consequence outside it."
)

CODE_SYSTEM = (
    "You translate finalized ethical rules into the rule dialect that "
    "accompanies a planning domain. You answer with one fenced code block "
    "containing the (:ethical-rules ...) section and nothing else of "
    "consequence outside it."
)

RULES_SCHEMA_HINT = """\
Respond with one fenced ```json block containing exactly:
{
  "rules": [
    {
      "id": "kebab-case-identifier",
      "action": "<an action name that exists in the domain>",
      "condition": ["(literal over the action's parameters)", "..."],
      "features": [
        {"name": "kebab-case-feature", "polarity": "positive|negative", "rank": 1}
      ],
      "statement": "one-sentence operational rule",
      "principle": "the principle(s) it grounds",
      "explanation": "why this rule follows from the principles in this task"
    }
  ]
}
Constraints: every rule must name an existing action; condition literals
use only that action's parameter variables and task objects; ranks are
integers 1-5 (1 least significant, 5 most); each rule needs at least one
feature; keep ids unique."""


@dataclass(frozen=True)
class RuleGenerationContext:
    domain_text: str
    problem_text: str
    principles: tuple[str, ...]
    initial_state_notes: str = ""
    assumptions: str = ""
    rule_count_hint: int | None = None

    def __post_init__(self):
        if not self.principles:
            raise ValidationError("at least one ethical principle is required")


def build_rule_prompt(ctx: RuleGenerationContext, model: str = DEFAULT_MODEL):
    from .provider import ProviderRequest

    sections = [
        "Generate context-specific ethical rules for the planning task below.",
        "== PLANNING DOMAIN ==\n" + ctx.domain_text.strip(),
        "== PLANNING PROBLEM ==\n" + ctx.problem_text.strip(),
    ]
    if ctx.initial_state_notes:
        sections.append("== INITIAL STATE NOTES ==\n" + ctx.initial_state_notes.strip())
    if ctx.assumptions:
        sections.append("== ASSUMPTIONS ==\n" + ctx.assumptions.strip())
    sections.append(
        "== HIGH-LEVEL ETHICAL PRINCIPLES ==\n"
        + "\n".join(f"- {p}" for p in ctx.principles)
    )
    if ctx.rule_count_hint:
        sections.append(f"Aim for about {ctx.rule_count_hint} rules.")
    sections.append(RULES_SCHEMA_HINT)
    return ProviderRequest(
        model=model,
        system_instructions=RULES_SYSTEM,
        user_content="\n\n".join(sections) + "\n",
    )


def _rule_block(rule: EthicalRule) -> str:
    # ranks and status are deliberately absent: significance is owned by
    # the user and overwritten after parsing
    lines = [f"rule {rule.id}:"]
    lines.append(f"  action: {rule.trigger_action}")
    if rule.condition:
        lines.append("  condition: " + " ".join(str(l) for l in rule.condition))
    lines.append(
        "  features: "
        + ", ".join(f"{f.name} ({f.polarity})" for f in rule.features)
    )
    if rule.statement:
        lines.append(f"  statement: {rule.statement}")
    if rule.principle:
        lines.append(f"  principle: {rule.principle}")
    if rule.explanation:
        lines.append(f"  explanation: {rule.explanation}")
    return "\n".join(lines)


def build_code_prompt(
    rules: tuple[EthicalRule, ...],
    domain: PlanningDomain,
    model: str = DEFAULT_MODEL,
):
    from .provider import ProviderRequest
    from ..pddl.printer import serialize_domain

    body = [
        "Encode the finalized ethical rules below in the rule dialect.",
        "== PLANNING DOMAIN ==\n" + serialize_domain(domain).strip(),
        "== FINALIZED RULES ==\n" + "\n\n".join(_rule_block(r) for r in rules),
        (
            "Emit one fenced code block containing a single "
            "(:ethical-rules ...) section with one (rule ...) block per "
            "rule, same ids, same actions, same conditions, and the same "
            "feature names and polarities. Use any placeholder rank 1-5; "
            "significance levels are assigned by the user and applied "
            "after parsing. Include the statement, principle, and "
            "explanation strings verbatim."
        ),
    ]
    return ProviderRequest(
        model=model,
        system_instructions=CODE_SYSTEM,
        user_content="\n\n".join(body) + "\n",
    )
