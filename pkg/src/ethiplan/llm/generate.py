"""Generation operations with a bounded validate-and-repair loop."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import ParseError, ValidationError
from ..ethics.dialect import parse_ethical, print_ethical
from ..ethics.model import EthicalRule, Finding
from ..ethics.validate import validate_rules
from ..pddl.model import PlanningDomain
from ..pddl.parser import parse_domain
from .interchange import extract_code_block, parse_rule_response
from .prompts import DEFAULT_MODEL, RuleGenerationContext, build_code_prompt, build_rule_prompt
from .provider import Provider, ProviderRequest


@dataclass(frozen=True)
class RepairPolicy:
    max_attempts: int = 3  # 1 initial + 2 repairs

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValidationError("max_attempts must be at least 1")


@dataclass(frozen=True)
class GenerationResult:
    ok: bool
    rules: tuple[EthicalRule, ...] | None
    attempts: int
    findings: tuple[Finding, ...] = ()
    code_text: str | None = None


def _repair_request(base: ProviderRequest, findings: tuple[Finding, ...]) -> ProviderRequest:
    appendix = (
        "\n\nYour previous response could not be accepted. Findings:\n"
        + "\n".join(f"- {f}" for f in findings)
        + "\nReturn a corrected document in the same format."
    )
    return replace(base, user_content=base.user_content + appendix)


def generate_rules(
    provider: Provider,
    ctx: RuleGenerationContext,
    policy: RepairPolicy = RepairPolicy(),
    model: str = DEFAULT_MODEL,
) -> GenerationResult:
    """Request rules, validate, and repair up to the attempt bound."""
    domain = parse_domain(ctx.domain_text)
    request = build_rule_prompt(ctx, model)
    findings: tuple[Finding, ...] = ()
    for attempt in range(1, policy.max_attempts + 1):
        text = provider.complete(request)
        rules, findings = parse_rule_response(text, domain)
        if rules is not None:
            return GenerationResult(ok=True, rules=rules, attempts=attempt)
        request = _repair_request(request, findings)
    return GenerationResult(
        ok=False, rules=None, attempts=policy.max_attempts, findings=findings
    )


def _canon_condition(rule: EthicalRule) -> tuple:
    return tuple(
        (l.positive, l.atom.predicate.lower(), tuple(a.lower() for a in l.atom.args))
        for l in rule.condition
    )


def _structural_findings(
    parsed: tuple[EthicalRule, ...], expected: tuple[EthicalRule, ...]
) -> tuple[Finding, ...]:
    findings: list[Finding] = []
    parsed_by_id = {r.id.lower(): r for r in parsed}
    expected_by_id = {r.id.lower(): r for r in expected}
    for missing in sorted(set(expected_by_id) - set(parsed_by_id)):
        findings.append(Finding("error", expected_by_id[missing].id, "rule missing from code"))
    for extra in sorted(set(parsed_by_id) - set(expected_by_id)):
        findings.append(Finding("error", parsed_by_id[extra].id, "rule not in the finalized list"))
    for rid in sorted(set(parsed_by_id) & set(expected_by_id)):
        got, want = parsed_by_id[rid], expected_by_id[rid]
        if got.trigger_action.lower() != want.trigger_action.lower():
            findings.append(
                Finding("error", want.id, f"action is {got.trigger_action}, expected {want.trigger_action}")
            )
        if _canon_condition(got) != _canon_condition(want):
            findings.append(Finding("error", want.id, "condition differs from the finalized rule"))
        got_feats = {(f.name.lower(), f.polarity) for f in got.features}
        want_feats = {(f.name.lower(), f.polarity) for f in want.features}
        if got_feats != want_feats:
            findings.append(
                Finding("error", want.id, "feature names/polarities differ from the finalized rule")
            )
    return tuple(findings)


def _apply_user_significance(
    parsed: tuple[EthicalRule, ...], expected: tuple[EthicalRule, ...]
) -> tuple[EthicalRule, ...]:
    """User-assigned ranks are authoritative; provider ranks are discarded."""
    expected_by_id = {r.id.lower(): r for r in expected}
    out = []
    for rule in parsed:
        want = expected_by_id[rule.id.lower()]
        features = tuple(
            replace(f, significance=want.feature(f.name).significance)
            for f in rule.features
        )
        out.append(replace(rule, features=features, status=want.status))
    # keep the user's rule order
    order = {r.id.lower(): i for i, r in enumerate(expected)}
    out.sort(key=lambda r: order[r.id.lower()])
    return tuple(out)


def generate_code(
    provider: Provider,
    rules: tuple[EthicalRule, ...],
    domain: PlanningDomain,
    policy: RepairPolicy = RepairPolicy(),
    model: str = DEFAULT_MODEL,
) -> GenerationResult:
    """Request dialect code for finalized rules; the result must parse and
    match the rules structurally, after which user ranks are enforced."""
    request = build_code_prompt(rules, domain, model)
    findings: tuple[Finding, ...] = ()
    for attempt in range(1, policy.max_attempts + 1):
        text = provider.complete(request)
        code = extract_code_block(text)
        try:
            parsed = parse_ethical(code, domain)
        except ParseError as exc:
            findings = (Finding("error", "-", f"code does not parse: {exc}"),)
            request = _repair_request(request, findings)
            continue
        report = validate_rules(parsed, domain)
        findings = tuple(report.errors) + _structural_findings(parsed, rules)
        if not findings:
            final = _apply_user_significance(parsed, rules)
            return GenerationResult(
                ok=True,
                rules=final,
                attempts=attempt,
                code_text=print_ethical(final),
            )
        request = _repair_request(request, findings)
    return GenerationResult(
        ok=False, rules=None, attempts=policy.max_attempts, findings=findings
    )
