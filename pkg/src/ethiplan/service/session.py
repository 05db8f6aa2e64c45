"""Four-stage session workflow with downstream invalidation.

Stage order: Draft -> RulesGenerated -> RulesFinalized -> CodeGenerated
-> CodeFinalized -> Planned. Editing a stage-k artifact deletes every
artifact past k; artifacts only exist at or below the current stage.
"""

from __future__ import annotations

import json
import os
import tempfile
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from ..errors import (
    CompilationError,
    EthiplanError,
    ParseError,
    ResourceLimitError,
    ValidationError,
)
from ..ethics import (
    STATUS_EDITED,
    STATUS_USER_ADDED,
    EthicalRule,
    EthicalTask,
    parse_ethical,
    set_significance,
    simulate_features,
    validate_rules,
)
from ..ethics.model import EthicalFeature
from ..examplelib import get_example
from ..llm.generate import RepairPolicy, generate_code, generate_rules
from ..llm.interchange import parse_condition_strings
from ..llm.prompts import RuleGenerationContext
from ..pddl import ground_task, parse_domain, parse_problem
from ..planner import SearchConfig, solve
from ..planner.external import ExternalPlannerConfig, run_external_planner
from ..transpile import WeightScheme, compile_task, project_plan
from .comparison import build_comparison
from .config import ServiceConfig

DRAFT = "Draft"
RULES_GENERATED = "RulesGenerated"
RULES_FINALIZED = "RulesFinalized"
CODE_GENERATED = "CodeGenerated"
CODE_FINALIZED = "CodeFinalized"
PLANNED = "Planned"

STAGES = (DRAFT, RULES_GENERATED, RULES_FINALIZED, CODE_GENERATED, CODE_FINALIZED, PLANNED)


def stage_index(stage: str) -> int:
    return STAGES.index(stage)


class StageOrderError(EthiplanError):
    pass


class SessionNotFound(EthiplanError):
    pass


class EditError(EthiplanError):
    def __init__(self, message: str, findings: tuple = ()):
        self.findings = findings
        super().__init__(message)


class GenerationError(EthiplanError):
    def __init__(self, message: str, findings: tuple = (), attempts: int = 0):
        self.findings = findings
        self.attempts = attempts
        super().__init__(message)


@dataclass(frozen=True)
class SessionInputs:
    domain_text: str
    problem_text: str
    principles: tuple[str, ...]
    initial_state_notes: str = ""
    assumptions: str = ""
    model: str = "mock-ethicist-v1"
    example_id: str | None = None

    def context(self) -> RuleGenerationContext:
        return RuleGenerationContext(
            domain_text=self.domain_text,
            problem_text=self.problem_text,
            principles=self.principles,
            initial_state_notes=self.initial_state_notes,
            assumptions=self.assumptions,
        )


@dataclass(frozen=True)
class Session:
    id: str
    stage: str
    inputs: SessionInputs
    created_at: str
    updated_at: str
    rules: tuple[EthicalRule, ...] | None = None
    rules_attempts: int = 0
    code: str | None = None
    code_valid: bool = False
    code_findings: tuple[str, ...] = ()
    comparison: dict | None = None
    warnings: tuple[str, ...] = ()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _touch(session: Session, **changes) -> Session:
    return replace(session, updated_at=_now(), **changes)


# -- rule <-> document codec -------------------------------------------------

def rule_to_doc(rule: EthicalRule) -> dict:
    return {
        "id": rule.id,
        "action": rule.trigger_action,
        "condition": [str(l) for l in rule.condition],
        "features": [
            {"name": f.name, "polarity": f.polarity, "significance": f.significance}
            for f in rule.features
        ],
        "statement": rule.statement,
        "principle": rule.principle,
        "explanation": rule.explanation,
        "status": rule.status,
    }


def rule_from_doc(doc: dict, domain) -> EthicalRule:
    try:
        condition = parse_condition_strings(
            list(doc.get("condition", [])), domain, doc.get("action", "")
        )
        return EthicalRule(
            id=doc.get("id", ""),
            trigger_action=doc.get("action", ""),
            condition=condition,
            features=tuple(
                EthicalFeature(f["name"], f["polarity"], int(f["significance"]))
                for f in doc.get("features", [])
            ),
            statement=doc.get("statement", ""),
            principle=doc.get("principle", ""),
            explanation=doc.get("explanation", ""),
            status=doc.get("status", STATUS_USER_ADDED),
        )
    except (KeyError, TypeError) as exc:
        raise EditError(f"malformed rule document: {exc}") from exc


def session_to_doc(session: Session) -> dict:
    return {
        "id": session.id,
        "stage": session.stage,
        "created_at": session.created_at,
        "updated_at": session.updated_at,
        "inputs": {
            "domain_text": session.inputs.domain_text,
            "problem_text": session.inputs.problem_text,
            "principles": list(session.inputs.principles),
            "initial_state_notes": session.inputs.initial_state_notes,
            "assumptions": session.inputs.assumptions,
            "model": session.inputs.model,
            "example_id": session.inputs.example_id,
        },
        "rules": [rule_to_doc(r) for r in session.rules] if session.rules is not None else None,
        "rules_attempts": session.rules_attempts,
        "code": session.code,
        "code_valid": session.code_valid,
        "code_findings": list(session.code_findings),
        "comparison": session.comparison,
        "warnings": list(session.warnings),
    }


def session_from_doc(doc: dict) -> Session:
    inputs = SessionInputs(
        domain_text=doc["inputs"]["domain_text"],
        problem_text=doc["inputs"]["problem_text"],
        principles=tuple(doc["inputs"]["principles"]),
        initial_state_notes=doc["inputs"].get("initial_state_notes", ""),
        assumptions=doc["inputs"].get("assumptions", ""),
        model=doc["inputs"].get("model", "mock-ethicist-v1"),
        example_id=doc["inputs"].get("example_id"),
    )
    rules = None
    if doc.get("rules") is not None:
        domain = parse_domain(inputs.domain_text)
        rules = tuple(rule_from_doc(rd, domain) for rd in doc["rules"])
    return Session(
        id=doc["id"],
        stage=doc["stage"],
        inputs=inputs,
        created_at=doc["created_at"],
        updated_at=doc["updated_at"],
        rules=rules,
        rules_attempts=doc.get("rules_attempts", 0),
        code=doc.get("code"),
        code_valid=doc.get("code_valid", False),
        code_findings=tuple(doc.get("code_findings", ())),
        comparison=doc.get("comparison"),
        warnings=tuple(doc.get("warnings", ())),
    )


class SessionStore:
    """One JSON document per session, written atomically."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, session_id: str) -> Path:
        if not session_id.replace("-", "").isalnum():
            raise SessionNotFound(f"invalid session id '{session_id}'")
        return self.directory / f"{session_id}.json"

    def save(self, session: Session) -> None:
        doc = session_to_doc(session)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(doc, handle, indent=2)
            os.replace(tmp, self._path(session.id))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def load(self, session_id: str) -> Session:
        path = self._path(session_id)
        if not path.exists():
            raise SessionNotFound(f"no session '{session_id}'")
        return session_from_doc(json.loads(path.read_text(encoding="utf-8")))

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.json"))


# -- operations ---------------------------------------------------------------

class SessionManager:
    def __init__(self, config: ServiceConfig, store: SessionStore, provider):
        self.config = config
        self.store = store
        self.provider = provider
        self.scheme = WeightScheme(config.weights_scale, config.weights_base)
        self.policy = RepairPolicy()

    # create

    def create_session(
        self,
        inputs: SessionInputs | None = None,
        example_id: str | None = None,
        model: str | None = None,
    ) -> Session:
        if example_id is not None:
            entry = get_example(example_id)
            if entry is None:
                raise ValidationError(f"unknown example id '{example_id}'")
            inputs = SessionInputs(
                domain_text=entry.domain_text,
                problem_text=entry.problem_text,
                principles=entry.principles,
                initial_state_notes=entry.initial_state_notes,
                assumptions=entry.assumptions,
                model=model or self.config.default_model,
                example_id=entry.id,
            )
        if inputs is None:
            raise ValidationError("either inputs or example_id is required")
        if not inputs.principles:
            raise ValidationError("at least one ethical principle is required")
        domain = parse_domain(inputs.domain_text)
        problem = parse_problem(inputs.problem_text, domain)
        now = _now()
        session = Session(
            id=uuid.uuid4().hex,
            stage=DRAFT,
            inputs=inputs,
            created_at=now,
            updated_at=now,
            warnings=problem.warnings,
        )
        self.store.save(session)
        return session

    # advance

    def advance(self, session: Session, target: str) -> Session:
        if target not in STAGES:
            raise StageOrderError(f"unknown stage '{target}'")
        if stage_index(target) != stage_index(session.stage) + 1:
            raise StageOrderError(
                f"cannot advance from {session.stage} to {target}; "
                f"next stage is {STAGES[stage_index(session.stage) + 1] if session.stage != PLANNED else 'none'}"
            )
        if target == RULES_GENERATED:
            session = self._generate_rules(session)
        elif target == RULES_FINALIZED:
            session = _touch(session, stage=RULES_FINALIZED)
        elif target == CODE_GENERATED:
            session = self._generate_code(session)
        elif target == CODE_FINALIZED:
            if not session.code_valid:
                raise EditError(
                    "code has findings and cannot be finalized",
                    tuple(session.code_findings),
                )
            session = _touch(session, stage=CODE_FINALIZED)
        elif target == PLANNED:
            session = self._plan(session)
        self.store.save(session)
        return session

    def _generate_rules(self, session: Session) -> Session:
        result = generate_rules(
            self.provider, session.inputs.context(), self.policy, session.inputs.model
        )
        if not result.ok:
            raise GenerationError(
                "rule generation failed validation after "
                f"{result.attempts} attempt(s)",
                result.findings,
                result.attempts,
            )
        return _touch(
            session,
            stage=RULES_GENERATED,
            rules=result.rules,
            rules_attempts=result.attempts,
        )

    def _generate_code(self, session: Session) -> Session:
        domain = parse_domain(session.inputs.domain_text)
        result = generate_code(
            self.provider, session.rules, domain, self.policy, session.inputs.model
        )
        if not result.ok:
            raise GenerationError(
                f"code generation failed validation after {result.attempts} attempt(s)",
                result.findings,
                result.attempts,
            )
        return _touch(
            session,
            stage=CODE_GENERATED,
            code=result.code_text,
            code_valid=True,
            code_findings=(),
        )

    def _solve(self, domain, problem):
        task = ground_task(domain, problem, self.config.ground_cap)
        if self.config.external_planner:
            planner_cfg = ExternalPlannerConfig(
                executable=self.config.external_planner,
                args_template=self.config.external_planner_args,
                timeout=self.config.external_planner_timeout,
            )
            plan, validation = run_external_planner(planner_cfg, domain, problem, task)
            if not validation.ok:
                raise EditError(
                    "external planner returned an invalid plan",
                    tuple(f.message for f in validation.findings),
                )
            return "solved", plan
        cfg = SearchConfig(node_cap=self.config.node_cap, time_cap=self.config.time_cap)
        outcome = solve(task, cfg)
        if outcome.status == "resource-limit":
            raise ResourceLimitError(
                f"planner hit its {outcome.stats.get('kernel_status')} cap"
            )
        return outcome.status, outcome.plan

    def _plan(self, session: Session) -> Session:
        domain = parse_domain(session.inputs.domain_text)
        problem = parse_problem(session.inputs.problem_text, domain)
        rules = parse_ethical(session.code, domain)
        report = validate_rules(rules, domain)
        if not report.ok:
            raise EditError(
                "code has validation errors", tuple(str(f) for f in report.errors)
            )
        task = EthicalTask(domain, problem, rules)
        compiled = compile_task(task, self.scheme, self.config.variant_cap)

        baseline_status, baseline_plan = self._solve(domain, problem)
        ethical_status, compiled_plan = self._solve(compiled.domain, compiled.problem)

        projected = None
        tally = None
        if ethical_status == "solved":
            projected = project_plan(compiled_plan.steps, compiled)
            tally = simulate_features(task, projected.signatures, self.scheme)
            identity = projected.base_cost_total + tally.penalty_total
            if compiled_plan.total_cost != identity:  # pragma: no cover
                raise ValidationError(
                    "internal error: compiled plan cost "
                    f"{compiled_plan.total_cost} != base+penalty {identity}"
                )
        comparison = build_comparison(
            baseline_status=baseline_status,
            baseline_plan=baseline_plan,
            ethical_status=ethical_status,
            compiled_plan=compiled_plan,
            projected=projected,
            tally=tally,
            scheme=self.scheme,
        )
        return _touch(session, stage=PLANNED, comparison=comparison)

    # mutate

    def mutate(self, session: Session, edits: list[dict]) -> Session:
        if not edits:
            raise EditError("no edits given")
        updated = session
        rules_touched = False
        code_touched = False
        for edit in edits:
            op = edit.get("op")
            if op == "add":
                updated, _ = self._edit_add(updated, edit)
                rules_touched = True
            elif op == "remove":
                updated = self._edit_remove(updated, edit)
                rules_touched = True
            elif op == "update":
                updated = self._edit_update(updated, edit)
                rules_touched = True
            elif op == "set-significance":
                updated = self._edit_significance(updated, edit)
                rules_touched = True
            elif op == "replace-code":
                updated = self._edit_code(updated, edit)
                code_touched = True
            else:
                raise EditError(f"unknown edit op '{op}'")
        if rules_touched:
            # downstream invalidation: back to the rules-editing stage
            updated = _touch(
                updated,
                stage=RULES_GENERATED,
                code=None,
                code_valid=False,
                code_findings=(),
                comparison=None,
            )
        elif code_touched:
            updated = _touch(updated, comparison=None)
        self.store.save(updated)
        return updated

    def _require_rules(self, session: Session) -> tuple[EthicalRule, ...]:
        if session.rules is None:
            raise EditError("session has no rules yet")
        return session.rules

    def _edit_add(self, session: Session, edit: dict):
        rules = self._require_rules(session)
        domain = parse_domain(session.inputs.domain_text)
        rule = rule_from_doc({**edit.get("rule", {}), "status": STATUS_USER_ADDED}, domain)
        if any(r.id.lower() == rule.id.lower() for r in rules):
            raise EditError(f"rule id '{rule.id}' already exists")
        report = validate_rules(rules + (rule,), domain)
        if not report.ok:
            raise EditError(
                "rule is invalid", tuple(str(f) for f in report.errors)
            )
        return replace(session, rules=rules + (rule,)), rule

    def _edit_remove(self, session: Session, edit: dict) -> Session:
        rules = self._require_rules(session)
        rid = edit.get("rule_id", "")
        remaining = tuple(r for r in rules if r.id.lower() != rid.lower())
        if len(remaining) == len(rules):
            raise EditError(f"unknown rule id '{rid}'")
        return replace(session, rules=remaining)

    def _edit_update(self, session: Session, edit: dict) -> Session:
        rules = self._require_rules(session)
        domain = parse_domain(session.inputs.domain_text)
        doc = edit.get("rule", {})
        rid = doc.get("id", "")
        if not any(r.id.lower() == rid.lower() for r in rules):
            raise EditError(f"unknown rule id '{rid}'")
        rule = rule_from_doc({**doc, "status": STATUS_EDITED}, domain)
        updated = tuple(rule if r.id.lower() == rid.lower() else r for r in rules)
        report = validate_rules(updated, domain)
        if not report.ok:
            raise EditError("rule is invalid", tuple(str(f) for f in report.errors))
        return replace(session, rules=updated)

    def _edit_significance(self, session: Session, edit: dict) -> Session:
        rules = self._require_rules(session)
        try:
            updated = set_significance(
                rules,
                edit.get("rule_id", ""),
                edit.get("feature", ""),
                int(edit.get("significance", 0)),
            )
        except ValidationError as exc:
            raise EditError(str(exc)) from exc
        return replace(session, rules=updated)

    def _edit_code(self, session: Session, edit: dict) -> Session:
        if stage_index(session.stage) < stage_index(CODE_GENERATED):
            raise EditError("no code to edit before the code stage")
        text = edit.get("code", "")
        domain = parse_domain(session.inputs.domain_text)
        findings: tuple[str, ...] = ()
        valid = True
        try:
            rules = parse_ethical(text, domain)
            report = validate_rules(rules, domain)
            if not report.ok:
                valid = False
                findings = tuple(str(f) for f in report.errors)
        except ParseError as exc:
            valid = False
            findings = (str(exc),)
        return replace(
            session,
            stage=CODE_GENERATED,
            code=text,
            code_valid=valid,
            code_findings=findings,
        )

    def comparison_of(self, session: Session) -> dict:
        if session.stage != PLANNED or session.comparison is None:
            raise EditError("comparison not available before the Planned stage")
        return session.comparison
