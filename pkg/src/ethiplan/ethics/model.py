"""Ethical rules: triggers, conditions, and ranked features."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from ..errors import ValidationError
from ..pddl.model import Literal, PlanningDomain, PlanningProblem
from ..transpile.weights import MAX_RANK, MIN_RANK, WeightScheme

POSITIVE = "positive"
NEGATIVE = "negative"

STATUS_GENERATED = "generated"
STATUS_EDITED = "edited"
STATUS_USER_ADDED = "user-added"
_STATUSES = (STATUS_GENERATED, STATUS_EDITED, STATUS_USER_ADDED)


@dataclass(frozen=True)
class EthicalFeature:
    name: str
    polarity: str
    significance: int

    def __post_init__(self):
        if not re.match(r"^[A-Za-z][A-Za-z0-9_-]*$", self.name or ""):
            raise ValidationError(
                f"feature name '{self.name}' must be a bare identifier"
            )
        if self.polarity not in (POSITIVE, NEGATIVE):
            raise ValidationError(
                f"feature {self.name}: polarity must be positive or negative"
            )
        if not MIN_RANK <= self.significance <= MAX_RANK:
            raise ValidationError(
                f"feature {self.name}: significance {self.significance} outside "
                f"[{MIN_RANK},{MAX_RANK}]"
            )


@dataclass(frozen=True)
class EthicalRule:
    id: str
    trigger_action: str
    condition: tuple[Literal, ...] = ()
    features: tuple[EthicalFeature, ...] = ()
    statement: str = ""
    principle: str = ""
    explanation: str = ""
    status: str = field(default=STATUS_USER_ADDED, compare=False)

    _ID_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")

    def __post_init__(self):
        if not self._ID_RE.match(self.id):
            raise ValidationError(
                f"rule id '{self.id}' must be an identifier "
                "(letters, digits, '-', '_', starting with a letter)"
            )
        if not self.features:
            raise ValidationError(f"rule {self.id}: needs at least one feature")
        names = [f.name.lower() for f in self.features]
        if len(names) != len(set(names)):
            raise ValidationError(f"rule {self.id}: duplicate feature names")
        if self.status not in _STATUSES:
            raise ValidationError(f"rule {self.id}: invalid status '{self.status}'")

    def negative_weight(self, scheme: WeightScheme) -> int:
        """Penalty charged each time this rule fires."""
        return sum(
            scheme.weight(f.significance) for f in self.features if f.polarity == NEGATIVE
        )

    def positive_weight(self, scheme: WeightScheme) -> int:
        """Penalty charged once, at plan end, if this rule never fired."""
        return sum(
            scheme.weight(f.significance) for f in self.features if f.polarity == POSITIVE
        )

    def has_negative(self) -> bool:
        return any(f.polarity == NEGATIVE for f in self.features)

    def has_positive(self) -> bool:
        return any(f.polarity == POSITIVE for f in self.features)

    def feature(self, name: str) -> EthicalFeature | None:
        for f in self.features:
            if f.name.lower() == name.lower():
                return f
        return None

    def with_status(self, status: str) -> "EthicalRule":
        return replace(self, status=status)


@dataclass(frozen=True)
class EthicalTask:
    domain: PlanningDomain
    problem: PlanningProblem
    rules: tuple[EthicalRule, ...] = ()

    def __post_init__(self):
        ids = [r.id.lower() for r in self.rules]
        if len(ids) != len(set(ids)):
            raise ValidationError("rule ids must be unique")


@dataclass(frozen=True)
class FeatureCharge:
    """One (rule, feature) line in the penalty breakdown."""

    rule_id: str
    feature: str
    polarity: str
    significance: int
    fired_count: int
    penalty: int


@dataclass(frozen=True)
class FeatureTally:
    counts: dict[str, int]          # rule id -> firings (rules with negative features)
    achieved: dict[str, bool]       # rule id -> fired at least once (positive features)
    penalty_total: int
    breakdown: tuple[FeatureCharge, ...] = ()


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    rule_id: str
    message: str

    def __str__(self) -> str:
        return f"[{self.severity}] rule {self.rule_id}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors
