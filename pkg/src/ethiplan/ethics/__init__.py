from .dialect import parse_ethical, print_ethical
from .model import (
    NEGATIVE,
    POSITIVE,
    STATUS_EDITED,
    STATUS_GENERATED,
    STATUS_USER_ADDED,
    EthicalFeature,
    EthicalRule,
    EthicalTask,
    FeatureCharge,
    FeatureTally,
    Finding,
    ValidationReport,
)
from .simulate import parse_step, simulate_features
from .validate import set_significance, validate_rules

__all__ = [
    "NEGATIVE",
    "POSITIVE",
    "STATUS_EDITED",
    "STATUS_GENERATED",
    "STATUS_USER_ADDED",
    "EthicalFeature",
    "EthicalRule",
    "EthicalTask",
    "FeatureCharge",
    "FeatureTally",
    "Finding",
    "ValidationReport",
    "parse_ethical",
    "parse_step",
    "print_ethical",
    "set_significance",
    "simulate_features",
    "validate_rules",
]
