from .external import (
    ExternalPlannerConfig,
    parse_external_plan,
    run_external_planner,
)
from .model import (
    MODE_GREEDY,
    MODE_OPTIMAL,
    PROVENANCE_EXTERNAL,
    PROVENANCE_INTERNAL,
    STATUS_RESOURCE_LIMIT,
    STATUS_SOLVED,
    STATUS_UNSOLVABLE,
    Plan,
    SearchConfig,
    SolveOutcome,
)
from .packing import PackedTask, pack_task
from .search import compiled_kernel_available, solve
from .validate import PlanFinding, PlanValidation, validate_plan

__all__ = [
    "ExternalPlannerConfig",
    "MODE_GREEDY",
    "MODE_OPTIMAL",
    "PROVENANCE_EXTERNAL",
    "PROVENANCE_INTERNAL",
    "PackedTask",
    "Plan",
    "PlanFinding",
    "PlanValidation",
    "STATUS_RESOURCE_LIMIT",
    "STATUS_SOLVED",
    "STATUS_UNSOLVABLE",
    "SearchConfig",
    "SolveOutcome",
    "compiled_kernel_available",
    "pack_task",
    "parse_external_plan",
    "run_external_planner",
    "solve",
    "validate_plan",
]
