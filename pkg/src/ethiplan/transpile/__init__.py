from .compiler import (
    FINALIZE,
    PLANNING_MODE,
    PREFIX,
    BackMapEntry,
    CompiledTask,
    compile_task,
)
from .project import ProjectedPlan, ProjectedStep, project_plan
from .weights import DEFAULT_SCHEME, MAX_RANK, MIN_RANK, WeightScheme, weight

__all__ = [
    "FINALIZE",
    "PLANNING_MODE",
    "PREFIX",
    "BackMapEntry",
    "CompiledTask",
    "DEFAULT_SCHEME",
    "MAX_RANK",
    "MIN_RANK",
    "ProjectedPlan",
    "ProjectedStep",
    "WeightScheme",
    "compile_task",
    "project_plan",
    "weight",
]
