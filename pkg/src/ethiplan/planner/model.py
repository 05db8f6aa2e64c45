"""Plan values and search configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

PROVENANCE_INTERNAL = "internal"
PROVENANCE_EXTERNAL = "external"

MODE_OPTIMAL = "optimal"
MODE_GREEDY = "greedy"

STATUS_SOLVED = "solved"
STATUS_UNSOLVABLE = "unsolvable"
STATUS_RESOURCE_LIMIT = "resource-limit"


@dataclass(frozen=True)
class Plan:
    steps: tuple[str, ...]
    total_cost: int | None
    provenance: str = PROVENANCE_INTERNAL
    mode: str = MODE_OPTIMAL


@dataclass(frozen=True)
class SearchConfig:
    mode: str = MODE_OPTIMAL
    heuristic: str = "blind"  # "blind" | "hmax" (optimal mode only)
    node_cap: int = 5_000_000
    time_cap: float = 60.0

    def __post_init__(self):
        if self.mode not in (MODE_OPTIMAL, MODE_GREEDY):
            raise ValidationError(f"unknown search mode '{self.mode}'")
        if self.heuristic not in ("blind", "hmax"):
            raise ValidationError(f"unknown heuristic '{self.heuristic}'")
        if self.node_cap <= 0 or self.time_cap <= 0:
            raise ValidationError("search caps must be positive")


@dataclass(frozen=True)
class SolveOutcome:
    status: str  # solved | unsolvable | resource-limit
    plan: Plan | None = None
    stats: dict = field(default_factory=dict, compare=False)
