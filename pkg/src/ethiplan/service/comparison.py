"""Side-by-side plan comparison document."""

from __future__ import annotations

import json
from difflib import SequenceMatcher

from ..ethics.model import FeatureTally
from ..planner.model import Plan
from ..transpile.project import ProjectedPlan
from ..transpile.weights import WeightScheme


def _plan_doc(status: str, steps: list[str] | None, total_cost: int | None) -> dict:
    doc: dict = {"status": status}
    if status == "solved":
        doc["steps"] = list(steps or [])
        doc["total_cost"] = total_cost
    return doc


def _alignment(baseline: list[str], ethical: list[str]) -> list[dict]:
    """Pair/diff steps so each step of both plans appears exactly once."""
    rows: list[dict] = []
    matcher = SequenceMatcher(a=baseline, b=ethical, autojunk=False)
    for tag, i1, i2, j1, j2 in matcher.get_opcodes():
        if tag == "equal":
            for offset in range(i2 - i1):
                rows.append(
                    {"kind": "match", "baseline_index": i1 + offset, "ethical_index": j1 + offset}
                )
        else:
            paired = min(i2 - i1, j2 - j1)
            for offset in range(paired):
                rows.append(
                    {"kind": "differ", "baseline_index": i1 + offset, "ethical_index": j1 + offset}
                )
            for index in range(i1 + paired, i2):
                rows.append({"kind": "baseline-only", "baseline_index": index, "ethical_index": None})
            for index in range(j1 + paired, j2):
                rows.append({"kind": "ethical-only", "baseline_index": None, "ethical_index": index})
    return rows


def build_comparison(
    baseline_status: str,
    baseline_plan: Plan | None,
    ethical_status: str,
    compiled_plan: Plan | None,
    projected: ProjectedPlan | None,
    tally: FeatureTally | None,
    scheme: WeightScheme,
) -> dict:
    doc: dict = {
        "baseline": _plan_doc(
            baseline_status,
            list(baseline_plan.steps) if baseline_plan else None,
            baseline_plan.total_cost if baseline_plan else None,
        ),
        "weights": {"scale": scheme.scale, "base": scheme.base},
    }
    if ethical_status == "solved" and projected is not None:
        doc["ethical"] = {
            "status": "solved",
            "steps": list(projected.signatures),
            "compiled_steps": list(compiled_plan.steps),
            "total_cost": compiled_plan.total_cost,
            "base_cost": projected.base_cost_total,
            "penalty_total": projected.penalty_total,
            "step_charges": [list(s.charged_rule_ids) for s in projected.steps],
            "step_firings": [list(s.fired_rule_ids) for s in projected.steps],
            "unachieved_rule_ids": list(projected.unachieved_rule_ids),
        }
    else:
        doc["ethical"] = {"status": ethical_status}

    if tally is not None:
        doc["tally"] = {
            "penalty_total": tally.penalty_total,
            "rows": [
                {
                    "rule_id": row.rule_id,
                    "feature": row.feature,
                    "polarity": row.polarity,
                    "significance": row.significance,
                    "fired_count": row.fired_count,
                    "penalty": row.penalty,
                }
                for row in tally.breakdown
            ],
        }
    else:
        doc["tally"] = None

    if baseline_status == "solved" and ethical_status == "solved":
        baseline_steps = list(baseline_plan.steps)
        ethical_steps = list(projected.signatures)
        doc["alignment"] = _alignment(baseline_steps, ethical_steps)
        doc["identical"] = baseline_steps == ethical_steps
    else:
        doc["alignment"] = None
        doc["identical"] = False
    return doc


def canonical_json(doc: dict) -> str:
    """Stable byte representation for determinism checks and responses."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
