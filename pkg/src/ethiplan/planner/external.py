"""Adapter for an external planner executable (Fast Downward style).

Contract: the executable is invoked with domain file, problem file, and
an output plan path; exit status 0 with a plan file present means
solved. Plan files hold one `(<name> <arg>*)` per line, `;` comments,
and optionally a trailing `; cost = N` line.
"""

from __future__ import annotations

import re
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..errors import ExternalPlannerError, ParseError
from ..pddl.ground import GroundTask
from ..pddl.model import PlanningDomain, PlanningProblem
from ..pddl.printer import serialize_domain, serialize_problem
from .model import PROVENANCE_EXTERNAL, Plan
from .validate import PlanValidation, validate_plan

_COST_RE = re.compile(r";\s*cost\s*=\s*(\d+)", re.IGNORECASE)
_STEP_RE = re.compile(r"^\(\s*[^()\s]+(\s+[^()\s]+)*\s*\)$")


def parse_external_plan(text: str) -> Plan:
    """Parse a plan file; cost is the trailing comment when present,
    otherwise left unset for validate_plan to recompute."""
    steps: list[str] = []
    cost: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(";"):
            m = _COST_RE.search(line)
            if m:
                cost = int(m.group(1))
            continue
        if not _STEP_RE.match(line):
            raise ParseError(f"malformed plan line: '{line}'", lineno, 1)
        inner = line[1:-1].split()
        steps.append("(" + " ".join(inner) + ")")
    return Plan(
        steps=tuple(steps),
        total_cost=cost,
        provenance=PROVENANCE_EXTERNAL,
        mode="external",
    )


def format_plan_file(plan: Plan) -> str:
    """Render a plan in the conventional external plan-file format."""
    lines = list(plan.steps)
    if plan.total_cost is not None:
        lines.append(f"; cost = {plan.total_cost} (general cost)")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ExternalPlannerConfig:
    executable: str
    # template tokens: {domain} {problem} {plan}
    args_template: str = "{domain} {problem} --plan-file {plan}"
    timeout: float = 120.0


def run_external_planner(
    config: ExternalPlannerConfig,
    domain: PlanningDomain,
    problem: PlanningProblem,
    task: GroundTask,
) -> tuple[Plan, PlanValidation]:
    """Serialize, invoke, parse, and re-validate an external plan."""
    with tempfile.TemporaryDirectory(prefix="ethiplan-ext-") as tmp:
        tmpdir = Path(tmp)
        domain_path = tmpdir / "domain.pddl"
        problem_path = tmpdir / "problem.pddl"
        plan_path = tmpdir / "plan.txt"
        domain_path.write_text(serialize_domain(domain))
        problem_path.write_text(serialize_problem(problem))

        args = [config.executable] + [
            part.format(domain=domain_path, problem=problem_path, plan=plan_path)
            for part in config.args_template.split()
        ]
        try:
            proc = subprocess.run(
                args, capture_output=True, text=True, timeout=config.timeout
            )
        except subprocess.TimeoutExpired as exc:
            raise ExternalPlannerError(
                f"external planner timed out after {config.timeout}s"
            ) from exc
        except OSError as exc:
            raise ExternalPlannerError(f"cannot run '{config.executable}': {exc}") from exc

        if proc.returncode != 0 or not plan_path.exists():
            detail = (proc.stderr or proc.stdout or "").strip()[-400:]
            raise ExternalPlannerError(
                f"external planner exited with status {proc.returncode}"
                + (f": {detail}" if detail else "")
            )
        plan = parse_external_plan(plan_path.read_text())

    validation = validate_plan(task, plan)
    if plan.total_cost is None and validation.ok:
        plan = Plan(
            steps=plan.steps,
            total_cost=validation.recomputed_cost,
            provenance=PROVENANCE_EXTERNAL,
            mode="external",
        )
    return plan, validation
