"""Command-line entry points: serve the API, plan, compile, list examples."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .errors import EthiplanError
from .ethics import EthicalTask, parse_ethical, simulate_features, validate_rules
from .examplelib import list_examples
from .pddl import ground_task, parse_domain, parse_problem, serialize_domain, serialize_problem
from .planner import SearchConfig, solve
from .planner.external import format_plan_file
from .transpile import WeightScheme, compile_task, project_plan


@click.group()
def main():
    """Ethically-informed planning toolkit."""


def _load_task(domain_path: str, problem_path: str):
    domain = parse_domain(Path(domain_path).read_text())
    problem = parse_problem(Path(problem_path).read_text(), domain)
    return domain, problem


@main.command()
@click.argument("domain_path", type=click.Path(exists=True))
@click.argument("problem_path", type=click.Path(exists=True))
@click.option("--rules", "rules_path", type=click.Path(exists=True), help="rule dialect file")
@click.option("--plan-file", "plan_path", type=click.Path(), help="write the plan here")
@click.option("--scale", default=10, show_default=True, help="weight scale S")
@click.option("--base", default=100, show_default=True, help="weight base B")
@click.option("--node-cap", default=5_000_000, show_default=True)
@click.option("--time-cap", default=60.0, show_default=True)
def plan(domain_path, problem_path, rules_path, plan_path, scale, base, node_cap, time_cap):
    """Solve a task optimally; with --rules, compile ethics first and
    report the projected plan plus the penalty breakdown."""
    domain, problem = _load_task(domain_path, problem_path)
    cfg = SearchConfig(node_cap=node_cap, time_cap=time_cap)
    scheme = WeightScheme(scale, base)

    if rules_path:
        rules = parse_ethical(Path(rules_path).read_text(), domain)
        report = validate_rules(rules, domain)
        if not report.ok:
            for finding in report.findings:
                click.echo(str(finding), err=True)
            raise SystemExit(2)
        task = EthicalTask(domain, problem, rules)
        compiled = compile_task(task, scheme)
        outcome = solve(ground_task(compiled.domain, compiled.problem), cfg)
        if outcome.status != "solved":
            click.echo(outcome.status)
            raise SystemExit(1)
        projected = project_plan(outcome.plan.steps, compiled)
        tally = simulate_features(task, projected.signatures, scheme)
        for step in projected.steps:
            charges = f"  ; charges {', '.join(step.charged_rule_ids)}" if step.charged_rule_ids else ""
            click.echo(step.signature + charges)
        click.echo(f"; total cost = {outcome.plan.total_cost}")
        click.echo(f"; base cost = {projected.base_cost_total}")
        click.echo(f"; penalties = {tally.penalty_total}")
        for row in tally.breakdown:
            if row.penalty:
                click.echo(
                    f";   {row.rule_id}/{row.feature} ({row.polarity} rank "
                    f"{row.significance}): {row.penalty}"
                )
        if plan_path:
            Path(plan_path).write_text(format_plan_file(outcome.plan))
        return

    outcome = solve(ground_task(domain, problem), cfg)
    if outcome.status != "solved":
        click.echo(outcome.status)
        raise SystemExit(1)
    text = format_plan_file(outcome.plan)
    click.echo(text, nl=False)
    if plan_path:
        Path(plan_path).write_text(text)


@main.command()
@click.argument("domain_path", type=click.Path(exists=True))
@click.argument("problem_path", type=click.Path(exists=True))
@click.argument("rules_path", type=click.Path(exists=True))
@click.option("--out-domain", type=click.Path(), required=True)
@click.option("--out-problem", type=click.Path(), required=True)
@click.option("--scale", default=10, show_default=True)
@click.option("--base", default=100, show_default=True)
def compile(domain_path, problem_path, rules_path, out_domain, out_problem, scale, base):
    """Compile rules into plain cost-annotated PDDL files."""
    domain, problem = _load_task(domain_path, problem_path)
    rules = parse_ethical(Path(rules_path).read_text(), domain)
    compiled = compile_task(EthicalTask(domain, problem, rules), WeightScheme(scale, base))
    Path(out_domain).write_text(serialize_domain(compiled.domain))
    Path(out_problem).write_text(serialize_problem(compiled.problem))
    click.echo(f"wrote {out_domain} and {out_problem}")


@main.command()
def examples():
    """List the bundled example tasks."""
    for entry in list_examples():
        click.echo(f"{entry.id:32} [{entry.domain_key}] {entry.title}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), help="YAML config file")
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.option("--storage-dir", default=None, type=click.Path())
@click.option("--ui", "ui_dir", default=None, type=click.Path(), help="static webui directory")
def serve(config_path, host, port, storage_dir, ui_dir):
    """Run the HTTP API (and optionally the static webui under /ui)."""
    import uvicorn
    from dataclasses import replace as dc_replace

    from .service import create_app, load_config

    config = load_config(config_path)
    overrides = {}
    if host:
        overrides["host"] = host
    if port:
        overrides["port"] = port
    if storage_dir:
        overrides["storage_dir"] = storage_dir
    if ui_dir:
        overrides["ui_dir"] = ui_dir
    if overrides:
        config = dc_replace(config, **overrides)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


def run():
    try:
        main(standalone_mode=True)
    except EthiplanError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    run()
