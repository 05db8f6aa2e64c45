"""CLI smoke tests via click's runner."""

from click.testing import CliRunner

from ethiplan.cli import main
from ethiplan.examplelib import get_example


def _write_example(tmp_path, example_id="av-hospital-emergency"):
    entry = get_example(example_id)
    domain = tmp_path / "domain.pddl"
    problem = tmp_path / "problem.pddl"
    rules = tmp_path / "rules.eth"
    domain.write_text(entry.domain_text)
    problem.write_text(entry.problem_text)
    rules.write_text(entry.rules_text)
    return domain, problem, rules


def test_plan_command_baseline(tmp_path):
    domain, problem, _ = _write_example(tmp_path)
    out = tmp_path / "plan.txt"
    runner = CliRunner()
    result = runner.invoke(
        main, ["plan", str(domain), str(problem), "--plan-file", str(out)]
    )
    assert result.exit_code == 0, result.output
    assert "(drive-shortcut home hospital)" in result.output
    assert "; cost = 1" in out.read_text()


def test_plan_command_with_rules(tmp_path):
    domain, problem, rules = _write_example(tmp_path, "av-leisure-trip")
    runner = CliRunner()
    result = runner.invoke(main, ["plan", str(domain), str(problem), "--rules", str(rules)])
    assert result.exit_code == 0, result.output
    assert "(drive home junction-a)" in result.output
    assert "; penalties =" in result.output
    assert "drive-shortcut" not in result.output


def test_compile_command_emits_parseable_pddl(tmp_path):
    from ethiplan.pddl import parse_domain, parse_problem

    domain, problem, rules = _write_example(tmp_path)
    out_domain = tmp_path / "compiled-domain.pddl"
    out_problem = tmp_path / "compiled-problem.pddl"
    runner = CliRunner()
    result = runner.invoke(
        main,
        [
            "compile",
            str(domain),
            str(problem),
            str(rules),
            "--out-domain",
            str(out_domain),
            "--out-problem",
            str(out_problem),
        ],
    )
    assert result.exit_code == 0, result.output
    compiled_domain = parse_domain(out_domain.read_text())
    parse_problem(out_problem.read_text(), compiled_domain)
    assert any(a.name.startswith("p2p--") for a in compiled_domain.actions)


def test_examples_command_lists_catalog():
    runner = CliRunner()
    result = runner.invoke(main, ["examples"])
    assert result.exit_code == 0
    for example_id in ("av-hospital-emergency", "eldercare-evening-round", "rescue-warehouse-sweep"):
        assert example_id in result.output
