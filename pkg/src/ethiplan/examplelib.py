"""Bundled example problems across the three ethically-sensitive domains."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import yaml

from .ethics import EthicalRule, parse_ethical
from .pddl import PlanningDomain, PlanningProblem, parse_domain, parse_problem


@dataclass(frozen=True)
class ExampleEntry:
    id: str
    title: str
    domain_key: str
    domain_text: str
    problem_text: str
    rules_text: str
    principles: tuple[str, ...]
    initial_state_notes: str
    assumptions: str

    def parse(self) -> tuple[PlanningDomain, PlanningProblem, tuple[EthicalRule, ...]]:
        domain = parse_domain(self.domain_text)
        problem = parse_problem(self.problem_text, domain)
        rules = parse_ethical(self.rules_text, domain)
        return domain, problem, rules


def _read(name: str) -> str:
    return resources.files("ethiplan.corpus").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def list_examples() -> tuple[ExampleEntry, ...]:
    catalog = yaml.safe_load(_read("catalog.yaml"))
    entries = []
    for item in catalog["examples"]:
        entries.append(
            ExampleEntry(
                id=item["id"],
                title=item["title"],
                domain_key=item["domain_key"],
                domain_text=_read(item["domain_file"]),
                problem_text=_read(item["problem_file"]),
                rules_text=_read(item["rules_file"]),
                principles=tuple(item["principles"]),
                initial_state_notes=item["initial_state_notes"].strip(),
                assumptions=item["assumptions"].strip(),
            )
        )
    return tuple(entries)


def get_example(example_id: str) -> ExampleEntry | None:
    for entry in list_examples():
        if entry.id == example_id:
            return entry
    return None
