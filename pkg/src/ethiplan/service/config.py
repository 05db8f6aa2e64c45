"""Service configuration: defaults <- config file <- environment."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from ..errors import ValidationError


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    storage_dir: str = "./sessions"
    provider: str = "mock"  # "mock" | "http"
    provider_base_url: str = ""
    provider_timeout: float = 120.0
    default_model: str = "mock-ethicist-v1"
    weights_scale: int = 10
    weights_base: int = 100
    node_cap: int = 5_000_000
    time_cap: float = 60.0
    variant_cap: int = 256
    ground_cap: int = 200_000
    external_planner: str = ""  # executable path; empty = internal solver
    external_planner_args: str = "{domain} {problem} --plan-file {plan}"
    external_planner_timeout: float = 120.0
    ui_dir: str = ""

    def __post_init__(self):
        if self.provider not in ("mock", "http"):
            raise ValidationError(f"unknown provider kind '{self.provider}'")
        if self.provider == "http" and not self.provider_base_url:
            raise ValidationError("http provider needs provider_base_url")


_ENV_FIELDS = {
    "ETHIPLAN_HOST": ("host", str),
    "ETHIPLAN_PORT": ("port", int),
    "ETHIPLAN_STORAGE_DIR": ("storage_dir", str),
    "ETHIPLAN_PROVIDER": ("provider", str),
    "ETHIPLAN_PROVIDER_BASE_URL": ("provider_base_url", str),
    "ETHIPLAN_PROVIDER_TIMEOUT": ("provider_timeout", float),
    "ETHIPLAN_DEFAULT_MODEL": ("default_model", str),
    "ETHIPLAN_WEIGHTS_SCALE": ("weights_scale", int),
    "ETHIPLAN_WEIGHTS_BASE": ("weights_base", int),
    "ETHIPLAN_NODE_CAP": ("node_cap", int),
    "ETHIPLAN_TIME_CAP": ("time_cap", float),
    "ETHIPLAN_VARIANT_CAP": ("variant_cap", int),
    "ETHIPLAN_GROUND_CAP": ("ground_cap", int),
    "ETHIPLAN_EXTERNAL_PLANNER": ("external_planner", str),
    "ETHIPLAN_EXTERNAL_PLANNER_ARGS": ("external_planner_args", str),
    "ETHIPLAN_EXTERNAL_PLANNER_TIMEOUT": ("external_planner_timeout", float),
    "ETHIPLAN_UI_DIR": ("ui_dir", str),
}


def load_config(path: str | os.PathLike | None = None) -> ServiceConfig:
    values: dict = {}
    if path:
        raw = yaml.safe_load(Path(path).read_text()) or {}
        if not isinstance(raw, dict):
            raise ValidationError("config file must hold a mapping")
        unknown = set(raw) - {f for f in ServiceConfig.__dataclass_fields__}
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        values.update(raw)
    for env, (name, cast) in _ENV_FIELDS.items():
        if env in os.environ:
            values[name] = cast(os.environ[env])
    return ServiceConfig(**values)
