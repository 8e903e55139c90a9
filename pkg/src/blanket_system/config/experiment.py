"""
Experiment configuration for benchmark sweeps.

Files are flat YAML mappings whose keys mirror the CLI flags, e.g.

    experiment: samples
    algorithms: [proposed-f, bahsic]
    grid: [50, 100, 200, 350, 500]
    trials: 30
    kernel: linear

or the same keys as `key=value` lines:

    experiment=samples
    algorithms=proposed-f,bahsic
    trials=30

CLI flags override file values.
"""

import re
from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator

from blanket_system.config.config import CONFIG
from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.synthetic.synthetic_bench import EXPERIMENTS


ALGORITHMS = ("proposed-f", "proposed-z", "bahsic", "iamb", "forward-f", "forward-z")

Algorithm = Literal["proposed-f", "proposed-z", "bahsic", "iamb", "forward-f", "forward-z"]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    experiment: str
    algorithms: list[Algorithm] = Field(min_length=1)
    grid: list[float] = Field(default_factory=list)
    trials: int = Field(default=CONFIG["bench"]["trials"], ge=1)
    seed: int = Field(default=CONFIG["synthetic"]["seed"], ge=0)
    out: Path = Path(CONFIG["paths"]["results_dir"])

    kernel: Literal["linear", "gaussian"] = CONFIG["kernel"]["family"]
    sigma: float | None = Field(default=None, gt=0)
    epsilon: float = Field(default=CONFIG["kernel"]["epsilon"], gt=0)
    beta: float = Field(default=CONFIG["elimination"]["beta"], ge=0, lt=1)
    alpha: float = Field(default=CONFIG["iamb"]["alpha"], gt=0, lt=1)

    # base synthetic network; sweeps override one knob per grid point
    samples: int = Field(default=CONFIG["synthetic"]["n_samples"], ge=2)
    noise: float = Field(default=CONFIG["synthetic"]["noise_sd"], ge=0)
    extraneous: int = Field(default=CONFIG["synthetic"]["n_extraneous"], ge=0)
    edges: int = Field(default=CONFIG["synthetic"]["extra_edges"], ge=0)
    weight: float = CONFIG["synthetic"]["mb_weight"]
    spouses: Literal["one", "both"] = "one"
    fixed_samples: int | None = Field(default=CONFIG["synthetic"]["fixed_sample_size"], ge=2)

    n_jobs: int = CONFIG["bench"]["n_jobs"]
    standardize: bool = CONFIG["bench"]["standardize"]

    @field_validator("experiment")
    @classmethod
    def _known_experiment(cls, value: str) -> str:
        if value not in EXPERIMENTS:
            raise ValueError(f"unknown experiment '{value}', expected one of {EXPERIMENTS}")
        return value

    @field_validator("algorithms", mode="before")
    @classmethod
    def _split_algorithms(cls, value):
        if isinstance(value, str):
            return [a.strip() for a in value.split(",") if a.strip()]
        return value

    @field_validator("grid", mode="before")
    @classmethod
    def _split_grid(cls, value):
        if isinstance(value, str):
            return [float(v) for v in value.split(",") if v.strip()]
        return value

    def resolved_grid(self) -> list[float]:
        return self.grid or [float(v) for v in CONFIG["bench"]["grids"][self.experiment]]


KEY_VALUE_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_-]*)\s*=(.*)$")


def _parse_key_values(text: str, path: Path) -> dict:
    """
    Parse `key=value` lines. Values are read as YAML scalars or flow
    lists so `trials=30` gives an int and `grid=[50, 100]` a list.
    """

    values = {}

    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue

        match = KEY_VALUE_LINE.match(line)
        if match is None:
            raise BlanketError(ErrorCode.BAD_CONFIG, f"{path}: line {number}: expected key=value")

        key, raw = match.group(1), match.group(2).strip()
        try:
            values[key] = yaml.safe_load(raw) if raw else None
        except yaml.YAMLError as e:
            raise BlanketError(ErrorCode.BAD_CONFIG, f"{path}: line {number}: {e}") from e

    return values


def _is_key_value_text(text: str) -> bool:
    # decided by the first meaningful line
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            return KEY_VALUE_LINE.match(line) is not None
    return False


def load_experiment_config(path: Path | None, overrides: dict) -> ExperimentConfig:
    """
    Merge an experiment file with CLI overrides (None values are
    ignored) and validate the result. The file is either a flat YAML
    mapping or `key=value` lines.
    """

    values: dict = {}

    if path is not None:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Experiment config not found: {path}")

        text = path.read_text()

        if _is_key_value_text(text):
            loaded = _parse_key_values(text, path)
        else:
            try:
                loaded = yaml.safe_load(text) or {}
            except yaml.YAMLError as e:
                raise BlanketError(ErrorCode.BAD_CONFIG, f"{path}: {e}") from e

        if not isinstance(loaded, dict):
            raise BlanketError(ErrorCode.BAD_CONFIG, f"{path}: expected a flat mapping or key=value lines")

        values.update({k.replace("-", "_"): v for k, v in loaded.items()})

    values.update({k: v for k, v in overrides.items() if v is not None})

    return ExperimentConfig.model_validate(values)
