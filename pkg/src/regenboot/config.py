"""Experiment configuration: defaults, JSON loading, validation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from .bootstrap import STUDENTIZE_ORIGINAL, STUDENTIZE_RESAMPLED
from .errors import ConfigError
from .experiments import FUNCTIONALS
from .seeding import MAX_SEED

METHOD_CHOICES = ("rbb", "rgb", "both")

DEFAULT_N_LIST = [1000, 10000, 100000]


@dataclass
class ExperimentConfig:
    """All tunables of the experiment harness.

    Defaults are desk-scale; larger studies are reached by raising
    ``chains`` and ``boot_reps``.  ``n`` drives the single-horizon
    commands, ``n_list`` the coverage grid.
    """

    n: int = 10000
    n_list: list[int] = field(default_factory=lambda: list(DEFAULT_N_LIST))
    chains: int = 500
    boot_reps: int = 500
    level: float = 0.95
    beta: float = 0.5
    l_const: float = 1.0 / math.sqrt(2.0)
    master_seed: int = 12345
    workers: int = 1
    method: str = "both"
    f: str = "inv_square"
    max_moment: int = 2
    include_normal: bool = True
    studentize: str = STUDENTIZE_ORIGINAL
    figures: bool = True

    def validate(self) -> "ExperimentConfig":
        def fail(name, why):
            raise ConfigError(f"config field {name!r}: {why}")

        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            fail("n", f"must be a non-negative integer, got {self.n!r}")
        if (not isinstance(self.n_list, list) or not self.n_list
                or any(not isinstance(v, int) or isinstance(v, bool) or v < 1
                       for v in self.n_list)):
            fail("n_list", f"must be a non-empty list of positive integers, got {self.n_list!r}")
        for name in ("chains", "boot_reps", "workers"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                fail(name, f"must be a positive integer, got {v!r}")
        if not isinstance(self.level, (int, float)) or not 0.0 < self.level < 1.0:
            fail("level", f"must be in (0, 1), got {self.level!r}")
        if not isinstance(self.beta, (int, float)) or not 0.0 < self.beta < 1.0:
            fail("beta", f"must be in (0, 1), got {self.beta!r}")
        if not isinstance(self.l_const, (int, float)) or not self.l_const > 0.0:
            fail("l_const", f"must be positive, got {self.l_const!r}")
        if (not isinstance(self.master_seed, int) or isinstance(self.master_seed, bool)
                or not 0 <= self.master_seed < MAX_SEED):
            fail("master_seed", f"must be an integer in [0, 2**64), got {self.master_seed!r}")
        if self.method not in METHOD_CHOICES:
            fail("method", f"must be one of {METHOD_CHOICES}, got {self.method!r}")
        if self.f not in FUNCTIONALS:
            fail("f", f"unknown functional {self.f!r}; built-ins: {sorted(FUNCTIONALS)}")
        if (not isinstance(self.max_moment, int) or isinstance(self.max_moment, bool)
                or not 0 <= self.max_moment <= 4):
            fail("max_moment", f"must be an integer in 0..4, got {self.max_moment!r}")
        if not isinstance(self.include_normal, bool):
            fail("include_normal", f"must be a boolean, got {self.include_normal!r}")
        if not isinstance(self.figures, bool):
            fail("figures", f"must be a boolean, got {self.figures!r}")
        if self.studentize not in (STUDENTIZE_ORIGINAL, STUDENTIZE_RESAMPLED):
            fail("studentize", f"must be 'original' or 'resampled', got {self.studentize!r}")
        return self

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @property
    def methods(self) -> tuple[str, ...]:
        return ("rbb", "rgb") if self.method == "both" else (self.method,)


def config_from_dict(data: dict, source: str = "<dict>") -> ExperimentConfig:
    """Build and validate a config, rejecting unknown keys by name."""
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{source}: unknown config keys: {', '.join(unknown)}")
    if "level" in data and isinstance(data["level"], int) and not isinstance(data["level"], bool):
        data = {**data, "level": float(data["level"])}
    return ExperimentConfig(**data).validate()


def load_config(path) -> ExperimentConfig:
    """Load a JSON config file, filling defaults for absent keys."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    return config_from_dict(data, source=str(path))
