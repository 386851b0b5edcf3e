"""Run configuration: ``key=value`` files with hard validation.

Unknown keys and duplicate keys are errors, never warnings; a run must not
silently ignore a typo. ``dump_config`` emits the canonical text form, and
reloading a dump reproduces the same configuration.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .energy_engine import PotentialModel
from .errors import ConfigError

CONFIG_ENV_VAR = "FIELD_MARKET_CONFIG"

OUTPUT_FORMATS = ("csv", "json")

# Canonical key order for dumps. Maps config-file key -> dataclass attribute.
_KEY_TO_ATTR = {
    "k_b": "k_b",
    "distance_floor": "distance_floor",
    "mass": "mass",
    "dt": "dt",
    "reference_rule": "reference_rule",
    "tick": "tick",
    "R": "r_force",
    "format": "fmt",
    "initial_price": "initial_price",
    "assets": "assets",
    "points": "points",
    "path": "path",
    "bars": "bars",
    "book": "book",
    "scenario": "scenario",
}
_ATTR_TO_KEY = {attr: key for key, attr in _KEY_TO_ATTR.items()}

_FLOAT_KEYS = {"k_b", "distance_floor", "mass", "dt", "tick", "R", "initial_price"}
_POSITIVE_KEYS = {"k_b", "distance_floor", "mass", "dt", "tick", "initial_price"}
_PATH_KEYS = {"assets", "points", "path", "bars", "book", "scenario"}


@dataclass
class RunConfig:
    """Effective run parameters after defaults, config file, and CLI flags."""

    k_b: float = 1.0
    distance_floor: float = 1e-6
    mass: float = 1.0
    dt: float = 1.0
    reference_rule: str = "rolling_min:20"
    tick: float = 1.0
    r_force: float = 1.0
    fmt: str = "csv"
    initial_price: float | None = None
    assets: str | None = None
    points: str | None = None
    path: str | None = None
    bars: str | None = None
    book: str | None = None
    scenario: str | None = None
    # Accepted and recorded for future stochastic extensions; currently unused.
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        for key in _FLOAT_KEYS:
            value = getattr(self, _KEY_TO_ATTR[key])
            if value is None:
                continue
            if not math.isfinite(value):
                raise ConfigError(f"{key} must be finite, got {value}")
            if key in _POSITIVE_KEYS and value <= 0:
                raise ConfigError(f"{key} must be > 0, got {value}")
            if key == "R" and value < 0:
                raise ConfigError(f"R must be >= 0, got {value}")
        if self.fmt not in OUTPUT_FORMATS:
            raise ConfigError(f"format must be one of {OUTPUT_FORMATS}, got {self.fmt!r}")
        # Delegates rule-syntax validation; raises DomainError on bad syntax.
        try:
            PotentialModel.from_rule(self.reference_rule, mass=self.mass)
        except Exception as exc:
            raise ConfigError(f"reference_rule: {exc}") from None

    def potential_model(self) -> PotentialModel:
        return PotentialModel.from_rule(self.reference_rule, mass=self.mass)


def _parse_value(key: str, raw: str):
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"value for {key} must be a number, got {raw!r}") from None
    return raw


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    """Parse ``key=value`` lines; ``#`` starts a comment, blank lines are skipped."""
    overrides: dict[str, object] = {}
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, raw = stripped.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {stripped!r}")
        key = key.strip()
        raw = raw.strip()
        if key not in _KEY_TO_ATTR:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        overrides[_KEY_TO_ATTR[key]] = _parse_value(key, raw)
    return RunConfig(**overrides)


def load_config(path: str | Path) -> RunConfig:
    """Load a config file; unreadable files surface as ConfigError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, source=str(path))


def load_default_config() -> RunConfig:
    """Config from $FIELD_MARKET_CONFIG when set, else built-in defaults."""
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        return load_config(env_path)
    return RunConfig()


def _render_value(key: str, value) -> str:
    if key in _FLOAT_KEYS:
        return f"{value:.12g}"
    return str(value)


def dump_config(config: RunConfig) -> str:
    """Canonical text form; reloading the dump reproduces the config."""
    lines = []
    for key, attr in _KEY_TO_ATTR.items():
        value = getattr(config, attr)
        if value is None:
            continue
        lines.append(f"{key}={_render_value(key, value)}")
    return "\n".join(lines) + "\n"


def config_field_names() -> tuple[str, ...]:
    return tuple(f.name for f in fields(RunConfig))
