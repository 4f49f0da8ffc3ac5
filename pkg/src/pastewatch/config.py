"""Runtime settings merged from a key=value file, SENTINEL_-prefixed
environment variables, and command-line flags (flags > env > file >
defaults). Unknown keys are rejected so typos fail loudly."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import ConfigError

ENV_PREFIX = "SENTINEL_"


def _as_float(raw):
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"expected a number, got {raw!r}")


def _as_int(raw):
    try:
        return int(str(raw), 10)
    except (TypeError, ValueError):
        raise ConfigError(f"expected an integer, got {raw!r}")


def _as_str(raw):
    return str(raw)


#: key -> (parser, default)
SETTINGS = {
    "clone.threshold": (_as_float, 0.8),
    "sentinel.delayMs": (_as_int, 10_000),
    "sentinel.expiryMs": (_as_int, 30_000),
    "model.path": (_as_str, ""),
    "decision.threshold": (_as_float, 0.5),
}


def env_var_for(key: str) -> str:
    return ENV_PREFIX + key.upper().replace(".", "_")


@dataclass(frozen=True)
class Settings:
    clone_threshold: float
    delay_ms: int
    expiry_ms: int
    model_path: str
    decision_threshold: float

    @classmethod
    def from_mapping(cls, values: dict):
        return cls(clone_threshold=values["clone.threshold"],
                   delay_ms=values["sentinel.delayMs"],
                   expiry_ms=values["sentinel.expiryMs"],
                   model_path=values["model.path"],
                   decision_threshold=values["decision.threshold"])


def parse_config_file(path) -> dict:
    """Parse `key=value` lines; blank lines and # comments are ignored."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(
                    f"{path}:{lineno}: expected key=value, got {stripped!r}")
            key, _, raw = stripped.partition("=")
            key = key.strip()
            if key not in SETTINGS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = raw.strip()
    return values


def load_settings(config_path=None, environ=None, overrides=None) -> Settings:
    """Merge defaults <- config file <- environment <- explicit overrides
    (the flag layer). overrides maps setting keys to already-typed or raw
    values; None entries are ignored."""
    environ = os.environ if environ is None else environ
    merged = {key: default for key, (_, default) in SETTINGS.items()}
    layers = []
    if config_path is not None:
        layers.append(parse_config_file(config_path))
    env_layer = {}
    for key in SETTINGS:
        raw = environ.get(env_var_for(key))
        if raw is not None:
            env_layer[key] = raw
    layers.append(env_layer)
    if overrides:
        unknown = set(overrides) - set(SETTINGS)
        if unknown:
            raise ConfigError(f"unknown keys: {sorted(unknown)}")
        layers.append({k: v for k, v in overrides.items() if v is not None})
    for layer in layers:
        for key, raw in layer.items():
            parser, _ = SETTINGS[key]
            merged[key] = parser(raw)
    return Settings.from_mapping(merged)
