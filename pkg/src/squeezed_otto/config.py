"""JSON config files for the ``otto`` CLI.

A config is a flat JSON object. Its values sit between the built-in
defaults and the command-line flags: a flag given explicitly always wins.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .exceptions import DomainError

SEED_ENV = "OTTO_SEED"
DEFAULT_SEED = 42


class ConfigError(DomainError):
    pass


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config field {key!r}: expected a number, got {value!r}")
    return float(value)


def _integer(key, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"config field {key!r}: expected an integer, got {value!r}")
    return value


def _choice(*allowed):
    def check(key, value):
        value = str(value) if isinstance(value, int) and not isinstance(value, bool) else value
        if value not in allowed:
            raise ConfigError(f"config field {key!r}: expected one of {list(allowed)}, got {value!r}")
        return value
    return check


SCHEMA = {
    "tc": _number, "th": _number, "rc": _number, "rh": _number, "wc": _number, "wh": _number,
    "mode": _choice("engine", "fridge"),
    "figure": _choice("2", "3", "4", "5", "custom"),
    "tau_lo": _number, "tau_hi": _number, "steps": _integer,
    "r_max": _number, "grid_steps": _integer,
    "tol": _number, "samples": _integer, "seed": _integer, "jobs": _integer,
}

DEFAULTS = {
    "tc": 0.25, "th": 1.0, "rc": 0.0, "rh": 0.0, "wc": 1.0, "wh": 2.0,
    "mode": "engine", "figure": "3",
    "tau_lo": None, "tau_hi": None, "steps": None,
    "r_max": 1.5, "grid_steps": 50,
    "tol": 1e-10, "samples": 1_000_000, "seed": None, "jobs": 1,
}


def load_config(path) -> dict:
    """Read and validate a config file; returns only the keys it sets."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    out = {}
    for key, value in data.items():
        if key not in SCHEMA:
            raise ConfigError(f"config field {key!r}: unknown key")
        out[key] = SCHEMA[key](key, value)
    return out


def default_seed(environ=None) -> int:
    environ = os.environ if environ is None else environ
    raw = environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        seed = int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an unsigned 64-bit integer, got {raw!r}") from None
    return seed


def resolve(flags: dict, path=None, environ=None) -> dict:
    """Merge built-in defaults, the config file at ``path`` and explicit flags (non-None)."""
    merged = dict(DEFAULTS)
    if path is not None:
        merged.update(load_config(path))
    for key, value in flags.items():
        if value is not None or key not in merged:
            merged[key] = value
    if merged.get("seed") is None:
        merged["seed"] = default_seed(environ)
    return merged
