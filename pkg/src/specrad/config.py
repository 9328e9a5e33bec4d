"""Flat ``key = value`` config files for the experiment harness.

One assignment per line, ``#`` starts a comment, blank lines are ignored.
Values stay strings at parse time; the typed accessors below coerce on use so
that a bad value names the offending key.  Everything is validated before any
computation starts.
"""
from __future__ import annotations

from pathlib import Path

from .errors import ConfigurationError


def parse_config_text(text: str) -> dict:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise ConfigurationError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_config(path: str | Path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigurationError(f"config file not found: {p}")
    return parse_config_text(p.read_text(encoding="utf-8"))


def _get(cfg: dict, key: str, default):
    if key in cfg:
        return cfg[key]
    if default is _REQUIRED:
        raise ConfigurationError(f"missing required config key {key!r}")
    return default


_REQUIRED = object()


def cfg_str(cfg: dict, key: str, default=_REQUIRED) -> str:
    val = _get(cfg, key, default)
    return str(val)


def cfg_int(cfg: dict, key: str, default=_REQUIRED) -> int:
    val = _get(cfg, key, default)
    if isinstance(val, int):
        return val
    try:
        return int(str(val), 0)
    except ValueError as exc:
        raise ConfigurationError(f"config key {key!r}: not an integer: {val!r}") from exc


def cfg_float(cfg: dict, key: str, default=_REQUIRED) -> float:
    val = _get(cfg, key, default)
    if isinstance(val, (int, float)):
        return float(val)
    try:
        return float(str(val))
    except ValueError as exc:
        raise ConfigurationError(f"config key {key!r}: not a number: {val!r}") from exc


def cfg_complex(cfg: dict, key: str, default=_REQUIRED) -> complex:
    val = _get(cfg, key, default)
    if isinstance(val, (int, float, complex)):
        return complex(val)
    try:
        return complex(str(val).replace(" ", ""))
    except ValueError as exc:
        raise ConfigurationError(f"config key {key!r}: not a complex number: {val!r}") from exc


def cfg_bool(cfg: dict, key: str, default=_REQUIRED) -> bool:
    val = _get(cfg, key, default)
    if isinstance(val, bool):
        return val
    text = str(val).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"config key {key!r}: not a boolean: {val!r}")


def cfg_floats(cfg: dict, key: str, default=_REQUIRED) -> list:
    """Comma-separated list of numbers."""
    val = _get(cfg, key, default)
    if isinstance(val, (list, tuple)):
        return [float(v) for v in val]
    try:
        return [float(part) for part in str(val).split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"config key {key!r}: not a number list: {val!r}") from exc
