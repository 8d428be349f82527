"""Flat key = value configuration documents.

One assignment per line, ``#`` starts a comment.  Recognized keys: model,
coupling, rho1, rho2, rho3, epsilon, cells, t_end, cfl, delta, snapshots
(comma-separated times), output_dir, and preset (seeds densities and
coupling from a named preset; explicit keys win over seeded values).
"""

from __future__ import annotations

from .network import SimulationConfig
from .presets import get_preset

__all__ = ["ConfigError", "parse_config_text", "build_config", "parse_config"]


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


_STRING_KEYS = ("model", "coupling", "output_dir", "preset")
_FLOAT_KEYS = ("rho1", "rho2", "rho3", "epsilon", "t_end", "cfl", "delta")
_INT_KEYS = ("cells",)
_ALL_KEYS = _STRING_KEYS + _FLOAT_KEYS + _INT_KEYS + ("snapshots",)


def _parse_value(key: str, value: str, lineno: int):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
        if key == "snapshots":
            return tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"invalid value for {key}: {value!r}", lineno) from exc
    return value


def parse_config_text(text: str) -> dict:
    """Parse a config document into a key/value mapping."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in out:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        out[key] = _parse_value(key, value, lineno)
    return out


def build_config(mapping: dict) -> SimulationConfig:
    """Resolve a mapping (possibly containing 'preset') into a config."""
    mapping = dict(mapping)
    preset_name = mapping.pop("preset", None)
    if preset_name is not None:
        try:
            preset = get_preset(preset_name)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from exc
        model = mapping.get("model", "kinetic")
        seeded = {
            "rho1": preset.densities[0],
            "rho2": preset.densities[1],
            "rho3": preset.densities[2],
            "delta": preset.delta,
            "coupling": preset.kinetic_coupling
            if model == "kinetic"
            else preset.coupling,
        }
        mapping = {**seeded, **mapping}
    try:
        return SimulationConfig(**mapping)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(text: str) -> SimulationConfig:
    """Parse and validate a config document."""
    return build_config(parse_config_text(text))
