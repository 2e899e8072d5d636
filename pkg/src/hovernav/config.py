"""Named maps, parameter defaults, and the JSON config file.

The built-in defaults reproduce the studied setup: a 105 mm x 60 mm display,
the two study maps, zoom base speed 0.05 and plane base speed 0.001 per tick
at the 60 Hz reference rate, 5 cm maximum hover height, 1 s dwell. A config
file can override any of them; unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from pathlib import Path

from hovernav.geometry import (DEFAULT_DISPLAY, LARGE_MAP, SMALL_MAP,
                               DisplayConfig, MapConfig)


class ConfigurationError(ValueError):
    """Invalid descriptor, parameter set, or config file."""


_TOP_KEYS = {"display", "maps", "techniques", "harness", "agents"}
_TECH_KEYS = {"rate3d", "absolute3d", "baseline2d"}


class Config:
    """Resolved configuration: display, named maps, parameter overrides."""

    def __init__(self, raw: dict | None = None):
        raw = raw or {}
        unknown = set(raw) - _TOP_KEYS
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")

        disp = raw.get("display", {})
        self.display = DisplayConfig(
            width=float(disp.get("width", DEFAULT_DISPLAY.width)),
            height=float(disp.get("height", DEFAULT_DISPLAY.height)),
        )

        self.maps: dict[str, MapConfig] = {"small": SMALL_MAP, "large": LARGE_MAP}
        for name, dims in raw.get("maps", {}).items():
            self.maps[name] = MapConfig(float(dims["width"]),
                                        float(dims["height"]), name)

        techs = raw.get("techniques", {})
        unknown = set(techs) - _TECH_KEYS
        if unknown:
            raise ConfigurationError(f"unknown technique keys: {sorted(unknown)}")
        self.technique_params: dict[str, dict] = {k: dict(v)
                                                  for k, v in techs.items()}

        self.harness = dict(raw.get("harness", {}))
        self.agents = dict(raw.get("agents", {}))

    def map_config(self, name: str | MapConfig) -> MapConfig:
        if isinstance(name, MapConfig):
            return name
        try:
            return self.maps[name]
        except KeyError:
            raise ConfigurationError(
                f"unknown map {name!r}; known: {sorted(self.maps)}") from None

    def params_for(self, technique: str, overrides: dict | None = None) -> dict:
        merged = dict(self.technique_params.get(technique, {}))
        merged.update(overrides or {})
        return merged


DEFAULT_CONFIG = Config()


def load_config(path: str | Path | None) -> Config:
    if path is None:
        return DEFAULT_CONFIG
    with open(path) as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config {path}: {exc}") from exc
    return Config(raw)
