"""Deterministic engine, task harness, agents, and live service for
hover-height multiscale map navigation on a smartphone-sized display."""

__version__ = "0.1.0"

from hovernav.geometry import (DEFAULT_DISPLAY, LARGE_MAP, SMALL_MAP,
                               DisplayConfig, MapConfig, ViewportState,
                               clamp_viewport, map_to_screen, min_scale,
                               screen_to_map, zoom_about_pivot)
from hovernav.techniques import (AbsoluteParams, BaselineParams, InputSample,
                                 RateParams, TechniqueState, Touch,
                                 make_technique)

__all__ = [
    "__version__",
    "DEFAULT_DISPLAY", "LARGE_MAP", "SMALL_MAP",
    "DisplayConfig", "MapConfig", "ViewportState",
    "clamp_viewport", "map_to_screen", "min_scale", "screen_to_map",
    "zoom_about_pivot",
    "AbsoluteParams", "BaselineParams", "InputSample", "RateParams",
    "TechniqueState", "Touch", "make_technique",
]
