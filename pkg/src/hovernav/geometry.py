"""Coordinate frames, viewport state, and projection math.

Two frames, both y-up with the origin at the respective center:

* screen frame: meters on the physical display, x right, valid positions
  span [-width/2, +width/2] x [-height/2, +height/2];
* map frame: meters on the virtual map.

A viewport is a camera over the map: a center (map meters) and a scale
(screen meters per map meter). Scale 1 is the 1:1 maximum zoom; the minimum
scale shows the whole map inside the display. All operations are pure and
value-semantic.
"""

from __future__ import annotations

from dataclasses import dataclass

from hovernav import _kernels

ScreenPoint = tuple[float, float]
MapPoint = tuple[float, float]


@dataclass(frozen=True, slots=True)
class MapConfig:
    """Virtual map dimensions in meters."""

    width: float
    height: float
    name: str = "custom"

    def __post_init__(self):
        if not (self.width > 0.0 and self.height > 0.0):
            raise ValueError(f"map dimensions must be positive, got "
                             f"{self.width} x {self.height}")

    @property
    def diagonal(self) -> float:
        return (self.width * self.width + self.height * self.height) ** 0.5


@dataclass(frozen=True, slots=True)
class DisplayConfig:
    """Physical touch display dimensions in meters (default 105 mm x 60 mm)."""

    width: float = 0.105
    height: float = 0.060

    def __post_init__(self):
        if not (self.width > 0.0 and self.height > 0.0):
            raise ValueError(f"display dimensions must be positive, got "
                             f"{self.width} x {self.height}")

    @property
    def half_width(self) -> float:
        return self.width * 0.5

    @property
    def half_height(self) -> float:
        return self.height * 0.5


@dataclass(frozen=True, slots=True)
class ViewportState:
    """Camera over the map: center in map meters, scale in screen m per map m."""

    center: MapPoint = (0.0, 0.0)
    scale: float = 1.0


SMALL_MAP = MapConfig(1.45, 0.69, "small")
LARGE_MAP = MapConfig(144.71, 69.11, "large")
DEFAULT_DISPLAY = DisplayConfig()


def min_scale(map_cfg: MapConfig, display: DisplayConfig) -> float:
    """Smallest legal scale for this map/display pair (whole map visible)."""
    return _kernels.min_scale(map_cfg.width, map_cfg.height,
                              display.width, display.height)


def screen_to_map(p: ScreenPoint, v: ViewportState) -> MapPoint:
    """Map point currently under screen point `p`."""
    return (v.center[0] + p[0] / v.scale, v.center[1] + p[1] / v.scale)


def map_to_screen(m: MapPoint, v: ViewportState) -> ScreenPoint:
    """Screen position of map point `m` (may lie outside the display)."""
    return ((m[0] - v.center[0]) * v.scale, (m[1] - v.center[1]) * v.scale)


def zoom_about_pivot(v: ViewportState, pivot: ScreenPoint, new_scale: float,
                     map_cfg: MapConfig, display: DisplayConfig) -> ViewportState:
    """Change scale while keeping the map point under `pivot` fixed.

    The scale is clamped to [min_scale, 1] before applying and the result is
    passed through clamp_viewport, so the pivot guarantee holds only while no
    clamp engages.
    """
    cx, cy, s = _kernels.zoom_about_pivot(
        v.center[0], v.center[1], v.scale, pivot[0], pivot[1], new_scale,
        map_cfg.width, map_cfg.height, display.width, display.height)
    return ViewportState((cx, cy), s)


def clamp_viewport(v: ViewportState, map_cfg: MapConfig,
                   display: DisplayConfig) -> ViewportState:
    """Clamp scale into range and the visible rectangle inside the map."""
    cx, cy, s = _kernels.clamp_viewport(
        v.center[0], v.center[1], v.scale,
        map_cfg.width, map_cfg.height, display.width, display.height)
    return ViewportState((cx, cy), s)


def on_display(p: ScreenPoint, display: DisplayConfig) -> bool:
    """True if the screen point lies within the display extents."""
    return (-display.half_width <= p[0] <= display.half_width
            and -display.half_height <= p[1] <= display.half_height)


def clamp_to_display(p: ScreenPoint, display: DisplayConfig) -> ScreenPoint:
    """Nearest point on the display to `p`."""
    x, y = p
    hw, hh = display.half_width, display.half_height
    if x < -hw:
        x = -hw
    elif x > hw:
        x = hw
    if y < -hh:
        y = -hh
    elif y > hh:
        y = hh
    return (x, y)
