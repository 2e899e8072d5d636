"""The three navigation techniques as deterministic per-tick steppers.

Each technique maps (state, input sample) to a new state, once per fixed
simulation tick:

* ``rate3d`` — hover-height rate control: finger height above the display
  sets a per-tick zoom speed (upper half-volume zooms out, lower half zooms
  in, the midpoint is neutral), the finger's planar offset sets a pan
  velocity, and the finger is the zoom pivot. Touching the screen freezes
  the viewport so on-display input never fights the hover control.
* ``absolute3d`` — position control: finger height maps directly to the
  scale level, everything else as in rate3d.
* ``baseline2d`` — pinch to zoom / drag to pan with release inertia and the
  two-finger midpoint as zoom pivot. Finger height is ignored entirely.

Steppers are pure functions of (state, input, params); a session must apply
ticks sequentially but independent sessions can step in parallel.

Per-tick constants follow the 60 Hz reference rate and scale linearly with
the tick period for other rates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from hovernav import _kernels
from hovernav.config import ConfigurationError
from hovernav.geometry import (DEFAULT_DISPLAY, DisplayConfig, MapConfig,
                               ViewportState)

REFERENCE_TICK_RATE = 60.0

TECHNIQUE_KINDS = ("rate3d", "absolute3d", "baseline2d")


@dataclass(frozen=True, slots=True)
class Touch:
    """One touchscreen contact, position in screen meters."""

    id: int
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class InputSample:
    """One tick of user input: finger position/height plus touch contacts.

    `h` is the finger height above the display plane in meters (>= 0).
    At most two touches are interpreted; extras are ignored.
    """

    x: float = 0.0
    y: float = 0.0
    h: float = 0.0
    touches: tuple[Touch, ...] = ()
    tick_time: float = 0.0

    @property
    def touching(self) -> bool:
        return len(self.touches) > 0


@dataclass(frozen=True)
class RateParams:
    """Constants of the rate-controlled technique.

    zoom_base_speed is the per-tick scale-change fraction at full deflection;
    plane_base_speed converts finger offset (per millimeter) into display
    widths of screen travel per tick. Both follow the 60 Hz reference.
    """

    zoom_base_speed: float = 0.05
    plane_base_speed: float = 0.001
    h_max: float = 0.05
    h_min: float = 0.0
    dead_zone_half_width: float = 0.0
    tick_rate: float = 60.0

    def __post_init__(self):
        if not 0.0 < self.zoom_base_speed < 1.0:
            raise ConfigurationError("zoom_base_speed must be in (0, 1)")
        if not self.h_min < self.h_max:
            raise ConfigurationError("h_min must be below h_max")
        if self.dead_zone_half_width < 0.0:
            raise ConfigurationError("dead_zone_half_width must be >= 0")
        if self.tick_rate <= 0.0:
            raise ConfigurationError("tick_rate must be positive")

    @property
    def h_mid(self) -> float:
        return (self.h_min + self.h_max) * 0.5


@dataclass(frozen=True)
class AbsoluteParams:
    """Constants of the position-controlled variant.

    mapping "linear" interpolates the scale itself between 1 (finger on the
    display) and the minimum scale (finger at h_max); "log" interpolates in
    log-scale, which distributes zoom levels more evenly over height.
    Pan is handled exactly as in the rate technique, so the plane speed and
    tick rate appear here as well.
    """

    h_max: float = 0.05
    mapping: str = "linear"
    plane_base_speed: float = 0.001
    tick_rate: float = 60.0

    def __post_init__(self):
        if self.h_max <= 0.0:
            raise ConfigurationError("h_max must be positive")
        if self.mapping not in ("linear", "log"):
            raise ConfigurationError(f"unknown mapping {self.mapping!r}")
        if self.tick_rate <= 0.0:
            raise ConfigurationError("tick_rate must be positive")


@dataclass(frozen=True)
class BaselineParams:
    """Constants of the pinch/drag baseline.

    drag_gain 1.0 keeps dragged content locked to the finger. The fling
    decays with the given half-life and stops below fling_min_speed; the
    defaults approximate a familiar mobile-maps feel.
    """

    drag_gain: float = 1.0
    fling_friction_half_life: float = 0.3
    fling_min_speed: float = 0.005
    tick_rate: float = 60.0

    def __post_init__(self):
        if self.drag_gain <= 0.0:
            raise ConfigurationError("drag_gain must be positive")
        if self.fling_friction_half_life <= 0.0:
            raise ConfigurationError("fling_friction_half_life must be positive")
        if self.fling_min_speed < 0.0:
            raise ConfigurationError("fling_min_speed must be >= 0")
        if self.tick_rate <= 0.0:
            raise ConfigurationError("tick_rate must be positive")


@dataclass(frozen=True, slots=True)
class TechniqueState:
    """Viewport plus per-technique gesture memory.

    cursor_disc is the rendering hint for the 5 mm pivot disc: the finger's
    perpendicular projection for the hover techniques, the touch midpoint for
    the baseline. touch_mem holds (id, x, y) of last tick's interpreted
    touches; fling is the screen-space release velocity in m/s.
    """

    viewport: ViewportState = field(default_factory=ViewportState)
    cursor_disc: tuple[float, float] = (0.0, 0.0)
    touch_mem: tuple[tuple[int, float, float], ...] = ()
    fling: tuple[float, float] = (0.0, 0.0)


class Technique:
    """Common stepper interface: step(state, sample) -> state."""

    kind: str = ""

    def __init__(self, map_cfg: MapConfig, display: DisplayConfig, params):
        self.map_cfg = map_cfg
        self.display = display
        self.params = params
        self._dims = (map_cfg.width, map_cfg.height, display.width, display.height)

    def initial_state(self, viewport: ViewportState | None = None) -> TechniqueState:
        """Fresh state; defaults to the map center at maximum scale."""
        return TechniqueState(viewport=viewport or ViewportState())

    def neutral_input(self) -> InputSample:
        """The sample that leaves this technique's viewport unchanged."""
        raise NotImplementedError

    def step(self, state: TechniqueState, sample: InputSample) -> TechniqueState:
        raise NotImplementedError


class RateTechnique(Technique):
    kind = "rate3d"

    def __init__(self, map_cfg, display, params: RateParams | None = None):
        super().__init__(map_cfg, display, params or RateParams())
        p = self.params
        rate_factor = REFERENCE_TICK_RATE / p.tick_rate
        self._zoom_speed = p.zoom_base_speed * rate_factor
        # finger offset (m) -> screen meters of pan per tick:
        # mm offset x plane_base_speed = display widths per tick
        self._plane_gain = p.plane_base_speed * 1000.0 * display.width * rate_factor

    def neutral_input(self) -> InputSample:
        return InputSample(0.0, 0.0, self.params.h_mid)

    def step(self, state: TechniqueState, sample: InputSample) -> TechniqueState:
        p = self.params
        touching = len(sample.touches) > 0
        cx, cy, s = _kernels.step_rate(
            state.viewport.center[0], state.viewport.center[1],
            state.viewport.scale,
            sample.x, sample.y, sample.h, touching,
            self._zoom_speed, self._plane_gain,
            p.h_min, p.h_max, p.dead_zone_half_width, *self._dims)
        return TechniqueState(viewport=ViewportState((cx, cy), s),
                              cursor_disc=(sample.x, sample.y))


class AbsoluteTechnique(Technique):
    kind = "absolute3d"

    def __init__(self, map_cfg, display, params: AbsoluteParams | None = None):
        super().__init__(map_cfg, display, params or AbsoluteParams())
        p = self.params
        rate_factor = REFERENCE_TICK_RATE / p.tick_rate
        self._plane_gain = p.plane_base_speed * 1000.0 * display.width * rate_factor
        self._log_mapping = p.mapping == "log"

    def neutral_input(self) -> InputSample:
        # h = 0 maps to scale 1, the session start state
        return InputSample(0.0, 0.0, 0.0)

    def step(self, state: TechniqueState, sample: InputSample) -> TechniqueState:
        touching = len(sample.touches) > 0
        cx, cy, s = _kernels.step_absolute(
            state.viewport.center[0], state.viewport.center[1],
            state.viewport.scale,
            sample.x, sample.y, sample.h, touching,
            self._log_mapping, self.params.h_max, self._plane_gain,
            *self._dims)
        return TechniqueState(viewport=ViewportState((cx, cy), s),
                              cursor_disc=(sample.x, sample.y))


class BaselineTechnique(Technique):
    kind = "baseline2d"

    def __init__(self, map_cfg, display, params: BaselineParams | None = None):
        super().__init__(map_cfg, display, params or BaselineParams())
        p = self.params
        self._dt = 1.0 / p.tick_rate
        self._decay = 0.5 ** (self._dt / p.fling_friction_half_life)

    def neutral_input(self) -> InputSample:
        return InputSample()

    def step(self, state: TechniqueState, sample: InputSample) -> TechniqueState:
        touches = sorted(sample.touches[:2], key=lambda t: t.id)
        prev = {tid: (x, y) for tid, x, y in state.touch_mem}

        # zeros for unused point slots; the kernel reads only what the
        # gesture needs
        a = b = e = g = (0.0, 0.0)
        if not touches:
            gesture = _kernels.GESTURE_IDLE
        elif len(touches) == 1:
            t0 = touches[0]
            if t0.id in prev:
                gesture = _kernels.GESTURE_DRAG
                a = prev[t0.id]
                b = (t0.x, t0.y)
            else:
                gesture = _kernels.GESTURE_GRIP
        else:
            t0, t1 = touches
            if t0.id in prev and t1.id in prev:
                gesture = _kernels.GESTURE_PINCH
                a = prev[t0.id]
                b = prev[t1.id]
                e = (t0.x, t0.y)
                g = (t1.x, t1.y)
            else:
                gesture = _kernels.GESTURE_GRIP

        p = self.params
        cx, cy, s, fvx, fvy = _kernels.step_baseline(
            state.viewport.center[0], state.viewport.center[1],
            state.viewport.scale, gesture,
            a[0], a[1], b[0], b[1], e[0], e[1], g[0], g[1],
            state.fling[0], state.fling[1],
            p.drag_gain, self._decay, p.fling_min_speed, self._dt,
            *self._dims)

        if len(touches) == 2:
            disc = ((touches[0].x + touches[1].x) * 0.5,
                    (touches[0].y + touches[1].y) * 0.5)
        elif len(touches) == 1:
            disc = (touches[0].x, touches[0].y)
        else:
            disc = state.cursor_disc

        return TechniqueState(
            viewport=ViewportState((cx, cy), s),
            cursor_disc=disc,
            touch_mem=tuple((t.id, t.x, t.y) for t in touches),
            fling=(fvx, fvy))


_TECHNIQUES = {
    "rate3d": (RateTechnique, RateParams),
    "absolute3d": (AbsoluteTechnique, AbsoluteParams),
    "baseline2d": (BaselineTechnique, BaselineParams),
}


def make_params(kind: str, overrides: dict | None = None):
    """Parameter set for a technique kind from a dict of overrides."""
    try:
        _, params_cls = _TECHNIQUES[kind]
    except KeyError:
        raise ConfigurationError(
            f"unknown technique {kind!r}; known: {TECHNIQUE_KINDS}") from None
    overrides = overrides or {}
    valid = {f for f in params_cls.__dataclass_fields__}
    unknown = set(overrides) - valid
    if unknown:
        raise ConfigurationError(
            f"unknown {kind} parameters: {sorted(unknown)}")
    return params_cls(**overrides)


def make_technique(kind: str, map_cfg: MapConfig,
                   display: DisplayConfig = DEFAULT_DISPLAY,
                   params=None) -> Technique:
    """Construct a technique stepper by kind name."""
    try:
        tech_cls, params_cls = _TECHNIQUES[kind]
    except KeyError:
        raise ConfigurationError(
            f"unknown technique {kind!r}; known: {TECHNIQUE_KINDS}") from None
    if params is None:
        params = params_cls()
    elif isinstance(params, dict):
        params = make_params(kind, params)
    elif not isinstance(params, params_cls):
        raise ConfigurationError(
            f"{kind} expects {params_cls.__name__}, got {type(params).__name__}")
    return tech_cls(map_cfg, display, params)
