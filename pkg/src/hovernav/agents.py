"""Scripted agents that complete trials autonomously for each technique.

The agents know each target's map position (visual search is not modeled),
so their times measure navigation mechanics only, not search. All randomness
(touch-point jitter, drawn per touch-down or per gesture stroke) comes from a
seeded generator, making every trajectory reproducible.

greedy3d drives the hover technique: it keeps the finger over the target's
screen position (clamped to the display), which simultaneously pans toward
the target and keeps the zoom pivot on it, holds maximum height while the
target is off-display (zoom out), minimum height once it is visible (zoom
in), and dwells on it at 1:1 scale. Pinning the pivot to the target keeps it
on the display throughout the zoom-in.

absolute3d does the same with height slewed gradually, since height IS the
scale under position control.

greedy2d drives the pinch/drag baseline with discrete strokes at a fixed
cadence: pinch strokes between 20 and 60 mm separation (3x scale per
stroke), 40 mm drag strokes toward the best reachable viewport center, each
stroke ending with a brief hold so it never flings, then a re-grip gap.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from hovernav.config import ConfigurationError
from hovernav.geometry import clamp_to_display, map_to_screen, on_display
from hovernav.harness import Session
from hovernav.techniques import InputSample, Touch

AGENT_KINDS = ("greedy3d", "greedy2d", "absolute3d")

# default agent policy per technique kind
AGENT_FOR_TECHNIQUE = {
    "rate3d": "greedy3d",
    "absolute3d": "absolute3d",
    "baseline2d": "greedy2d",
}
TECHNIQUE_FOR_AGENT = {v: k for k, v in AGENT_FOR_TECHNIQUE.items()}


@dataclass(frozen=True)
class AgentConfig:
    """Agent behavior constants.

    The stroke fields apply to the baseline agent only: stroke cadence in
    strokes per second, drag travel per stroke, and the pinch separation
    range (whose ratio fixes the per-stroke zoom factor).
    """

    reaction_delay_s: float = 0.2
    pointing_jitter_sd: float = 0.001
    strokes_per_second: float = 3.0
    stroke_travel: float = 0.040
    pinch_sep_min: float = 0.020
    pinch_sep_max: float = 0.060

    def __post_init__(self):
        if self.reaction_delay_s < 0:
            raise ConfigurationError("reaction_delay_s must be >= 0")
        if self.pointing_jitter_sd < 0:
            raise ConfigurationError("pointing_jitter_sd must be >= 0")
        if self.strokes_per_second <= 0:
            raise ConfigurationError("strokes_per_second must be positive")
        if not 0 < self.pinch_sep_min < self.pinch_sep_max:
            raise ConfigurationError("need 0 < pinch_sep_min < pinch_sep_max")


def _clamp_span(start: float, delta: float, half_extent: float) -> float:
    """Clamp a stroke's start so [start, start+delta] stays within bounds."""
    lo = -half_extent - min(0.0, delta)
    hi = half_extent - max(0.0, delta)
    return min(max(start, lo), hi)


def pinch_stroke_samples(mid: tuple[float, float], sep0: float, sep1: float,
                         move: int, hold: int, gap: int) -> list[InputSample]:
    """One pinch gesture: two touches straddling `mid` horizontally, their
    separation moving linearly sep0 -> sep1, held briefly, then lifted."""
    samples = []
    for i in range(move + hold):
        frac = min(1.0, i / move)
        sep = sep0 + (sep1 - sep0) * frac
        samples.append(InputSample(
            mid[0], mid[1], 0.0,
            touches=(Touch(0, mid[0] - sep / 2, mid[1]),
                     Touch(1, mid[0] + sep / 2, mid[1]))))
    samples.extend(InputSample() for _ in range(gap))
    return samples


def drag_stroke_samples(start: tuple[float, float], delta: tuple[float, float],
                        move: int, hold: int, gap: int) -> list[InputSample]:
    """One drag gesture from `start` through `delta`, ending with a short
    stationary hold so the release never flings."""
    samples = []
    for i in range(move + hold):
        frac = min(1.0, i / move)
        x = start[0] + delta[0] * frac
        y = start[1] + delta[1] * frac
        samples.append(InputSample(x, y, 0.0, touches=(Touch(0, x, y),)))
    samples.extend(InputSample() for _ in range(gap))
    return samples


class Agent:
    """Base policy: session view -> one InputSample per tick."""

    kind: str = ""
    technique_kind: str = ""

    def __init__(self, config: AgentConfig | None = None, seed: int = 0):
        self.config = config or AgentConfig()
        self.seed = seed
        self._rng = random.Random(seed)
        self._last_active = -1
        self._delay_left = 0
        self._touch_point: tuple[float, float] | None = None
        self._touch_ticks = 0
        self._lift_left = 0

    def describe(self) -> dict:
        return {"kind": self.kind, "seed": self.seed,
                "reaction_delay_s": self.config.reaction_delay_s,
                "pointing_jitter_sd": self.config.pointing_jitter_sd}

    def __call__(self, session: Session) -> InputSample:
        if session.done:
            return session.technique.neutral_input()
        if session.active_index != self._last_active:
            # a fresh target: react after a human-ish pause
            self._last_active = session.active_index
            self._delay_left = round(self.config.reaction_delay_s
                                     * session.tick_rate)
            self._touch_point = None
            self._touch_ticks = 0
            self._lift_left = 0
            self._on_new_target(session)
        if self._delay_left > 0:
            self._delay_left -= 1
            return self._idle_sample(session)
        return self._act(session)

    # hooks -----------------------------------------------------------------

    def _on_new_target(self, session: Session) -> None:
        pass

    def _idle_sample(self, session: Session) -> InputSample:
        return session.technique.neutral_input()

    def _act(self, session: Session) -> InputSample:
        raise NotImplementedError

    # shared dwell helper ----------------------------------------------------

    def _jitter(self) -> tuple[float, float]:
        sd = self.config.pointing_jitter_sd
        return (self._rng.gauss(0.0, sd), self._rng.gauss(0.0, sd))

    def _dwell_sample(self, session: Session, h: float) -> InputSample:
        """Touch the active target and hold; lift and retry after a miss."""
        if self._lift_left > 0:
            self._lift_left -= 1
            self._touch_point = None
            self._touch_ticks = 0
            return InputSample(0.0, 0.0, h)
        if self._touch_point is None:
            tx, ty = session.target_screen(session.active_index)
            jx, jy = self._jitter()
            self._touch_point = clamp_to_display((tx + jx, ty + jy),
                                                 session.display)
            self._touch_ticks = 0
        self._touch_ticks += 1
        if self._touch_ticks > session.dwell_required_ticks + 4:
            # the dwell should have completed by now; re-touch with a fresh
            # draw rather than dwelling outside the target forever
            self._lift_left = 2
        x, y = self._touch_point
        return InputSample(x, y, h, touches=(Touch(0, x, y),))


class GreedyHoverAgent(Agent):
    """Completes trials under the rate-controlled hover technique."""

    kind = "greedy3d"
    technique_kind = "rate3d"

    def _act(self, session: Session) -> InputSample:
        p = session.technique.params
        t = session.target_screen(session.active_index)
        if session.selectable():
            return self._dwell_sample(session, p.h_min)
        self._touch_point = None
        finger = clamp_to_display(t, session.display)
        if not on_display(t, session.display):
            h = p.h_max          # zoom out while panning toward the target
        elif session.viewport.scale < 1.0:
            h = p.h_min          # pivot sits on the target: zoom in at full rate
        else:
            h = p.h_mid
        return InputSample(finger[0], finger[1], h)


class GreedyAbsoluteAgent(Agent):
    """Hover agent for the position-controlled variant: height is slewed
    because it maps directly to scale."""

    kind = "absolute3d"
    technique_kind = "absolute3d"

    SLEW_SECONDS = 0.5  # full height sweep duration

    def __init__(self, config=None, seed=0):
        super().__init__(config, seed)
        self._h = 0.0

    def _idle_sample(self, session: Session) -> InputSample:
        # holding the current height keeps the scale steady during the pause
        return InputSample(0.0, 0.0, self._h)

    def _act(self, session: Session) -> InputSample:
        p = session.technique.params
        slew = p.h_max / (self.SLEW_SECONDS * session.tick_rate)
        t = session.target_screen(session.active_index)
        if session.selectable() and self._h == 0.0:
            return self._dwell_sample(session, 0.0)
        self._touch_point = None
        finger = clamp_to_display(t, session.display)
        if not on_display(t, session.display):
            self._h = min(p.h_max, self._h + slew)
        elif session.viewport.scale < 1.0 or self._h > 0.0:
            self._h = max(0.0, self._h - slew)
        return InputSample(finger[0], finger[1], self._h)


class GreedyPinchAgent(Agent):
    """Completes trials under the pinch/drag baseline via discrete strokes."""

    kind = "greedy2d"
    technique_kind = "baseline2d"

    # strokes start when the view is farther than this many screen meters
    # from the target with zoom-out cycles instead of drags
    FAR_SCREEN = 0.24
    SETTLE_SCREEN = 0.003

    def __init__(self, config=None, seed=0):
        super().__init__(config, seed)
        self._queue: list[InputSample] = []

    def _on_new_target(self, session: Session) -> None:
        self._queue.clear()

    def _stroke_ticks(self, session: Session) -> tuple[int, int, int]:
        total = max(6, round(session.tick_rate / self.config.strokes_per_second))
        gap = min(4, total - 4)
        hold = min(2, total - gap - 2)
        move = total - gap - hold
        return move, hold, gap

    def _goal_center(self, session: Session) -> tuple[float, float]:
        """Best viewport center for the target at the current scale."""
        s = session.viewport.scale
        mx, my = session.active_target.position
        lim_x = max(0.0, (session.map_cfg.width - session.display.width / s) / 2)
        lim_y = max(0.0, (session.map_cfg.height - session.display.height / s) / 2)
        return (min(max(mx, -lim_x), lim_x), min(max(my, -lim_y), lim_y))

    def _act(self, session: Session) -> InputSample:
        if not self._queue:
            self._plan(session)
        return self._queue.pop(0)

    def _plan(self, session: Session) -> None:
        cfg = self.config
        if session.selectable():
            self._plan_dwell(session)
            return
        v = session.viewport
        s = v.scale
        mx, my = session.active_target.position
        dist_screen = math.dist((mx, my), v.center) * s
        gx, gy = self._goal_center(session)
        ex = (gx - v.center[0]) * s
        ey = (gy - v.center[1]) * s
        err = math.hypot(ex, ey)
        if dist_screen > self.FAR_SCREEN and s > session.scale_min * (1 + 1e-9):
            self._plan_pinch(session, cfg.pinch_sep_max, cfg.pinch_sep_min,
                             (0.0, 0.0))
        elif err > self.SETTLE_SCREEN:
            self._plan_drag(session, (ex, ey))
        elif s < 1.0 - 1e-9:
            pivot = self._pinch_pivot(session)
            self._plan_pinch(session, cfg.pinch_sep_min, cfg.pinch_sep_max,
                             pivot)
        else:
            # settled at full scale: the next plan call will see selectable
            self._queue.append(InputSample())

    def _pinch_pivot(self, session: Session) -> tuple[float, float]:
        # pivot on the target where possible; both touches must stay on the
        # display, so the pivot is confined to an inner box
        tx, ty = session.target_screen(session.active_index)
        return self._clamp_pinch_mid((tx, ty), session)

    def _clamp_pinch_mid(self, mid, session: Session) -> tuple[float, float]:
        lim_x = session.display.half_width - self.config.pinch_sep_max / 2 - 0.001
        lim_y = session.display.half_height - 0.002
        return (min(max(mid[0], -lim_x), lim_x),
                min(max(mid[1], -lim_y), lim_y))

    def _plan_pinch(self, session: Session, sep0: float, sep1: float,
                    mid: tuple[float, float]) -> None:
        move, hold, gap = self._stroke_ticks(session)
        jx, jy = self._jitter()
        # re-clamp after jitter: the full stroke must stay on the display
        mid = self._clamp_pinch_mid((mid[0] + jx, mid[1] + jy), session)
        self._queue.extend(pinch_stroke_samples(mid, sep0, sep1,
                                                move, hold, gap))

    def _plan_drag(self, session: Session, err_screen: tuple[float, float]) -> None:
        # dragging content by -d pans the view by +d/scale; center the path
        # on the display so the whole stroke stays in bounds
        move, hold, gap = self._stroke_ticks(session)
        ex, ey = err_screen
        norm = math.hypot(ex, ey)
        travel = min(self.config.stroke_travel, norm)
        dx = -ex / norm * travel
        dy = -ey / norm * travel
        jx, jy = self._jitter()
        sx = _clamp_span(-dx / 2 + jx, dx, session.display.half_width)
        sy = _clamp_span(-dy / 2 + jy, dy, session.display.half_height)
        self._queue.extend(drag_stroke_samples((sx, sy), (dx, dy),
                                               move, hold, gap))

    def _plan_dwell(self, session: Session) -> None:
        tx, ty = session.target_screen(session.active_index)
        jx, jy = self._jitter()
        x, y = clamp_to_display((tx + jx, ty + jy), session.display)
        for _ in range(session.dwell_required_ticks + 4):
            self._queue.append(InputSample(
                x, y, 0.0, touches=(Touch(0, x, y),)))
        self._queue.append(InputSample())
        self._queue.append(InputSample())


_AGENTS = {
    "greedy3d": GreedyHoverAgent,
    "greedy2d": GreedyPinchAgent,
    "absolute3d": GreedyAbsoluteAgent,
}


def make_agent(kind: str, config: AgentConfig | None = None,
               seed: int = 0) -> Agent:
    try:
        cls = _AGENTS[kind]
    except KeyError:
        raise ConfigurationError(
            f"unknown agent {kind!r}; known: {AGENT_KINDS}") from None
    return cls(config, seed)
