"""Target search-and-acquisition task: trials, dwell selection, metrics.

A trial plan is an ordered sequence of 15 circular targets (10 mm screen
diameter), five per distance class; each target sits at exactly
{0.125, 0.25, 0.5} x map-diagonal from its predecessor (the map center for
the first), in a seed-deterministic random direction that keeps it inside
the map. The session starts at maximum scale.

Selection requires the view to be at 1:1 scale (within a tiny epsilon) with
the target on the display, then a touch dwelling inside the target circle
for one second. A touch that instead dwells a full second outside the active
target counts one first-touch-miss per touch-down; a dwell completed on an
inactive target counts a wrong-target error. Dwell and clocks are counted in
whole ticks so replays are exact.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from hovernav.geometry import (DEFAULT_DISPLAY, DisplayConfig, MapConfig,
                               ViewportState, map_to_screen, min_scale,
                               on_display)
from hovernav.techniques import InputSample, Technique, TechniqueState

# scale must be within this of 1.0 for a target to be selectable; float
# equality on the clamped scale needs an epsilon, far below perceptible
SCALE_GATE_EPS = 1e-6

DISTANCE_CLASSES = ("small", "medium", "large")
CLASS_FRACTIONS = {"small": 0.125, "medium": 0.25, "large": 0.5}

TARGETS_PER_CLASS = 5
TARGET_SCREEN_RADIUS = 0.005  # 10 mm diameter, scale-independent

EVENT_SELECTED = "selected"
EVENT_FIRST_MISS = "first-miss"
EVENT_WRONG_TARGET = "wrong-target"
EVENT_FINISHED = "finished"


class PlanError(RuntimeError):
    """Raised when no valid target placement exists for a distance class."""


@dataclass(frozen=True, slots=True)
class TargetSpec:
    """One target: map position, distance class, order index."""

    position: tuple[float, float]
    distance_class: str
    index: int
    screen_radius: float = TARGET_SCREEN_RADIUS


@dataclass(frozen=True)
class TrialPlan:
    """Ordered target sequence for one session."""

    map: MapConfig
    seed: int
    targets: tuple[TargetSpec, ...]
    technique: str = ""

    def class_distance(self, distance_class: str) -> float:
        return CLASS_FRACTIONS[distance_class] * self.map.diagonal


@dataclass(frozen=True, slots=True)
class SessionEvent:
    """A trial event raised by one tick: selection or an error."""

    kind: str
    target: int


def generate_trial_plan(map_cfg: MapConfig, seed: int,
                        per_class: int = TARGETS_PER_CLASS,
                        screen_radius: float = TARGET_SCREEN_RADIUS,
                        max_tries: int = 10000) -> TrialPlan:
    """Build the seed-deterministic target sequence for a map.

    Class order is shuffled by the seed; each target is placed at exactly its
    class distance from the previous one, direction rejection-sampled until
    the position lies inside the map inset by the target radius (so the
    target fits on screen at 1:1 scale).

    Some class orders are geometrically impossible: the half-diagonal
    distance reaches the inset bounds from the map center only at the exact
    corners, so a plan whose first class is "large" cannot be placed. When a
    target cannot be placed, the whole plan is reshuffled (continuing the
    same seeded generator), which keeps generation deterministic.
    """
    rng = random.Random(seed)
    classes = [c for c in DISTANCE_CLASSES for _ in range(per_class)]

    inset = screen_radius  # map meters == screen meters at selection scale
    lim_x = map_cfg.width / 2 - inset
    lim_y = map_cfg.height / 2 - inset
    if lim_x <= 0 or lim_y <= 0:
        raise PlanError(f"map {map_cfg.name} smaller than a target")
    diagonal = map_cfg.diagonal

    for _attempt in range(100):
        rng.shuffle(classes)
        targets = _place_targets(rng, classes, diagonal, lim_x, lim_y,
                                 screen_radius, max_tries)
        if targets is not None:
            return TrialPlan(map=map_cfg, seed=seed, targets=tuple(targets))
    raise PlanError(
        f"no feasible plan on map {map_cfg.name} (classes {CLASS_FRACTIONS})")


def _place_targets(rng, classes, diagonal, lim_x, lim_y, screen_radius,
                   max_tries):
    targets = []
    x, y = 0.0, 0.0  # first distance measured from the start-view center
    for index, cls in enumerate(classes):
        d = CLASS_FRACTIONS[cls] * diagonal
        # unreachable: even the farthest corner of the inset box is closer
        if math.hypot(lim_x + abs(x), lim_y + abs(y)) < d:
            return None
        for _ in range(max_tries):
            theta = rng.uniform(0.0, math.tau)
            nx = x + d * math.cos(theta)
            ny = y + d * math.sin(theta)
            if -lim_x <= nx <= lim_x and -lim_y <= ny <= lim_y:
                break
        else:
            return None
        targets.append(TargetSpec((nx, ny), cls, index, screen_radius))
        x, y = nx, ny
    return targets


@dataclass
class _Contact:
    """Dwell bookkeeping for one touch contact, in whole ticks."""

    hold_ticks: int = 0
    in_ticks: int = 0        # consecutive ticks inside the active target
    out_ticks: int = 0       # consecutive ticks outside it while selectable
    miss_fired: bool = False
    wrong_ticks: dict[int, int] = field(default_factory=dict)
    wrong_fired: set[int] = field(default_factory=set)


class Session:
    """One run of the task: steps the technique, applies the trial rules.

    Strictly sequential; drive it with exactly one input sample per tick.
    """

    def __init__(self, plan: TrialPlan, technique: Technique,
                 tick_rate: float = 60.0, dwell_s: float = 1.0):
        if tick_rate <= 0:
            raise ValueError("tick_rate must be positive")
        self.plan = plan
        self.technique = technique
        self.map_cfg = technique.map_cfg
        self.display: DisplayConfig = technique.display
        self.tick_rate = tick_rate
        self.dt = 1.0 / tick_rate
        self.dwell_required_ticks = max(1, round(dwell_s * tick_rate))
        self.dwell_s = dwell_s
        self.scale_min = min_scale(self.map_cfg, self.display)

        self.state: TechniqueState = technique.initial_state()
        self.tick = 0
        self.active_index = 0
        self.per_target_ticks = 0
        self.first_miss_count = 0
        self.wrong_target_count = 0
        self.done = False
        self._contacts: dict[int, _Contact] = {}

    # -- views ------------------------------------------------------------

    @property
    def viewport(self) -> ViewportState:
        return self.state.viewport

    @property
    def time(self) -> float:
        return self.tick * self.dt

    @property
    def active_target(self) -> TargetSpec | None:
        if self.done:
            return None
        return self.plan.targets[self.active_index]

    @property
    def dwell_ticks(self) -> int:
        """Best current in-target dwell across live contacts."""
        if not self._contacts:
            return 0
        best = max(c.in_ticks for c in self._contacts.values())
        return min(best, self.dwell_required_ticks)

    @property
    def dwell_progress_s(self) -> float:
        return self.dwell_ticks * self.dt

    def target_screen(self, index: int) -> tuple[float, float]:
        return map_to_screen(self.plan.targets[index].position, self.viewport)

    def selectable(self) -> bool:
        """True when the active target could be selected this tick."""
        if self.done:
            return False
        if self.viewport.scale < 1.0 - SCALE_GATE_EPS:
            return False
        return on_display(self.target_screen(self.active_index), self.display)

    # -- stepping ---------------------------------------------------------

    def advance(self, sample: InputSample) -> list[SessionEvent]:
        """Apply one tick of input; returns the events it raised."""
        if self.done:
            return [SessionEvent(EVENT_FINISHED, -1)]

        self.state = self.technique.step(self.state, sample)
        self.tick += 1
        self.per_target_ticks += 1

        touches = sample.touches[:2]
        selectable = self.selectable()
        active = self.plan.targets[self.active_index]
        ax, ay = self.target_screen(self.active_index)
        r2 = active.screen_radius * active.screen_radius

        # update dwell timers per contact
        live = set()
        for t in touches:
            live.add(t.id)
            c = self._contacts.get(t.id)
            if c is None:
                c = self._contacts[t.id] = _Contact()
            c.hold_ticks += 1
            if not selectable:
                # off-scale or off-screen touches are gestures, not attempts
                c.in_ticks = 0
                c.out_ticks = 0
                c.wrong_ticks.clear()
                continue
            dx = t.x - ax
            dy = t.y - ay
            if dx * dx + dy * dy <= r2:
                c.in_ticks += 1
                c.out_ticks = 0
            else:
                c.in_ticks = 0
                c.out_ticks += 1
            for j, tgt in enumerate(self.plan.targets):
                if j == self.active_index:
                    continue
                sx, sy = self.target_screen(j)
                ddx = t.x - sx
                ddy = t.y - sy
                if (on_display((sx, sy), self.display)
                        and ddx * ddx + ddy * ddy
                        <= tgt.screen_radius * tgt.screen_radius):
                    c.wrong_ticks[j] = c.wrong_ticks.get(j, 0) + 1
                else:
                    c.wrong_ticks.pop(j, None)
        for tid in [tid for tid in self._contacts if tid not in live]:
            del self._contacts[tid]

        events: list[SessionEvent] = []
        req = self.dwell_required_ticks
        contacts = [self._contacts[t.id] for t in touches]

        if selectable and any(c.in_ticks >= req for c in contacts):
            events.append(SessionEvent(EVENT_SELECTED, self.active_index))
            self.active_index += 1
            self.per_target_ticks = 0
            for c in self._contacts.values():
                c.in_ticks = 0
                c.out_ticks = 0
                c.wrong_ticks.clear()
            if self.active_index >= len(self.plan.targets):
                self.done = True
        else:
            for c in contacts:
                if c.out_ticks >= req and not c.miss_fired:
                    # one miss per touch-down, however long it lingers
                    c.miss_fired = True
                    self.first_miss_count += 1
                    events.append(
                        SessionEvent(EVENT_FIRST_MISS, self.active_index))
                for j, ticks in list(c.wrong_ticks.items()):
                    if ticks >= req and j not in c.wrong_fired:
                        c.wrong_fired.add(j)
                        c.wrong_ticks[j] = 0
                        self.wrong_target_count += 1
                        events.append(SessionEvent(EVENT_WRONG_TARGET, j))
        return events


@dataclass(frozen=True)
class MetricsReport:
    """Dependent measures of one session.

    Times are seconds between consecutive selections (the first from session
    start). norm_scale is the time average of (scale - s_min) / (1 - s_min):
    0 means the whole map visible, 1 the maximum zoom. zoom_free counts
    targets acquired without the scale ever leaving 1:1 in their interval.
    """

    times: tuple[float, ...]
    classes: tuple[str, ...]
    per_target_first_miss: tuple[int, ...]
    per_target_wrong: tuple[int, ...]
    per_target_norm_scale: tuple[float, ...]
    per_target_zoom_free: tuple[bool, ...]
    first_miss: int
    wrong_target: int
    norm_scale_avg: float
    zoom_free_count: int
    total_time: float
    truncated: bool

    def class_stats(self) -> dict[str, tuple[float, float, int]]:
        """(mean, sd, n) of acquisition time per class plus 'all'."""
        groups: dict[str, list[float]] = {c: [] for c in DISTANCE_CLASSES}
        for t, c in zip(self.times, self.classes):
            groups[c].append(t)
        groups["all"] = list(self.times)
        return {k: (_mean(v), _sd(v), len(v)) for k, v in groups.items()}

    def to_json(self) -> dict:
        stats = self.class_stats()
        return {
            "times": list(self.times),
            "classes": list(self.classes),
            "per_target_first_miss": list(self.per_target_first_miss),
            "per_target_wrong": list(self.per_target_wrong),
            "per_target_norm_scale": list(self.per_target_norm_scale),
            "per_target_zoom_free": list(self.per_target_zoom_free),
            "first_miss": self.first_miss,
            "wrong_target": self.wrong_target,
            "norm_scale_avg": self.norm_scale_avg,
            "zoom_free_count": self.zoom_free_count,
            "total_time": self.total_time,
            "truncated": self.truncated,
            "class_stats": {k: {"mean": m, "sd": s, "n": n}
                            for k, (m, s, n) in stats.items()},
        }


def _mean(xs) -> float:
    return sum(xs) / len(xs) if xs else 0.0


def _sd(xs) -> float:
    # sample standard deviation; 0 for fewer than two points
    n = len(xs)
    if n < 2:
        return 0.0
    m = sum(xs) / n
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (n - 1))


def compute_metrics(log) -> MetricsReport:
    """Dependent measures from a recorded session (see logs.SessionLog).

    Tolerates truncated logs: whatever targets were selected are reported and
    the report is flagged truncated.
    """
    header = log.header
    smin = min_scale(header.map, header.display)
    classes_by_index = {t.index: t.distance_class for t in header.targets}

    times: list[float] = []
    classes: list[str] = []
    miss_per: list[int] = []
    wrong_per: list[int] = []
    norm_per: list[float] = []
    zoom_free_per: list[bool] = []

    norm_sum = 0.0
    interval_norm_sum = 0.0
    interval_ticks = 0
    interval_miss = 0
    interval_wrong = 0
    interval_zoom_free = True
    last_sel_time = 0.0
    n_ticks = 0

    for rec in log.records:
        n_ticks += 1
        norm = (rec.viewport.scale - smin) / (1.0 - smin)
        norm_sum += norm
        interval_norm_sum += norm
        interval_ticks += 1
        if rec.viewport.scale < 1.0 - SCALE_GATE_EPS:
            interval_zoom_free = False
        for ev in rec.events:
            if ev.kind == EVENT_FIRST_MISS:
                interval_miss += 1
            elif ev.kind == EVENT_WRONG_TARGET:
                interval_wrong += 1
            elif ev.kind == EVENT_SELECTED:
                times.append(rec.time - last_sel_time)
                last_sel_time = rec.time
                classes.append(classes_by_index.get(ev.target, "?"))
                miss_per.append(interval_miss)
                wrong_per.append(interval_wrong)
                norm_per.append(interval_norm_sum / interval_ticks)
                zoom_free_per.append(interval_zoom_free)
                interval_norm_sum = 0.0
                interval_ticks = 0
                interval_miss = 0
                interval_wrong = 0
                interval_zoom_free = True

    truncated = log.truncated or len(times) < len(header.targets)
    return MetricsReport(
        times=tuple(times),
        classes=tuple(classes),
        per_target_first_miss=tuple(miss_per),
        per_target_wrong=tuple(wrong_per),
        per_target_norm_scale=tuple(norm_per),
        per_target_zoom_free=tuple(zoom_free_per),
        first_miss=sum(miss_per) + interval_miss,
        wrong_target=sum(wrong_per) + interval_wrong,
        norm_scale_avg=(norm_sum / n_ticks) if n_ticks else 0.0,
        zoom_free_count=sum(zoom_free_per),
        total_time=log.records[-1].time if log.records else 0.0,
        truncated=truncated,
    )
