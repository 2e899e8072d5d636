"""Session lifecycle: build, run, and replay sessions offline.

A descriptor names everything a session needs (technique, map, seed, tick
rate, parameter overrides); building it is deterministic, so a log header
alone reconstructs the exact engine that wrote the log. The engine advances
at a fixed tick rate; when driven by a finite input stream the last sample
is held (zero-order hold) until the session completes or the watchdog
expires.

Replay re-executes a log's recorded inputs through a fresh engine and
verifies the recorded viewports and events tick by tick; any divergence
means a nondeterminism bug (or a tampered log) and is reported with the
first divergent tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable

from hovernav.config import Config, ConfigurationError, DEFAULT_CONFIG
from hovernav.geometry import DisplayConfig, MapConfig
from hovernav.harness import (MetricsReport, Session, TrialPlan,
                              compute_metrics, generate_trial_plan)
from hovernav.logs import (LogHeader, LogWriter, SessionLog, TickRecord,
                           read_log)
from hovernav.techniques import InputSample, make_params, make_technique

DEFAULT_WATCHDOG_S = 600.0  # simulated time bound per session


@dataclass(frozen=True)
class SessionDescriptor:
    """Everything needed to build one session, deterministically."""

    technique: str
    map: str | MapConfig = "small"
    seed: int = 0
    tick_rate: float = 60.0
    params: dict = field(default_factory=dict)
    dwell_s: float = 1.0
    session: str = ""
    agent: dict | None = None

    def session_id(self) -> str:
        if self.session:
            return self.session
        map_name = self.map if isinstance(self.map, str) else self.map.name
        return f"{self.technique}-{map_name}-seed{self.seed}"


def build_session(descriptor: SessionDescriptor,
                  config: Config | None = None) -> Session:
    """Construct the engine a descriptor names; raises ConfigurationError."""
    config = config or DEFAULT_CONFIG
    if descriptor.tick_rate <= 0 or not math.isfinite(descriptor.tick_rate):
        raise ConfigurationError(f"bad tick_rate {descriptor.tick_rate!r}")
    map_cfg = config.map_config(descriptor.map)
    overrides = config.params_for(descriptor.technique, descriptor.params)
    overrides["tick_rate"] = descriptor.tick_rate
    params = make_params(descriptor.technique, overrides)
    technique = make_technique(descriptor.technique, map_cfg,
                               config.display, params)
    radius = float(config.harness.get("target_screen_radius", 0.005))
    plan = generate_trial_plan(map_cfg, descriptor.seed, screen_radius=radius)
    plan = TrialPlan(map=plan.map, seed=plan.seed, targets=plan.targets,
                     technique=descriptor.technique)
    return Session(plan, technique, tick_rate=descriptor.tick_rate,
                   dwell_s=descriptor.dwell_s)


def make_header(descriptor: SessionDescriptor, session: Session) -> LogHeader:
    params = {f: getattr(session.technique.params, f)
              for f in type(session.technique.params).__dataclass_fields__}
    return LogHeader(
        session=descriptor.session_id(),
        technique=descriptor.technique,
        map=session.map_cfg,
        display=session.display,
        seed=descriptor.seed,
        tick_rate=descriptor.tick_rate,
        dwell_s=descriptor.dwell_s,
        params=params,
        targets=session.plan.targets,
        agent=descriptor.agent,
    )


def run_session(descriptor: SessionDescriptor,
                inputs: Iterable[InputSample] | None = None,
                policy: Callable[[Session], InputSample] | None = None,
                log_path: str | Path | None = None,
                max_ticks: int | None = None,
                config: Config | None = None,
                ) -> tuple[SessionLog, MetricsReport]:
    """Drive a session to completion and return its log and metrics.

    `policy` is called with the session each tick (closed loop, used by
    agents); otherwise samples come from `inputs`, holding the most recent
    one once the stream ends. With neither, the technique's neutral sample
    repeats. Stops at completion or after `max_ticks` (default: 10 simulated
    minutes), whichever comes first.
    """
    if policy is not None and inputs is not None:
        raise ValueError("pass either a policy or an input stream, not both")
    session = build_session(descriptor, config)
    header = make_header(descriptor, session)
    if max_ticks is None:
        max_ticks = int(DEFAULT_WATCHDOG_S * descriptor.tick_rate)

    stream = iter(inputs) if inputs is not None else None
    held = session.technique.neutral_input()
    records: list[TickRecord] = []
    writer = LogWriter(log_path, header, flush_every=512) if log_path else None
    try:
        while not session.done and session.tick < max_ticks:
            if policy is not None:
                held = policy(session)
            elif stream is not None:
                try:
                    held = next(stream)
                except StopIteration:
                    stream = None
            events = session.advance(held)
            # the engine is authoritative for time: records carry the elapsed
            # time at the end of their tick, and the input is stamped with it
            now = session.tick * session.dt
            if held.tick_time != now:
                held = replace(held, tick_time=now)
            record = TickRecord(
                tick=session.tick - 1,
                time=now,
                input=held,
                viewport=session.viewport,
                events=tuple(events),
            )
            records.append(record)
            if writer:
                writer.write(record)
    finally:
        if writer:
            writer.close()
    log = SessionLog(header=header, records=tuple(records))
    return log, compute_metrics(log)


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    ticks_checked: int
    first_divergence: int | None
    truncated: bool
    metrics: MetricsReport

    def describe(self) -> str:
        if self.ok:
            note = " (truncated log)" if self.truncated else ""
            return (f"replay ok: {self.ticks_checked} ticks verified, "
                    f"no divergence{note}")
        return f"replay DIVERGED at tick {self.first_divergence}"


def replay(source: str | Path | SessionLog) -> ReplayResult:
    """Re-execute a log's inputs and verify every recorded tick exactly."""
    log = read_log(source) if not isinstance(source, SessionLog) else source
    h = log.header
    technique = make_technique(h.technique, h.map, h.display, dict(h.params))
    plan = TrialPlan(map=h.map, seed=h.seed, targets=h.targets,
                     technique=h.technique)
    session = Session(plan, technique, tick_rate=h.tick_rate,
                      dwell_s=h.dwell_s)

    first_divergence = None
    checked = 0
    for rec in log.records:
        events = tuple(session.advance(rec.input))
        v = session.viewport
        if (v.center[0] != rec.viewport.center[0]
                or v.center[1] != rec.viewport.center[1]
                or v.scale != rec.viewport.scale
                or events != rec.events):
            first_divergence = rec.tick
            break
        checked += 1
    return ReplayResult(
        ok=first_divergence is None,
        ticks_checked=checked,
        first_divergence=first_divergence,
        truncated=log.truncated or not session.done,
        metrics=compute_metrics(log),
    )
