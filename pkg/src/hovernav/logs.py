"""Line-delimited session logs: one JSON object per line.

The first line is the header (schema version, session identity, full
configuration including the generated targets); every following line is one
tick. Field names are frozen in docs/SCHEMA.md; floats are serialized with
repr round-tripping, so parsed values equal the doubles the engine produced
and replays can compare exactly.

Each tick is written as a single write call, so a crashed session leaves a
valid log with at most one garbled trailing line, which the reader drops and
flags as truncation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from hovernav.geometry import DisplayConfig, MapConfig, ViewportState
from hovernav.harness import SessionEvent, TargetSpec
from hovernav.techniques import InputSample, Touch

SCHEMA_VERSION = 1


class SchemaMismatchError(RuntimeError):
    """Log written by an incompatible schema version."""


@dataclass(frozen=True, slots=True)
class TickRecord:
    """One tick: the input used, the resulting viewport, any events."""

    tick: int
    time: float
    input: InputSample
    viewport: ViewportState
    events: tuple[SessionEvent, ...] = ()


@dataclass(frozen=True)
class LogHeader:
    session: str
    technique: str
    map: MapConfig
    display: DisplayConfig
    seed: int
    tick_rate: float
    dwell_s: float
    params: dict
    targets: tuple[TargetSpec, ...]
    agent: dict | None = None
    schema: int = SCHEMA_VERSION


@dataclass(frozen=True)
class SessionLog:
    header: LogHeader
    records: tuple[TickRecord, ...]
    truncated: bool = False


def header_to_json(h: LogHeader) -> dict:
    return {
        "kind": "header",
        "schema": h.schema,
        "session": h.session,
        "technique": h.technique,
        "map": {"name": h.map.name, "width": h.map.width, "height": h.map.height},
        "display": {"width": h.display.width, "height": h.display.height},
        "seed": h.seed,
        "tick_rate": h.tick_rate,
        "dwell_s": h.dwell_s,
        "params": h.params,
        "agent": h.agent,
        "targets": [
            {"index": t.index, "x": t.position[0], "y": t.position[1],
             "class": t.distance_class, "screen_radius": t.screen_radius}
            for t in h.targets
        ],
    }


def header_from_json(obj: dict) -> LogHeader:
    if obj.get("kind") != "header":
        raise SchemaMismatchError("log does not start with a header line")
    if obj.get("schema") != SCHEMA_VERSION:
        raise SchemaMismatchError(
            f"log schema {obj.get('schema')!r} != supported {SCHEMA_VERSION}")
    return LogHeader(
        session=obj["session"],
        technique=obj["technique"],
        map=MapConfig(obj["map"]["width"], obj["map"]["height"],
                      obj["map"]["name"]),
        display=DisplayConfig(obj["display"]["width"], obj["display"]["height"]),
        seed=obj["seed"],
        tick_rate=obj["tick_rate"],
        dwell_s=obj["dwell_s"],
        params=obj["params"],
        agent=obj.get("agent"),
        targets=tuple(
            TargetSpec((t["x"], t["y"]), t["class"], t["index"],
                       t["screen_radius"])
            for t in obj["targets"]
        ),
    )


def record_to_json(r: TickRecord) -> dict:
    return {
        "kind": "tick",
        "tick": r.tick,
        "time": r.time,
        "input": {
            "x": r.input.x, "y": r.input.y, "h": r.input.h,
            "touches": [[t.id, t.x, t.y] for t in r.input.touches],
        },
        "viewport": {
            "cx": r.viewport.center[0], "cy": r.viewport.center[1],
            "scale": r.viewport.scale,
        },
        "events": [{"type": e.kind, "target": e.target} for e in r.events],
    }


def record_from_json(obj: dict) -> TickRecord:
    inp = obj["input"]
    vp = obj["viewport"]
    return TickRecord(
        tick=obj["tick"],
        time=obj["time"],
        input=InputSample(
            x=inp["x"], y=inp["y"], h=inp["h"],
            touches=tuple(Touch(int(t[0]), t[1], t[2])
                          for t in inp["touches"]),
            tick_time=obj["time"],
        ),
        viewport=ViewportState((vp["cx"], vp["cy"]), vp["scale"]),
        events=tuple(SessionEvent(e["type"], e["target"])
                     for e in obj["events"]),
    )


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


class LogWriter:
    """Appends one line per tick; safe to abandon mid-session."""

    def __init__(self, path: str | Path, header: LogHeader,
                 flush_every: int = 0):
        self.path = Path(path)
        self._flush_every = flush_every
        self._since_flush = 0
        self._f = open(self.path, "w")
        self._f.write(_dumps(header_to_json(header)) + "\n")
        self._f.flush()

    def write(self, record: TickRecord) -> None:
        self._f.write(_dumps(record_to_json(record)) + "\n")
        if self._flush_every:
            self._since_flush += 1
            if self._since_flush >= self._flush_every:
                self._f.flush()
                self._since_flush = 0

    def close(self) -> None:
        if not self._f.closed:
            self._f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_log(path: str | Path) -> SessionLog:
    """Parse a log file; a garbled trailing line marks the log truncated."""
    path = Path(path)
    records: list[TickRecord] = []
    truncated = False
    with open(path) as f:
        first = f.readline()
        if not first.strip():
            raise SchemaMismatchError(f"{path}: empty log")
        header = header_from_json(json.loads(first))
        for line in f:
            try:
                obj = json.loads(line)
                if obj.get("kind") != "tick":
                    raise ValueError("not a tick record")
                records.append(record_from_json(obj))
            except (ValueError, KeyError, IndexError):
                truncated = True
                break
    return SessionLog(header=header, records=tuple(records),
                      truncated=truncated)


def dump_log(log: SessionLog, path: str | Path) -> None:
    with LogWriter(path, log.header) as w:
        for rec in log.records:
            w.write(rec)
