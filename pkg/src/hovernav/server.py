"""Live session service: line-delimited JSON over TCP, mirrored over WebSocket.

One connection owns one session at a time. The server is authoritative: it
ticks the engine at the descriptor's tick rate on its own clock, holds the
most recent client input between messages (zero-order hold), logs every tick,
and streams state snapshots back; clients render snapshots and never simulate
locally, so a human run replays exactly like an agent run.

Message framing is one JSON object per line on TCP; over WebSocket each text
message carries the same JSON payload. Schemas are frozen in docs/SCHEMA.md.
Client inputs carry a monotonically increasing tick index; stale or malformed
inputs draw an error message and are ignored, the session continuing with
the held sample.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import math
from dataclasses import replace
from pathlib import Path

from hovernav import __version__
from hovernav.config import Config, ConfigurationError, DEFAULT_CONFIG
from hovernav.geometry import map_to_screen, on_display
from hovernav.harness import compute_metrics
from hovernav.logs import LogWriter, SessionLog, TickRecord, read_log
from hovernav.service import SessionDescriptor, build_session, make_header
from hovernav.techniques import InputSample, Touch

PROTOCOL_SCHEMA = 1

_session_counter = itertools.count(1)


def parse_input_message(msg: dict, display) -> InputSample:
    """Validate and convert an input message; raises ValueError."""
    finger = msg["finger"]
    x = float(finger["x"])
    y = float(finger["y"])
    h = float(finger["h"])
    if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(h)):
        raise ValueError("non-finite finger coordinates")
    if h < 0.0:
        raise ValueError("negative finger height")
    touches = []
    for t in msg.get("touches", []):
        tid, tx, ty = int(t[0]), float(t[1]), float(t[2])
        if not (math.isfinite(tx) and math.isfinite(ty)):
            raise ValueError("non-finite touch coordinates")
        if abs(tx) > display.half_width + 1e-9 or abs(ty) > display.half_height + 1e-9:
            raise ValueError("touch outside display extents")
        touches.append(Touch(tid, tx, ty))
    return InputSample(x, y, h, touches=tuple(touches))


def descriptor_from_json(obj: dict) -> SessionDescriptor:
    try:
        return SessionDescriptor(
            technique=obj["technique"],
            map=obj.get("map", "small"),
            seed=int(obj.get("seed", 0)),
            tick_rate=float(obj.get("tick_rate", 60.0)),
            params=dict(obj.get("params", {})),
            dwell_s=float(obj.get("dwell_s", 1.0)),
            session=str(obj.get("session", "")),
            agent=None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad descriptor: {exc}") from exc


class SessionConnection:
    """Protocol handler for one client connection (transport-agnostic)."""

    def __init__(self, send_line, log_dir: Path, config: Config,
                 snapshot_every: int = 1):
        self._send_line = send_line
        self._log_dir = log_dir
        self._config = config
        self._snapshot_every = max(1, snapshot_every)
        self._session = None
        self._descriptor = None
        self._writer = None
        self._held: InputSample | None = None
        self._last_client_tick = -1
        self._running = asyncio.Event()
        self._task: asyncio.Task | None = None
        self._log_path: Path | None = None

    async def send(self, obj: dict) -> None:
        await self._send_line(json.dumps(obj, separators=(",", ":")))

    async def error(self, message: str) -> None:
        await self.send({"type": "error", "message": message})

    async def handle_line(self, line: str) -> None:
        try:
            msg = json.loads(line)
            if not isinstance(msg, dict) or "type" not in msg:
                raise ValueError("message must be an object with a type")
        except ValueError as exc:
            await self.error(f"malformed message: {exc}")
            return
        kind = msg["type"]
        if kind == "hello":
            if msg.get("schema") != PROTOCOL_SCHEMA:
                await self.error(f"unsupported schema {msg.get('schema')!r}; "
                                 f"server speaks {PROTOCOL_SCHEMA}")
                return
            await self.send({"type": "hello", "schema": PROTOCOL_SCHEMA,
                             "server": "hovernav", "version": __version__})
        elif kind == "start":
            await self._handle_start(msg)
        elif kind == "input":
            await self._handle_input(msg)
        elif kind == "pause":
            self._running.clear()
        elif kind == "resume":
            if self._session is not None:
                self._running.set()
        elif kind == "end":
            await self._finish(ended_by_client=True)
        else:
            await self.error(f"unknown message type {kind!r}")

    async def _handle_start(self, msg: dict) -> None:
        if self._session is not None:
            await self.error("session already running; send end first")
            return
        try:
            descriptor = descriptor_from_json(msg.get("descriptor", {}))
            if not descriptor.session:
                descriptor = replace(
                    descriptor, session=f"live-{next(_session_counter):04d}-"
                                        f"{descriptor.session_id()}")
            session = build_session(descriptor, self._config)
        except ConfigurationError as exc:
            await self.error(f"start rejected: {exc}")
            return
        self._descriptor = descriptor
        self._session = session
        self._held = session.technique.neutral_input()
        self._last_client_tick = -1
        self._log_dir.mkdir(parents=True, exist_ok=True)
        self._log_path = self._log_dir / f"{descriptor.session_id()}.jsonl"
        self._writer = LogWriter(self._log_path, make_header(descriptor, session),
                                 flush_every=1)
        await self.send({
            "type": "started",
            "session": descriptor.session_id(),
            "technique": descriptor.technique,
            "seed": descriptor.seed,
            "tick_rate": descriptor.tick_rate,
            "dwell_required_s": descriptor.dwell_s,
            "map": {"name": session.map_cfg.name,
                    "width": session.map_cfg.width,
                    "height": session.map_cfg.height},
            "display": {"width": session.display.width,
                        "height": session.display.height},
            "params": {f: getattr(session.technique.params, f)
                       for f in type(session.technique.params).__dataclass_fields__},
            "log": str(self._log_path),
        })
        self._running.set()
        self._task = asyncio.create_task(self._tick_loop())

    async def _handle_input(self, msg: dict) -> None:
        if self._session is None:
            await self.error("no session; send start first")
            return
        try:
            tick = int(msg["tick"])
            if tick <= self._last_client_tick:
                raise ValueError(
                    f"out-of-order input tick {tick} <= {self._last_client_tick}")
            sample = parse_input_message(msg, self._session.display)
        except (KeyError, TypeError, ValueError) as exc:
            await self.error(f"input rejected: {exc}")
            return
        self._last_client_tick = tick
        self._held = sample

    async def _tick_loop(self) -> None:
        session = self._session
        dt = session.dt
        loop = asyncio.get_running_loop()
        next_t = loop.time()
        try:
            while not session.done:
                await self._running.wait()
                events = session.advance(self._held)
                now = session.tick * dt
                held = self._held
                if held.tick_time != now:
                    held = InputSample(held.x, held.y, held.h, held.touches, now)
                record = TickRecord(tick=session.tick - 1, time=now,
                                    input=held, viewport=session.viewport,
                                    events=tuple(events))
                self._writer.write(record)
                for ev in events:
                    await self.send({"type": "event", "tick": record.tick,
                                     "event": ev.kind, "target": ev.target})
                if record.tick % self._snapshot_every == 0 or session.done:
                    await self.send(self._snapshot())
                if session.done:
                    await self._finish(ended_by_client=False)
                    return
                next_t += dt
                delay = next_t - loop.time()
                if delay > 0:
                    await asyncio.sleep(delay)
                else:
                    # fell behind the wall clock; don't try to catch up in a burst
                    next_t = loop.time()
        except asyncio.CancelledError:
            raise
        except ConnectionError:
            pass

    def _snapshot(self) -> dict:
        s = self._session
        v = s.viewport
        targets = []
        for i, t in enumerate(s.plan.targets):
            sx, sy = map_to_screen(t.position, v)
            targets.append({
                "index": i, "x": sx, "y": sy,
                "on_screen": on_display((sx, sy), s.display),
                "active": i == s.active_index and not s.done,
                "selected": i < s.active_index,
            })
        return {
            "type": "state",
            "tick": s.tick - 1,
            "time": s.time,
            "viewport": {"cx": v.center[0], "cy": v.center[1],
                         "scale": v.scale},
            "cursor": {"x": s.state.cursor_disc[0], "y": s.state.cursor_disc[1]},
            "dwell_s": s.dwell_progress_s,
            "dwell_required_s": s.dwell_s,
            "active_target": s.active_index if not s.done else -1,
            "elapsed_s": s.time,
            "target_elapsed_s": s.per_target_ticks * s.dt,
            "errors": {"first_miss": s.first_miss_count,
                       "wrong_target": s.wrong_target_count},
            "done": s.done,
            "targets": targets,
        }

    async def _finish(self, ended_by_client: bool) -> None:
        if self._session is None:
            return
        session = self._session
        if self._task is not None and not ended_by_client:
            pass  # finishing from inside the loop
        elif self._task is not None:
            self._task.cancel()
        if self._writer is not None:
            self._writer.close()
            self._writer = None
        log = read_log(self._log_path)
        metrics = compute_metrics(log)
        try:
            await self.send({"type": "session-complete",
                             "session": self._descriptor.session_id(),
                             "metrics": metrics.to_json()})
        except ConnectionError:
            pass
        self._session = None
        self._task = None
        self._running.clear()

    async def close(self) -> None:
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except (asyncio.CancelledError, ConnectionError):
                pass
            self._task = None
        if self._writer is not None:
            self._writer.close()
            self._writer = None
        self._session = None


async def _handle_tcp(reader: asyncio.StreamReader,
                      writer: asyncio.StreamWriter,
                      log_dir: Path, config: Config, snapshot_every: int):
    lock = asyncio.Lock()

    async def send_line(line: str):
        async with lock:
            writer.write(line.encode() + b"\n")
            await writer.drain()

    conn = SessionConnection(send_line, log_dir, config, snapshot_every)
    try:
        while True:
            raw = await reader.readline()
            if not raw:
                break
            line = raw.decode().strip()
            if line:
                await conn.handle_line(line)
    except ConnectionError:
        pass
    finally:
        await conn.close()
        writer.close()


async def serve(port: int = 8765, ws_port: int | None = None,
                log_dir: str | Path = "logs",
                config: Config | None = None,
                snapshot_every: int = 1,
                ready: asyncio.Event | None = None,
                bound: dict | None = None) -> None:
    """Run the TCP service (and the WebSocket mirror when ws_port is set).

    Port 0 binds an ephemeral port; the bound ports are announced on stdout
    as a JSON line and stored into `bound` when provided.
    """
    config = config or DEFAULT_CONFIG
    log_dir = Path(log_dir)

    server = await asyncio.start_server(
        lambda r, w: _handle_tcp(r, w, log_dir, config, snapshot_every),
        host="127.0.0.1", port=port)
    tcp_port = server.sockets[0].getsockname()[1]

    ws_server = None
    ws_actual = None
    if ws_port is not None:
        import websockets

        async def ws_handler(websocket):
            conn = SessionConnection(websocket.send, log_dir, config,
                                     snapshot_every)
            try:
                async for message in websocket:
                    await conn.handle_line(message)
            except websockets.ConnectionClosed:
                pass
            finally:
                await conn.close()

        ws_server = await websockets.serve(ws_handler, "127.0.0.1", ws_port)
        ws_actual = next(iter(ws_server.sockets)).getsockname()[1]

    announce = {"listening": {"tcp": tcp_port, "ws": ws_actual},
                "log_dir": str(log_dir)}
    print(json.dumps(announce), flush=True)
    if bound is not None:
        bound.update(announce["listening"])
    if ready is not None:
        ready.set()

    async with server:
        if ws_server is not None:
            async with ws_server:
                await asyncio.Future()
        else:
            await asyncio.Future()
