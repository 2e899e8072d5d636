/**
 * Scripted end-to-end session against the real server.
 *
 * Drives synthetic pointer/wheel/button events through the actual input
 * binding and frame coalescer, speaks the WebSocket protocol to a freshly
 * spawned server process, then:
 *   1. verifies the server log replays bit-identically (CLI `replay`), and
 *   2. checks the rendered scale indicator matches the snapshot scale at
 *      three checkpoints spanning zoom-out, mid-zoom, and zoom-in states.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import WebSocket from "ws";

import { FrameCoalescer } from "../src/coalescer.js";
import { InputBinding } from "../src/input.js";
import { SessionClient, SocketLike } from "../src/client.js";
import { formatScale, makeLayout, renderFrame } from "../src/render.js";
import type { StateSnapshot } from "../src/protocol.js";
import { makeStarted, stubCtx } from "./render.test.js";

const PYTHON = process.env.HOVERNAV_PYTHON ?? "python3";

let server: ChildProcess;
let wsPort = 0;
let logDir = "";

beforeAll(async () => {
  logDir = mkdtempSync(join(tmpdir(), "hovernav-ui-"));
  server = spawn(PYTHON, ["-m", "hovernav.cli", "serve", "--port", "0",
                          "--ws-port", "0", "--log-dir", logDir],
                 { stdio: ["ignore", "pipe", "pipe"] });
  wsPort = await new Promise<number>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("server did not start")),
                             15000);
    let buf = "";
    server.stdout!.on("data", (chunk) => {
      buf += String(chunk);
      const line = buf.split("\n")[0];
      if (line.includes("listening")) {
        clearTimeout(timer);
        resolve(JSON.parse(line).listening.ws);
      }
    });
    server.on("exit", (code) => reject(new Error(`server exited ${code}`)));
  });
}, 20000);

afterAll(() => {
  server?.kill();
});

function waitFor<T>(poll: () => T | null, timeoutMs = 10000): Promise<T> {
  return new Promise((resolve, reject) => {
    const t0 = Date.now();
    const timer = setInterval(() => {
      const v = poll();
      if (v !== null) {
        clearInterval(timer);
        resolve(v);
      } else if (Date.now() - t0 > timeoutMs) {
        clearInterval(timer);
        reject(new Error("timed out"));
      }
    }, 5);
  });
}

describe("scripted browser session", () => {
  it("produces a replayable server log and truthful scale indicator",
     { timeout: 30000 }, async () => {
    const client = new SessionClient();
    client.connect(
      () => new WebSocket(`ws://127.0.0.1:${wsPort}`) as unknown as SocketLike,
      { technique: "rate3d", map: "small", seed: 5, tick_rate: 240 });

    const started = await waitFor(() => client.started);
    expect(started.map.name).toBe("small");
    const hMax = Number(started.params["h_max"]);

    // real input pipeline: binding -> coalescer -> protocol messages
    const binding = new InputBinding(
      { width: started.display.width, height: started.display.height }, hMax);
    const frames: Array<() => void> = [];
    const coalescer = new FrameCoalescer(
      (tick, sample) => client.sendInput(tick, sample),
      (f) => frames.push(f));
    const pump = () => frames.splice(0).forEach((f) => f());

    const checkpoints: StateSnapshot[] = [];
    const snapAt = () => client.snapshot;

    checkpoints.push(await waitFor(snapAt));  // checkpoint 1: session start

    // synthetic wheel events raise the finger to h_max: zoom out
    binding.pointerMove(0.002, 0.001);
    for (let i = 0; i < 60; i++) binding.wheel(-120);
    expect(binding.height).toBe(hMax);
    coalescer.enqueue(binding.sample());
    pump();
    checkpoints.push(await waitFor(() => {
      const s = client.snapshot;
      return s !== null && s.viewport.scale < 0.5 ? s : null;
    }));

    // drop the finger to the surface: zoom back toward 1:1; the third
    // checkpoint is caught mid-climb so all three scales differ
    const zoomedOut = checkpoints[1].viewport.scale;
    for (let i = 0; i < 120; i++) binding.wheel(+120);
    expect(binding.height).toBe(0);
    coalescer.enqueue(binding.sample());
    pump();
    checkpoints.push(await waitFor(() => {
      const s = client.snapshot;
      return s !== null && s.viewport.scale > zoomedOut * 1.1 &&
             s.viewport.scale < 0.999 ? s : null;
    }));
    await waitFor(() => {
      const s = client.snapshot;
      return s !== null && s.viewport.scale >= 1.0 ? s : null;
    });

    // a touch freezes the hover technique's viewport
    binding.setButton(true);
    coalescer.enqueue(binding.sample());
    pump();
    await new Promise((r) => setTimeout(r, 120));
    const frozen1 = client.snapshot!.viewport;
    await new Promise((r) => setTimeout(r, 120));
    const frozen2 = client.snapshot!.viewport;
    expect(frozen2.scale).toBe(frozen1.scale);
    expect(frozen2.cx).toBe(frozen1.cx);
    binding.setButton(false);
    coalescer.enqueue(binding.sample());
    pump();

    client.end();
    await waitFor(() => client.completed);
    client.close();

    // checkpoint scale indicators render exactly what the snapshot said
    const layout = makeLayout(started.display.width, started.display.height);
    const scales = new Set(checkpoints.map((s) => s.viewport.scale));
    expect(scales.size).toBe(3);  // genuinely different zoom states
    for (const snap of checkpoints) {
      const { ctx, texts } = stubCtx();
      renderFrame(ctx, layout, { ...makeStarted(), ...started }, snap, {
        pointer: binding.pointer, height: binding.height, hMax,
        pinching: false, connected: true,
      });
      expect(texts).toContain(formatScale(snap.viewport.scale));
    }

    // the authoritative log replays bit-identically through the engine
    const replay = spawnSync(PYTHON, ["-m", "hovernav.cli", "replay",
                                      "--in", started.log],
                             { encoding: "utf-8" });
    expect(replay.status, replay.stderr).toBe(0);
    expect(replay.stdout).toContain("no divergence");
  });
});
