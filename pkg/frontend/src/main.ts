/**
 * Browser entry point: wires DOM events to the input binding, the binding to
 * the per-frame coalescer, the coalescer to the session client, and renders
 * the latest snapshot every animation frame.
 *
 * Configuration via URL parameters:
 *   ?host=127.0.0.1&port=8766&technique=rate3d&map=small&seed=0&tick_rate=60
 */

import { FrameCoalescer } from "./coalescer.js";
import { InputBinding } from "./input.js";
import { SessionClient } from "./client.js";
import { Layout, canvasSize, makeLayout, renderFrame } from "./render.js";
import type { Descriptor } from "./protocol.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

const descriptor: Descriptor = {
  technique: param("technique", "rate3d"),
  map: param("map", "small"),
  seed: Number(param("seed", "0")),
  tick_rate: Number(param("tick_rate", "60")),
};
const host = param("host", window.location.hostname || "127.0.0.1");
const wsPort = Number(param("port", "8766"));

const canvas = document.getElementById("view") as HTMLCanvasElement;
const statusLine = document.getElementById("status") as HTMLElement;
const eventsLog = document.getElementById("events") as HTMLElement;

// the binding needs h_max before the server reports params; the default
// matches the engine and is replaced on "started"
let binding = new InputBinding({ width: 0.105, height: 0.06 }, 0.05);
let layout: Layout = makeLayout(0.105, 0.06);

function applyLayout(): void {
  const { w, h } = canvasSize(layout);
  canvas.width = w;
  canvas.height = h;
}
applyLayout();

const client = new SessionClient({
  onStarted(msg) {
    const hMax = Number(msg.params["h_max"] ?? 0.05);
    binding = new InputBinding(
      { width: msg.display.width, height: msg.display.height }, hMax);
    layout = makeLayout(msg.display.width, msg.display.height);
    applyLayout();
    statusLine.textContent =
      `session ${msg.session} | ${msg.technique} on ${msg.map.name} ` +
      `(${msg.map.width} x ${msg.map.height} m), seed ${msg.seed}`;
  },
  onEvent(msg) {
    const div = document.createElement("div");
    div.textContent = `tick ${msg.tick}: ${msg.event} target ${msg.target}`;
    eventsLog.prepend(div);
  },
  onComplete(msg) {
    statusLine.textContent = `session complete: ${JSON.stringify(msg.metrics)}`;
  },
  onProtocolError(message) {
    const div = document.createElement("div");
    div.textContent = `server: ${message}`;
    eventsLog.prepend(div);
  },
});

const coalescer = new FrameCoalescer((tick, sample) =>
  client.sendInput(tick, sample));

client.connect(
  () => new WebSocket(`ws://${host}:${wsPort}`) as never, descriptor);

function canvasToScreen(ev: MouseEvent): [number, number] {
  const rect = canvas.getBoundingClientRect();
  const px = ev.clientX - rect.left;
  const py = ev.clientY - rect.top;
  return [px / layout.pxPerM - layout.displayW / 2,
          layout.displayH / 2 - py / layout.pxPerM];
}

canvas.addEventListener("pointermove", (ev) => {
  const [x, y] = canvasToScreen(ev);
  binding.pointerMove(x, y);
  coalescer.enqueue(binding.sample());
});
canvas.addEventListener("pointerdown", (ev) => {
  if (ev.button === 0) {
    binding.setButton(true);
    coalescer.enqueue(binding.sample());
  }
  ev.preventDefault();
});
window.addEventListener("pointerup", (ev) => {
  if (ev.button === 0) {
    binding.setButton(false);
    coalescer.enqueue(binding.sample());
  }
});
canvas.addEventListener("wheel", (ev) => {
  binding.wheel(ev.deltaY);
  coalescer.enqueue(binding.sample());
  ev.preventDefault();
}, { passive: false });
window.addEventListener("keydown", (ev) => {
  if (ev.key === "Shift") binding.setPinchModifier(true);
  else if (ev.key === "w" || ev.key === "ArrowUp") binding.keyHeight(1);
  else if (ev.key === "s" || ev.key === "ArrowDown") binding.keyHeight(-1);
  else if (ev.key === "r") binding.resetHeight();
  else if (ev.key === "Escape") client.end();
  else return;
  coalescer.enqueue(binding.sample());
});
window.addEventListener("keyup", (ev) => {
  if (ev.key === "Shift") {
    binding.setPinchModifier(false);
    coalescer.enqueue(binding.sample());
  }
});

function draw(): void {
  renderFrame(
    canvas.getContext("2d") as never, layout, client.started, client.snapshot,
    {
      pointer: binding.pointer,
      height: binding.height,
      hMax: binding.hMax,
      pinching: binding.pinching,
      connected: client.connected,
    });
  requestAnimationFrame(draw);
}
requestAnimationFrame(draw);
