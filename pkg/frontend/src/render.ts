/**
 * Canvas rendering of server snapshots.
 *
 * The client never simulates: everything drawn in the map area comes from
 * the latest authoritative snapshot (viewport, target screen positions,
 * dwell progress, error counts). Only the fingertip marker and the height
 * gauge reflect local input state.
 *
 * Drawing goes through a minimal 2D-context interface so tests can record
 * calls without a real canvas.
 */

import type { StartedMessage, StateSnapshot } from "./protocol.js";

/** The subset of CanvasRenderingContext2D the renderer uses. */
export interface Ctx2D {
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  font: string;
  textAlign: string;
  textBaseline: string;
  globalAlpha: number;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Layout {
  /** canvas pixels per screen meter */
  pxPerM: number;
  displayW: number;  // display width in meters
  displayH: number;
  gaugePx: number;   // width of the height-gauge strip right of the display
  hudPx: number;     // height of the HUD strip below the display
}

export function makeLayout(displayW: number, displayH: number,
                           pxPerM = 8000): Layout {
  return { pxPerM, displayW, displayH, gaugePx: 56, hudPx: 76 };
}

export function canvasSize(l: Layout): { w: number; h: number } {
  return {
    w: Math.round(l.displayW * l.pxPerM) + l.gaugePx,
    h: Math.round(l.displayH * l.pxPerM) + l.hudPx,
  };
}

/** Screen meters (origin center, y up) to canvas pixels (origin top-left). */
export function screenToCanvas(l: Layout, x: number, y: number): [number, number] {
  return [(x + l.displayW / 2) * l.pxPerM, (l.displayH / 2 - y) * l.pxPerM];
}

/** Grid step in map meters: 1/2/5 x 10^k, at least ~30 px apart on screen. */
export function gridStepMapMeters(scale: number, pxPerM: number): number {
  const minPx = 30;
  let step = Math.pow(10, Math.floor(Math.log10(minPx / (scale * pxPerM))));
  for (const mult of [1, 2, 5, 10]) {
    if (step * mult * scale * pxPerM >= minPx) return step * mult;
  }
  return step * 10;
}

export function formatScale(scale: number): string {
  return `scale ${scale.toFixed(4)} (1:${(1 / scale).toFixed(1)})`;
}

export interface LocalState {
  pointer: { x: number; y: number };
  height: number;
  hMax: number;
  pinching: boolean;
  connected: boolean;
}

const TARGET_RADIUS_M = 0.005;  // 10 mm diameter, scale-independent
const DISC_RADIUS_M = 0.0025;   // 5 mm pivot disc

export function renderFrame(ctx: Ctx2D, l: Layout,
                            started: StartedMessage | null,
                            snap: StateSnapshot | null,
                            local: LocalState): void {
  const { w, h } = canvasSize(l);
  ctx.clearRect(0, 0, w, h);
  ctx.fillStyle = "#10141c";
  ctx.fillRect(0, 0, w, h);

  const dispW = l.displayW * l.pxPerM;
  const dispH = l.displayH * l.pxPerM;

  if (started !== null && snap !== null) {
    drawMapArea(ctx, l, started, snap);
  }
  drawFingertip(ctx, l, local);

  // display bezel
  ctx.strokeStyle = "#e0533c";
  ctx.lineWidth = 2;
  ctx.strokeRect(0.5, 0.5, dispW - 1, dispH - 1);

  drawGauge(ctx, l, local, started);
  drawHud(ctx, l, started, snap, local);

  if (!local.connected) {
    drawReconnectOverlay(ctx, l);
  }
}

function drawMapArea(ctx: Ctx2D, l: Layout, started: StartedMessage,
                     snap: StateSnapshot): void {
  const { cx, cy, scale } = snap.viewport;
  const mapW = started.map.width;
  const mapH = started.map.height;
  const px = l.pxPerM;

  // procedural grid in map space
  const step = gridStepMapMeters(scale, px);
  const halfW = l.displayW / (2 * scale);
  const halfH = l.displayH / (2 * scale);
  ctx.strokeStyle = "#2c3a50";
  ctx.lineWidth = 1;
  const x0 = Math.max(cx - halfW, -mapW / 2);
  const x1 = Math.min(cx + halfW, mapW / 2);
  const y0 = Math.max(cy - halfH, -mapH / 2);
  const y1 = Math.min(cy + halfH, mapH / 2);
  for (let gx = Math.ceil(x0 / step) * step; gx <= x1; gx += step) {
    const [cxp] = screenToCanvas(l, (gx - cx) * scale, 0);
    const [, top] = screenToCanvas(l, 0, (y1 - cy) * scale);
    const [, bottom] = screenToCanvas(l, 0, (y0 - cy) * scale);
    ctx.beginPath();
    ctx.moveTo(cxp, top);
    ctx.lineTo(cxp, bottom);
    ctx.stroke();
  }
  for (let gy = Math.ceil(y0 / step) * step; gy <= y1; gy += step) {
    const [, cyp] = screenToCanvas(l, 0, (gy - cy) * scale);
    const [left] = screenToCanvas(l, (x0 - cx) * scale, 0);
    const [right] = screenToCanvas(l, (x1 - cx) * scale, 0);
    ctx.beginPath();
    ctx.moveTo(left, cyp);
    ctx.lineTo(right, cyp);
    ctx.stroke();
  }

  // map boundary: at minimum scale this rectangle exactly fills the display
  ctx.strokeStyle = "#5a718f";
  ctx.lineWidth = 2;
  const [bx0, by1] = screenToCanvas(l, (-mapW / 2 - cx) * scale,
                                    (-mapH / 2 - cy) * scale);
  const [bx1, by0] = screenToCanvas(l, (mapW / 2 - cx) * scale,
                                    (mapH / 2 - cy) * scale);
  ctx.strokeRect(bx0, by0, bx1 - bx0, by1 - by0);

  // targets come as screen positions; 10 mm diameter regardless of zoom
  for (const t of snap.targets) {
    if (!t.on_screen && !t.active) continue;
    const [tx, ty] = screenToCanvas(l, t.x, t.y);
    if (t.on_screen) {
      ctx.beginPath();
      ctx.arc(tx, ty, TARGET_RADIUS_M * l.pxPerM, 0, 2 * Math.PI);
      ctx.fillStyle = t.active ? "#2f7df6" : (t.selected ? "#3d4a5c" : "#d43f3f");
      ctx.fill();
    } else if (t.active) {
      drawEdgeIndicator(ctx, l, t.x, t.y);
    }
  }

  // dwell progress ring around the active target
  const active = snap.targets[snap.active_target];
  if (active !== undefined && active.on_screen && snap.dwell_s > 0) {
    const [tx, ty] = screenToCanvas(l, active.x, active.y);
    const frac = Math.min(1, snap.dwell_s / snap.dwell_required_s);
    ctx.beginPath();
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 3;
    ctx.arc(tx, ty, TARGET_RADIUS_M * l.pxPerM + 5,
            -Math.PI / 2, -Math.PI / 2 + frac * 2 * Math.PI);
    ctx.stroke();
  }

  // white pivot disc (5 mm) at the server's cursor position
  const [dx, dy] = screenToCanvas(l, snap.cursor.x, snap.cursor.y);
  ctx.beginPath();
  ctx.arc(dx, dy, DISC_RADIUS_M * l.pxPerM, 0, 2 * Math.PI);
  ctx.fillStyle = "#ffffff";
  ctx.globalAlpha = 0.85;
  ctx.fill();
  ctx.globalAlpha = 1.0;
}

/** Triangle on the display edge pointing toward an off-screen active target. */
function drawEdgeIndicator(ctx: Ctx2D, l: Layout, x: number, y: number): void {
  const hw = l.displayW / 2;
  const hh = l.displayH / 2;
  const k = Math.min(hw / Math.max(Math.abs(x), 1e-9),
                     hh / Math.max(Math.abs(y), 1e-9)) * 0.92;
  const ex = x * k;
  const ey = y * k;
  const [cx, cy] = screenToCanvas(l, ex, ey);
  const angle = Math.atan2(-(y - ey), x - ex);
  const s = 9;
  ctx.beginPath();
  ctx.moveTo(cx + s * Math.cos(angle), cy + s * Math.sin(angle));
  ctx.lineTo(cx + s * Math.cos(angle + 2.5), cy + s * Math.sin(angle + 2.5));
  ctx.lineTo(cx + s * Math.cos(angle - 2.5), cy + s * Math.sin(angle - 2.5));
  ctx.closePath();
  ctx.fillStyle = "#2f7df6";
  ctx.fill();
}

function drawFingertip(ctx: Ctx2D, l: Layout, local: LocalState): void {
  const [fx, fy] = screenToCanvas(l, local.pointer.x, local.pointer.y);
  ctx.beginPath();
  ctx.arc(fx, fy, 6, 0, 2 * Math.PI);
  ctx.strokeStyle = local.pinching ? "#ffd24a" : "#ff7ad9";
  ctx.lineWidth = 2;
  ctx.stroke();
}

function drawGauge(ctx: Ctx2D, l: Layout, local: LocalState,
                   started: StartedMessage | null): void {
  const dispW = l.displayW * l.pxPerM;
  const dispH = l.displayH * l.pxPerM;
  const x = dispW + 12;
  const w = l.gaugePx - 24;
  ctx.fillStyle = "#1c2430";
  ctx.fillRect(x, 0, w, dispH);
  const frac = local.hMax > 0 ? local.height / local.hMax : 0;
  const fillH = frac * dispH;
  ctx.fillStyle = "#49b675";
  ctx.fillRect(x, dispH - fillH, w, fillH);
  // midpoint marker: the rate technique's neutral height
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(x, dispH / 2);
  ctx.lineTo(x + w, dispH / 2);
  ctx.stroke();
  ctx.fillStyle = "#c9d4e3";
  ctx.font = "11px monospace";
  ctx.textAlign = "left";
  ctx.textBaseline = "top";
  ctx.fillText(`h ${(local.height * 1000).toFixed(1)}mm`, x - 8, dispH + 6);
}

function drawHud(ctx: Ctx2D, l: Layout, started: StartedMessage | null,
                 snap: StateSnapshot | null, local: LocalState): void {
  const dispH = l.displayH * l.pxPerM;
  ctx.fillStyle = "#c9d4e3";
  ctx.font = "13px monospace";
  ctx.textAlign = "left";
  ctx.textBaseline = "top";
  let y = dispH + 8;
  if (snap === null || started === null) {
    ctx.fillText("waiting for session...", 8, y);
    return;
  }
  ctx.fillText(formatScale(snap.viewport.scale), 8, y);
  y += 18;
  const trial = snap.done
    ? "session complete"
    : `target ${snap.active_target + 1}/${snap.targets.length}` +
      `  t=${snap.target_elapsed_s.toFixed(1)}s` +
      `  dwell ${(100 * snap.dwell_s / snap.dwell_required_s).toFixed(0)}%`;
  ctx.fillText(trial, 8, y);
  y += 18;
  ctx.fillText(
    `elapsed ${snap.elapsed_s.toFixed(1)}s  miss ${snap.errors.first_miss}` +
    `  wrong ${snap.errors.wrong_target}  [${started.technique}` +
    ` ${started.map.name}]`, 8, y);
}

function drawReconnectOverlay(ctx: Ctx2D, l: Layout): void {
  const { w, h } = canvasSize(l);
  ctx.globalAlpha = 0.75;
  ctx.fillStyle = "#000000";
  ctx.fillRect(0, 0, w, h);
  ctx.globalAlpha = 1.0;
  ctx.fillStyle = "#ffffff";
  ctx.font = "16px monospace";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText("disconnected - retrying...", w / 2, h / 2);
}
