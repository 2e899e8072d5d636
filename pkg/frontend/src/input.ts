/**
 * Desktop input mapped onto the technique's input space.
 *
 * Pointer position is the finger's x/y over the display; the mouse wheel
 * (or a key pair) moves the finger height between 0 and h_max, shown as a
 * gauge; the primary button makes a touch contact at the pointer; holding
 * the pinch modifier (Shift) anchors a point and mirrors a second synthetic
 * touch across it so a plain drag becomes a two-finger pinch.
 *
 * The binding is pure state: callers feed it display-space coordinates
 * (meters, origin at the display center, y up) and read one InputSample per
 * frame. Emitted samples always satisfy the engine's input invariants
 * (h >= 0, touches inside the display).
 */

import type { InputSample, Touch } from "./protocol.js";

export interface DisplaySize {
  width: number;
  height: number;
}

const clamp = (v: number, lo: number, hi: number) =>
  v < lo ? lo : v > hi ? hi : v;

export class InputBinding {
  readonly display: DisplaySize;
  readonly hMax: number;
  readonly hMid: number;
  /** wheel notch of 100 units moves the finger this many meters */
  wheelGain = 0.005;
  keyStep = 0.0025;

  private x = 0;
  private y = 0;
  private h: number;
  private buttonDown = false;
  private pinchAnchor: { x: number; y: number } | null = null;

  constructor(display: DisplaySize, hMax: number, hStart?: number) {
    this.display = display;
    this.hMax = hMax;
    this.hMid = hMax / 2;
    this.h = hStart ?? this.hMid;
  }

  get height(): number {
    return this.h;
  }

  get pointer(): { x: number; y: number } {
    return { x: this.x, y: this.y };
  }

  get pinching(): boolean {
    return this.pinchAnchor !== null && this.buttonDown;
  }

  pointerMove(x: number, y: number): void {
    this.x = clamp(x, -this.display.width / 2, this.display.width / 2);
    this.y = clamp(y, -this.display.height / 2, this.display.height / 2);
  }

  /** Wheel up (negative deltaY) raises the finger; clamped to [0, hMax]. */
  wheel(deltaY: number): void {
    this.h = clamp(this.h - (deltaY / 100) * this.wheelGain, 0, this.hMax);
  }

  /** Key pair height control: +1 raises, -1 lowers. */
  keyHeight(direction: 1 | -1): void {
    this.h = clamp(this.h + direction * this.keyStep, 0, this.hMax);
  }

  /** Reset key: snap the height gauge to the neutral midpoint. */
  resetHeight(): void {
    this.h = this.hMid;
  }

  setButton(down: boolean): void {
    this.buttonDown = down;
  }

  /** Pinch modifier: anchors the mirror point at the current pointer. */
  setPinchModifier(held: boolean): void {
    this.pinchAnchor = held ? { x: this.x, y: this.y } : null;
  }

  sample(): InputSample {
    const touches: Touch[] = [];
    if (this.buttonDown) {
      touches.push({ id: 0, x: this.x, y: this.y });
      if (this.pinchAnchor !== null) {
        const mx = clamp(2 * this.pinchAnchor.x - this.x,
                         -this.display.width / 2, this.display.width / 2);
        const my = clamp(2 * this.pinchAnchor.y - this.y,
                         -this.display.height / 2, this.display.height / 2);
        touches.push({ id: 1, x: mx, y: my });
      }
    }
    return { x: this.x, y: this.y, h: this.h, touches };
  }
}

export function sampleEquals(a: InputSample, b: InputSample): boolean {
  if (a.x !== b.x || a.y !== b.y || a.h !== b.h) return false;
  if (a.touches.length !== b.touches.length) return false;
  for (let i = 0; i < a.touches.length; i++) {
    const ta = a.touches[i];
    const tb = b.touches[i];
    if (ta.id !== tb.id || ta.x !== tb.x || ta.y !== tb.y) return false;
  }
  return true;
}
