/**
 * Coalesce input into one protocol message per animation frame.
 *
 * Pointer/wheel events can arrive far faster than frames; only the latest
 * sample of a frame is sent, stamped with a strictly increasing tick index.
 * Intermediate samples are dropped, never reordered, and frames whose sample
 * equals the previously sent one send nothing at all (the server holds the
 * last input anyway).
 */

import type { InputSample } from "./protocol.js";
import { sampleEquals } from "./input.js";

type Scheduler = (flush: () => void) => void;

export class FrameCoalescer {
  private pending: InputSample | null = null;
  private lastSent: InputSample | null = null;
  private scheduled = false;
  private tick = 0;

  constructor(
    private readonly send: (tick: number, sample: InputSample) => void,
    private readonly schedule: Scheduler = (f) => requestAnimationFrame(f),
  ) {}

  get nextTick(): number {
    return this.tick;
  }

  enqueue(sample: InputSample): void {
    this.pending = sample;
    if (this.scheduled) return;
    this.scheduled = true;
    this.schedule(() => this.flush());
  }

  private flush(): void {
    this.scheduled = false;
    const sample = this.pending;
    this.pending = null;
    if (sample === null) return;
    if (this.lastSent !== null && sampleEquals(sample, this.lastSent)) return;
    this.lastSent = sample;
    this.send(this.tick++, sample);
  }
}
