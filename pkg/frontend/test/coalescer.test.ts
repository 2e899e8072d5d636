import { describe, expect, it } from "vitest";

import { FrameCoalescer } from "../src/coalescer.js";
import type { InputSample } from "../src/protocol.js";

function sample(h: number): InputSample {
  return { x: 0, y: 0, h, touches: [] };
}

function manualFrames() {
  const queue: Array<() => void> = [];
  return {
    schedule: (f: () => void) => queue.push(f),
    frame: () => { queue.splice(0).forEach((f) => f()); },
  };
}

describe("frame coalescer", () => {
  it("sends only the latest sample of a frame", () => {
    const sent: Array<[number, InputSample]> = [];
    const frames = manualFrames();
    const c = new FrameCoalescer((t, s) => sent.push([t, s]), frames.schedule);
    c.enqueue(sample(0.01));
    c.enqueue(sample(0.02));
    c.enqueue(sample(0.03));
    frames.frame();
    expect(sent.length).toBe(1);
    expect(sent[0][1].h).toBe(0.03);
  });

  it("stamps strictly increasing tick indices, never reordering", () => {
    const sent: number[] = [];
    const frames = manualFrames();
    const c = new FrameCoalescer((t) => sent.push(t), frames.schedule);
    for (let i = 0; i < 5; i++) {
      c.enqueue(sample(0.01 + i * 0.001));
      frames.frame();
    }
    expect(sent).toEqual([0, 1, 2, 3, 4]);
  });

  it("sends nothing when the sample equals the last sent one", () => {
    const sent: number[] = [];
    const frames = manualFrames();
    const c = new FrameCoalescer((t) => sent.push(t), frames.schedule);
    c.enqueue(sample(0.02));
    frames.frame();
    c.enqueue(sample(0.02));  // identical: server hold covers it
    frames.frame();
    expect(sent).toEqual([0]);
    c.enqueue(sample(0.03));
    frames.frame();
    expect(sent).toEqual([0, 1]);
  });

  it("idle frames do not send", () => {
    const sent: number[] = [];
    const frames = manualFrames();
    const c = new FrameCoalescer((t) => sent.push(t), frames.schedule);
    frames.frame();
    frames.frame();
    expect(sent).toEqual([]);
  });
});
