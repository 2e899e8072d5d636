/**
 * Wire protocol types and codecs, mirroring docs/SCHEMA.md exactly.
 * Every message is one JSON object; over WebSocket, one per text frame.
 */

export const PROTOCOL_SCHEMA = 1;

export interface Touch {
  id: number;
  x: number;
  y: number;
}

export interface InputSample {
  x: number;
  y: number;
  h: number;
  touches: Touch[];
}

export interface Descriptor {
  technique: string;
  map: string;
  seed: number;
  tick_rate: number;
  dwell_s?: number;
  params?: Record<string, unknown>;
  session?: string;
}

export interface TargetView {
  index: number;
  x: number;
  y: number;
  on_screen: boolean;
  active: boolean;
  selected: boolean;
}

export interface StateSnapshot {
  type: "state";
  tick: number;
  time: number;
  viewport: { cx: number; cy: number; scale: number };
  cursor: { x: number; y: number };
  dwell_s: number;
  dwell_required_s: number;
  active_target: number;
  elapsed_s: number;
  target_elapsed_s: number;
  errors: { first_miss: number; wrong_target: number };
  done: boolean;
  targets: TargetView[];
}

export interface StartedMessage {
  type: "started";
  session: string;
  technique: string;
  seed: number;
  tick_rate: number;
  dwell_required_s: number;
  map: { name: string; width: number; height: number };
  display: { width: number; height: number };
  params: Record<string, number | string>;
  log: string;
}

export interface EventMessage {
  type: "event";
  tick: number;
  event: "selected" | "first-miss" | "wrong-target";
  target: number;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export interface HelloMessage {
  type: "hello";
  schema: number;
  server?: string;
  version?: string;
}

export interface CompleteMessage {
  type: "session-complete";
  session: string;
  metrics: Record<string, unknown>;
}

export type ServerMessage =
  | HelloMessage
  | StartedMessage
  | StateSnapshot
  | EventMessage
  | ErrorMessage
  | CompleteMessage;

export function encodeHello(client: string): string {
  return JSON.stringify({ type: "hello", schema: PROTOCOL_SCHEMA, client });
}

export function encodeStart(descriptor: Descriptor): string {
  return JSON.stringify({ type: "start", descriptor });
}

/** Inputs carry a strictly increasing client tick; touches as [id,x,y]. */
export function encodeInput(tick: number, sample: InputSample): string {
  return JSON.stringify({
    type: "input",
    tick,
    finger: { x: sample.x, y: sample.y, h: sample.h },
    touches: sample.touches.map((t) => [t.id, t.x, t.y]),
  });
}

export function encodeEnd(): string {
  return JSON.stringify({ type: "end" });
}

function isNum(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Parse a server line; throws on anything that violates the schema. */
export function decodeServerMessage(line: string): ServerMessage {
  const obj = JSON.parse(line);
  if (typeof obj !== "object" || obj === null || typeof obj.type !== "string") {
    throw new Error("not a protocol message");
  }
  switch (obj.type) {
    case "hello":
      if (!isNum(obj.schema)) throw new Error("hello without schema");
      return obj as HelloMessage;
    case "started":
      if (typeof obj.session !== "string" || !isNum(obj.tick_rate) ||
          !obj.map || !isNum(obj.map.width) || !obj.display ||
          !isNum(obj.display.width)) {
        throw new Error("malformed started message");
      }
      return obj as StartedMessage;
    case "state":
      if (!obj.viewport || !isNum(obj.viewport.cx) ||
          !isNum(obj.viewport.cy) || !isNum(obj.viewport.scale) ||
          !isNum(obj.tick) || !Array.isArray(obj.targets)) {
        throw new Error("malformed state snapshot");
      }
      return obj as StateSnapshot;
    case "event":
      if (!isNum(obj.target) || typeof obj.event !== "string") {
        throw new Error("malformed event");
      }
      return obj as EventMessage;
    case "error":
      if (typeof obj.message !== "string") throw new Error("malformed error");
      return obj as ErrorMessage;
    case "session-complete":
      return obj as CompleteMessage;
    default:
      throw new Error(`unknown message type ${obj.type}`);
  }
}
