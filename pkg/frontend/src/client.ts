/**
 * WebSocket session client: connects, starts a session from a descriptor,
 * forwards coalesced input samples, and keeps only the latest snapshot.
 *
 * The socket factory is injectable so tests can run the client against the
 * real server from node (via the `ws` package) or against a fake.
 */

import {
  CompleteMessage,
  Descriptor,
  EventMessage,
  StartedMessage,
  StateSnapshot,
  decodeServerMessage,
  encodeEnd,
  encodeHello,
  encodeInput,
  encodeStart,
} from "./protocol.js";
import type { InputSample } from "./protocol.js";

/** The sliver of the WebSocket API the client uses. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export interface ClientHooks {
  onStarted?(msg: StartedMessage): void;
  onSnapshot?(msg: StateSnapshot): void;
  onEvent?(msg: EventMessage): void;
  onComplete?(msg: CompleteMessage): void;
  onProtocolError?(message: string): void;
  onConnection?(connected: boolean): void;
}

export class SessionClient {
  started: StartedMessage | null = null;
  snapshot: StateSnapshot | null = null;
  connected = false;
  completed: CompleteMessage | null = null;

  private socket: SocketLike | null = null;

  constructor(private readonly hooks: ClientHooks = {}) {}

  connect(makeSocket: () => SocketLike, descriptor: Descriptor): void {
    const sock = makeSocket();
    this.socket = sock;
    sock.onopen = () => {
      this.connected = true;
      this.hooks.onConnection?.(true);
      sock.send(encodeHello("hovernav-web"));
      sock.send(encodeStart(descriptor));
    };
    sock.onmessage = (ev) => this.handleLine(String(ev.data));
    sock.onclose = () => {
      this.connected = false;
      this.hooks.onConnection?.(false);
    };
    sock.onerror = () => {
      this.connected = false;
      this.hooks.onConnection?.(false);
    };
  }

  handleLine(line: string): void {
    let msg;
    try {
      msg = decodeServerMessage(line);
    } catch (err) {
      this.hooks.onProtocolError?.(String(err));
      return;
    }
    switch (msg.type) {
      case "started":
        this.started = msg;
        this.hooks.onStarted?.(msg);
        break;
      case "state":
        // snapshots are authoritative and strictly ordered; keep the latest
        if (this.snapshot === null || msg.tick >= this.snapshot.tick) {
          this.snapshot = msg;
          this.hooks.onSnapshot?.(msg);
        }
        break;
      case "event":
        this.hooks.onEvent?.(msg);
        break;
      case "session-complete":
        this.completed = msg;
        this.hooks.onComplete?.(msg);
        break;
      case "error":
        this.hooks.onProtocolError?.(msg.message);
        break;
      case "hello":
        break;
    }
  }

  sendInput(tick: number, sample: InputSample): void {
    if (this.socket !== null && this.connected) {
      this.socket.send(encodeInput(tick, sample));
    }
  }

  end(): void {
    if (this.socket !== null && this.connected) {
      this.socket.send(encodeEnd());
    }
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
  }
}
