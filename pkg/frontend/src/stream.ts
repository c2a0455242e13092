// Session event stream. Cursors are 1-based positions in the session's
// public event list; reconnecting with ?cursor=K replays everything after K,
// so a dropped link never loses events and replayed duplicates are skipped.

import { wsBase } from "./config.js";
import type { StreamEvent } from "./types.js";

export interface SocketLike {
  onopen: ((ev: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  close(): void;
}

export interface StreamOptions {
  /** Socket constructor, injectable for tests. Defaults to WebSocket. */
  factory?: (url: string) => SocketLike;
  /** Timer, injectable for tests. Defaults to setTimeout. */
  schedule?: (fn: () => void, delayMs: number) => void;
  baseDelayMs?: number;
  maxDelayMs?: number;
  base?: string;
}

const BASE_DELAY_MS = 500;
const MAX_DELAY_MS = 8000;

export class EventStream {
  lastCursor = 0;
  private socket: SocketLike | null = null;
  private stopped = false;
  private delayMs: number;
  private readonly factory: (url: string) => SocketLike;
  private readonly schedule: (fn: () => void, delayMs: number) => void;
  private readonly baseDelayMs: number;
  private readonly maxDelayMs: number;
  private readonly base: string;

  constructor(
    readonly sessionId: string,
    private readonly onEvent: (event: StreamEvent) => void,
    options: StreamOptions = {},
  ) {
    this.factory = options.factory ?? ((url) => new WebSocket(url) as SocketLike);
    this.schedule = options.schedule ?? ((fn, ms) => setTimeout(fn, ms));
    this.baseDelayMs = options.baseDelayMs ?? BASE_DELAY_MS;
    this.maxDelayMs = options.maxDelayMs ?? MAX_DELAY_MS;
    this.base = options.base ?? wsBase();
    this.delayMs = this.baseDelayMs;
  }

  url(): string {
    const id = encodeURIComponent(this.sessionId);
    return `${this.base}/api/sessions/${id}/events?cursor=${this.lastCursor}`;
  }

  connect(): void {
    if (this.stopped) return;
    const socket = this.factory(this.url());
    this.socket = socket;
    socket.onmessage = (ev) => {
      let event: StreamEvent;
      try {
        event = JSON.parse(String(ev.data));
      } catch {
        return;
      }
      if (typeof event.cursor !== "number" || event.cursor <= this.lastCursor) {
        return; // replayed duplicate after a racy reconnect
      }
      this.lastCursor = event.cursor;
      this.delayMs = this.baseDelayMs; // link proven healthy
      this.onEvent(event);
    };
    socket.onclose = () => {
      this.socket = null;
      if (this.stopped) return;
      const delay = this.delayMs;
      this.delayMs = Math.min(this.delayMs * 2, this.maxDelayMs);
      this.schedule(() => this.connect(), delay);
    };
    socket.onerror = () => {
      // the close handler owns reconnection
    };
  }

  close(): void {
    this.stopped = true;
    this.socket?.close();
    this.socket = null;
  }
}
