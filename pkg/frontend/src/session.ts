import type { HelloMessage, ServerMessage, StateMessage } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

// The view must carry a staleness badge once this many server ticks pass
// without a state message.
export const STALE_AFTER_TICKS = 3;

const ZEROS = [0, 0, 0, 0, 0, 0];

// Everything the renderer reads lives here; socket callbacks only enqueue
// into this object, drawing happens on animation frames.
export class UiSessionState {
  status: ConnectionStatus = "connecting";
  hello: HelloMessage | null = null;
  state: StateMessage | null = null;
  lastError = "";
  badFrames = 0;

  // wrench visualization invariant: live drag while active, otherwise the
  // last command actually sent
  liveDrag: number[] | null = null;
  lastSent: number[] = ZEROS.slice();

  private lastStateAtMs = Infinity;

  onOpen(): void {
    this.status = "open";
  }

  onClose(): void {
    this.status = "closed";
  }

  onMessage(msg: ServerMessage | null, nowMs: number): void {
    if (msg === null) {
      this.badFrames += 1; // badge + skip frame, never render garbage
      return;
    }
    if (msg.type === "hello") {
      this.hello = msg;
    } else if (msg.type === "state") {
      this.state = msg;
      this.lastStateAtMs = nowMs;
    } else {
      this.lastError = msg.message;
    }
  }

  // True once STALE_AFTER_TICKS tick periods elapse with no fresh state.
  isStale(nowMs: number): boolean {
    if (this.hello === null || this.state === null) return false; // nothing shown yet
    const tickMs = 1000 / this.hello.control_rate;
    return nowMs - this.lastStateAtMs > STALE_AFTER_TICKS * tickMs;
  }

  renderedWrench(): number[] {
    return this.liveDrag ?? this.lastSent;
  }

  envelope(): number[] {
    return this.hello ? this.hello.envelope : ZEROS;
  }

  limits(): number[] {
    if (this.state) return this.state.limits;
    return this.hello ? this.hello.limits : ZEROS;
  }
}
