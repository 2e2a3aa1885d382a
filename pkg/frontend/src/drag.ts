import { CommandMessage, commandMessage } from "./protocol.js";

export type DragMode = "force" | "torque";

export interface DragGains {
  newtonsPerPixel: number;
  torquePerPixel: number;
}

// Screen-plane drag -> wrench, linear map. Force mode: right = +x, up = +z.
// Torque mode (modifier key held): horizontal drag turns about z, vertical
// about y; drawn as arc arrows.
export function dragToWrench(dx: number, dy: number, mode: DragMode, gains: DragGains): number[] {
  const w = [0, 0, 0, 0, 0, 0];
  if (mode === "force") {
    w[0] = dx * gains.newtonsPerPixel + 0;
    w[2] = -dy * gains.newtonsPerPixel + 0; // screen y grows downward; +0 kills -0
  } else {
    w[5] = dx * gains.torquePerPixel + 0;
    w[4] = -dy * gains.torquePerPixel + 0;
  }
  return w;
}

// The exact clamp the server applies to apply_wrench payloads; the envelope
// comes from the hello message, so client and server can never disagree.
export function clampWrench(wrench: number[], envelope: number[]): number[] {
  return wrench.map((w, i) => Math.min(envelope[i], Math.max(-envelope[i], w)));
}

// Monotone sequence numbers, shared by every command the client sends and
// kept across reconnects so the server's per-client dedupe never replays us.
export class CommandSource {
  readonly clientId: string;
  private seq = 0;

  constructor(clientId: string) {
    this.clientId = clientId;
  }

  next(kind: CommandMessage["kind"], payload: Record<string, unknown>): CommandMessage {
    this.seq += 1;
    return commandMessage(kind, payload, this.clientId, this.seq);
  }
}

// Rate gate for the drag stream: at most one apply_wrench per server tick,
// and a release always produces one final zero-wrench command.
export class WrenchStream {
  private lastTick = -1;
  private releaseQueued = false;

  onRelease(): void {
    this.releaseQueued = true;
  }

  // Called once per received state message with the live drag wrench
  // (null when no drag is active). Returns the wrench to send, or null.
  wrenchFor(tick: number, liveWrench: number[] | null, envelope: number[]): number[] | null {
    if (tick === this.lastTick) return null;
    if (liveWrench !== null) {
      this.lastTick = tick;
      this.releaseQueued = false; // a new grab supersedes the pending zero
      return clampWrench(liveWrench, envelope);
    }
    if (this.releaseQueued) {
      this.lastTick = tick;
      this.releaseQueued = false;
      return [0, 0, 0, 0, 0, 0];
    }
    return null;
  }
}
