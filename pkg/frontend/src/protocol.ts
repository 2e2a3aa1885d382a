// Teleop wire schema v1. This file is the only coupling to the server:
// everything here mirrors the documented websocket messages field for field.

export const PROTOCOL_VERSION = 1;

export interface HelloMessage {
  type: "hello";
  v: 1;
  envelope: number[]; // per-axis |wrench| cap the server will accept [6]
  limits: number[]; // controller wrench limits [6]
  control_rate: number; // Hz, one state message per tick
  tick: number;
}

export interface StateMessage {
  type: "state";
  v: 1;
  tick: number;
  t: number; // sim time, s
  pose: { position: number[]; orientation_wxyz: number[] };
  compensated_wrench: number[]; // [fx fy fz tx ty tz]
  per_axis_margin: number[]; // server-computed h_i, cross-checkable
  limits: number[];
  slack: number;
  qp_status: string;
}

export interface ErrorMessage {
  type: "error";
  v: 1;
  message: string;
}

export type ServerMessage = HelloMessage | StateMessage | ErrorMessage;

export type CommandKind = "apply_wrench" | "set_target" | "set_limits" | "pause" | "reset";

export interface CommandMessage {
  type: "command";
  v: 1;
  kind: CommandKind;
  payload: Record<string, unknown>;
  client_id: string;
  sequence_number: number;
}

function finiteVector(x: unknown, n: number): x is number[] {
  return Array.isArray(x) && x.length === n && x.every((v) => Number.isFinite(v));
}

// Parse one incoming frame; anything malformed becomes null and the caller
// shows a badge and skips the frame instead of rendering garbage.
export function parseServerMessage(raw: string): ServerMessage | null {
  let data: any;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null || data.v !== PROTOCOL_VERSION) return null;
  if (data.type === "hello") {
    if (!finiteVector(data.envelope, 6) || !finiteVector(data.limits, 6)) return null;
    if (!Number.isFinite(data.control_rate) || data.control_rate <= 0) return null;
    if (!Number.isInteger(data.tick)) return null;
    return data as HelloMessage;
  }
  if (data.type === "state") {
    if (!Number.isInteger(data.tick) || !Number.isFinite(data.t)) return null;
    const pose = data.pose;
    if (typeof pose !== "object" || pose === null) return null;
    if (!finiteVector(pose.position, 3) || !finiteVector(pose.orientation_wxyz, 4)) return null;
    if (!finiteVector(data.compensated_wrench, 6)) return null;
    if (!finiteVector(data.per_axis_margin, 6) || !finiteVector(data.limits, 6)) return null;
    if (!Number.isFinite(data.slack) || typeof data.qp_status !== "string") return null;
    return data as StateMessage;
  }
  if (data.type === "error") {
    return typeof data.message === "string" ? (data as ErrorMessage) : null;
  }
  return null;
}

export function commandMessage(
  kind: CommandKind,
  payload: Record<string, unknown>,
  clientId: string,
  sequence: number,
): CommandMessage {
  return {
    type: "command",
    v: PROTOCOL_VERSION,
    kind,
    payload,
    client_id: clientId,
    sequence_number: sequence,
  };
}
