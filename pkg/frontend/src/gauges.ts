import type { StateMessage } from "./protocol.js";

// Per-axis safety margin h_i = (w_i^2 - limit_i^2) / 2: negative inside the
// allowed band, exactly zero on the boundary, positive in violation. The
// gauges display this value, computed client-side from the streamed wrench
// so a disagreement with the server's own margins is detectable.
export function axisMargin(wrench: number, limit: number): number {
  return 0.5 * (wrench * wrench - limit * limit);
}

export function margins(state: StateMessage): number[] {
  return state.compensated_wrench.map((w, i) => axisMargin(w, state.limits[i]));
}

export type GaugeZone = "safe" | "boundary" | "violation";

// Color thresholds: safe well inside, boundary once |w| reaches 95% of the
// limit, violation for any h > 0.
export function gaugeZone(h: number, limit: number): GaugeZone {
  if (h > 0) return "violation";
  const boundary = axisMargin(0.95 * limit, limit); // still negative
  return h >= boundary ? "boundary" : "safe";
}

// Bar fill for drawing: 0 at zero wrench, 1 exactly at the limit, >1 beyond.
// Inverts h -> |w|/limit so the pixel mapping stays linear in force.
export function gaugeFraction(h: number, limit: number): number {
  if (limit <= 0) return h > 0 ? Infinity : 0;
  const ratio2 = 1 + (2 * h) / (limit * limit); // (|w|/limit)^2
  return Math.sqrt(Math.max(0, ratio2));
}

export const AXIS_LABELS = ["fx", "fy", "fz", "tx", "ty", "tz"] as const;
