import type { HelloMessage, StateMessage } from "../src/protocol.js";

export function cannedState(overrides: Partial<StateMessage> = {}): StateMessage {
  return {
    type: "state",
    v: 1,
    tick: 42,
    t: 1.4,
    pose: { position: [0.5, -0.3, 1.0], orientation_wxyz: [1, 0, 0, 0] },
    compensated_wrench: [0, 0, 0, 0, 0, 0],
    per_axis_margin: [-312.5, -312.5, -312.5, -50, -50, -50],
    limits: [25, 25, 25, 10, 10, 10],
    slack: 0,
    qp_status: "optimal",
    ...overrides,
  };
}

export function cannedHello(overrides: Partial<HelloMessage> = {}): HelloMessage {
  return {
    type: "hello",
    v: 1,
    envelope: [20, 20, 20, 6, 6, 6],
    limits: [10, 10, 10, 3, 3, 3],
    control_rate: 30,
    tick: 0,
    ...overrides,
  };
}
