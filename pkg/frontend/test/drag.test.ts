import { describe, expect, it } from "vitest";

import { clampWrench, CommandSource, dragToWrench, WrenchStream } from "../src/drag.js";
import { cannedHello } from "./helpers.js";

const GAINS = { newtonsPerPixel: 0.1, torquePerPixel: 0.01 };

describe("drag to wrench", () => {
  it("maps pixels linearly: 100 px right at 0.1 N/px is fx = +10 N", () => {
    expect(dragToWrench(100, 0, "force", GAINS)).toEqual([10, 0, 0, 0, 0, 0]);
  });

  it("screen up is +z, screen right in torque mode turns about z", () => {
    expect(dragToWrench(0, -50, "force", GAINS)).toEqual([0, 0, 5, 0, 0, 0]);
    expect(dragToWrench(200, 0, "torque", GAINS)).toEqual([0, 0, 0, 0, 0, 2]);
  });

  it("no drag means zero wrench", () => {
    expect(dragToWrench(0, 0, "force", GAINS)).toEqual([0, 0, 0, 0, 0, 0]);
  });
});

describe("client-side clamp", () => {
  it("equals the server-advertised envelope exactly", () => {
    const envelope = cannedHello().envelope;
    // a wild drag on every axis clamps to +-envelope, element for element
    const big = [1e4, -1e4, 300, -300, 7, -7];
    const clamped = clampWrench(big, envelope);
    expect(clamped).toEqual([20, -20, 20, -6, 6, -6]);
    clamped.forEach((w, i) => expect(Math.abs(w)).toBeLessThanOrEqual(envelope[i]));
    // boundary values pass through untouched
    expect(clampWrench(envelope, envelope)).toEqual(envelope);
    expect(clampWrench(envelope.map((v) => -v), envelope)).toEqual(envelope.map((v) => -v));
  });

  it("leaves interior wrenches alone", () => {
    const envelope = cannedHello().envelope;
    const w = [1.5, -2, 0, 0.25, -0.5, 0];
    expect(clampWrench(w, envelope)).toEqual(w);
  });
});

describe("wrench stream gating", () => {
  const envelope = cannedHello().envelope;

  it("emits at most one apply_wrench per server tick", () => {
    const stream = new WrenchStream();
    const live = [5, 0, 0, 0, 0, 0];
    expect(stream.wrenchFor(7, live, envelope)).toEqual(live);
    expect(stream.wrenchFor(7, live, envelope)).toBeNull(); // same tick again
    expect(stream.wrenchFor(8, live, envelope)).toEqual(live);
  });

  it("emits one zero wrench after release", () => {
    const stream = new WrenchStream();
    expect(stream.wrenchFor(1, [5, 0, 0, 0, 0, 0], envelope)).not.toBeNull();
    stream.onRelease();
    expect(stream.wrenchFor(2, null, envelope)).toEqual([0, 0, 0, 0, 0, 0]);
    expect(stream.wrenchFor(3, null, envelope)).toBeNull(); // nothing more
  });

  it("stays silent when idle", () => {
    const stream = new WrenchStream();
    expect(stream.wrenchFor(1, null, envelope)).toBeNull();
  });

  it("clamps the live drag before sending", () => {
    const stream = new WrenchStream();
    expect(stream.wrenchFor(1, [1e4, 0, 0, 0, 0, 0], envelope)![0]).toBe(envelope[0]);
  });
});

describe("command source", () => {
  it("issues strictly increasing sequence numbers across reconnects", () => {
    const source = new CommandSource("ui-test");
    const seqs = [
      source.next("apply_wrench", { wrench: [0, 0, 0, 0, 0, 0] }).sequence_number,
      source.next("pause", { paused: true }).sequence_number,
      // a reconnect does not recreate the source, so numbering continues
      source.next("apply_wrench", { wrench: [1, 0, 0, 0, 0, 0] }).sequence_number,
    ];
    expect(seqs).toEqual([1, 2, 3]);
    for (let i = 1; i < seqs.length; i++) expect(seqs[i]).toBeGreaterThan(seqs[i - 1]);
  });

  it("stamps every command with the same client id and schema version", () => {
    const source = new CommandSource("ui-test");
    const cmd = source.next("set_limits", { limits: [1, 1, 1, 1, 1, 1] });
    expect(cmd).toMatchObject({ type: "command", v: 1, kind: "set_limits", client_id: "ui-test" });
  });
});
