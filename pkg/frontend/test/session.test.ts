import { describe, expect, it } from "vitest";

import { STALE_AFTER_TICKS, UiSessionState } from "../src/session.js";
import { cannedHello, cannedState } from "./helpers.js";

describe("session state", () => {
  it("flags staleness only after three missed ticks", () => {
    const s = new UiSessionState();
    s.onMessage(cannedHello(), 0); // 30 Hz -> 33.3 ms per tick
    s.onMessage(cannedState(), 1000);
    const tickMs = 1000 / 30;
    expect(s.isStale(1000 + 2 * tickMs)).toBe(false);
    expect(s.isStale(1000 + STALE_AFTER_TICKS * tickMs)).toBe(false); // boundary: third tick barely late
    expect(s.isStale(1000 + 3.5 * tickMs)).toBe(true);
    // a fresh state clears it
    s.onMessage(cannedState({ tick: 43 }), 1200);
    expect(s.isStale(1210)).toBe(false);
  });

  it("never reports staleness before anything was displayed", () => {
    const s = new UiSessionState();
    expect(s.isStale(1e9)).toBe(false);
    s.onMessage(cannedHello(), 0);
    expect(s.isStale(1e9)).toBe(false); // hello alone renders no state
  });

  it("renders the live drag while dragging, else the last sent command", () => {
    const s = new UiSessionState();
    expect(s.renderedWrench()).toEqual([0, 0, 0, 0, 0, 0]);
    s.lastSent = [2, 0, 0, 0, 0, 0];
    expect(s.renderedWrench()).toEqual([2, 0, 0, 0, 0, 0]);
    s.liveDrag = [5, 0, 1, 0, 0, 0];
    expect(s.renderedWrench()).toEqual([5, 0, 1, 0, 0, 0]);
    s.liveDrag = null; // release
    expect(s.renderedWrench()).toEqual([2, 0, 0, 0, 0, 0]);
  });

  it("counts malformed frames instead of rendering them", () => {
    const s = new UiSessionState();
    s.onMessage(cannedState(), 0);
    const before = s.state;
    s.onMessage(null, 1);
    expect(s.badFrames).toBe(1);
    expect(s.state).toBe(before); // frame skipped, old state kept
  });

  it("keeps server errors and limits handy for the renderer", () => {
    const s = new UiSessionState();
    s.onMessage(cannedHello(), 0);
    expect(s.envelope()).toEqual([20, 20, 20, 6, 6, 6]);
    expect(s.limits()).toEqual([10, 10, 10, 3, 3, 3]);
    // state limits win once streaming (set_limits may have changed them)
    s.onMessage(cannedState({ limits: [9, 9, 9, 3, 3, 3] }), 10);
    expect(s.limits()).toEqual([9, 9, 9, 3, 3, 3]);
    s.onMessage({ type: "error", v: 1, message: "wrench must be finite" }, 20);
    expect(s.lastError).toBe("wrench must be finite");
    expect(s.state!.tick).toBe(42); // errors do not clobber state
  });
});
