import { describe, expect, it } from "vitest";

import { DEFAULT_STATE, parseState, recommendParams, serializeState } from "../src/state.js";

describe("exploration state", () => {
  it("round-trips through the URL fragment", () => {
    const state = { user: "u0003", theta: 0.25, delta: 1.75, seed: 42, count: 7 };
    const parsed = parseState(`#${serializeState(state)}`);
    expect(parsed).toEqual(state);
    // serializing again is stable, so reloading reproduces the identical view
    expect(serializeState(parsed)).toBe(serializeState(state));
  });

  it("applies defaults for a missing fragment", () => {
    expect(parseState("")).toEqual(DEFAULT_STATE);
    expect(parseState("#")).toEqual(DEFAULT_STATE);
  });

  it("rejects negative tolerances back to defaults", () => {
    const parsed = parseState("#theta=-1&delta=-0.5");
    expect(parsed.theta).toBe(DEFAULT_STATE.theta);
    expect(parsed.delta).toBe(DEFAULT_STATE.delta);
  });

  it("keeps the seed an integer", () => {
    expect(parseState("#seed=7.5").seed).toBe(DEFAULT_STATE.seed);
    expect(parseState("#seed=9").seed).toBe(9);
  });

  it("derives request parameters only when a user is selected", () => {
    expect(recommendParams({ ...DEFAULT_STATE, user: null })).toBeNull();
    const params = recommendParams({ user: "u1", theta: 0.1, delta: 2, seed: 3, count: 4 });
    expect(params).toEqual({ user: "u1", theta: 0.1, delta: 2, seed: 3, count: 4 });
  });

  it("encodes unusual user ids safely", () => {
    const state = { ...DEFAULT_STATE, user: "user with spaces&x=1" };
    expect(parseState(`#${serializeState(state)}`).user).toBe(state.user);
  });
});
