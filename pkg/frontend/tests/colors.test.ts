import { describe, expect, it } from "vitest";

import {
  CONSERVATIVE_COLOR,
  LIBERAL_COLOR,
  MUTED_COLOR,
  NEUTRAL_BAND,
  NEUTRAL_COLOR,
  ideologyColor,
  sourceColor,
} from "../src/colors.js";

describe("ideology color bands", () => {
  it("uses thirds as the default band boundaries", () => {
    expect(NEUTRAL_BAND[0]).toBeCloseTo(1 / 3, 12);
    expect(NEUTRAL_BAND[1]).toBeCloseTo(2 / 3, 12);
  });

  it("maps the bands to blue/green/red", () => {
    expect(ideologyColor(0.0)).toBe(LIBERAL_COLOR);
    expect(ideologyColor(0.32)).toBe(LIBERAL_COLOR);
    expect(ideologyColor(0.5)).toBe(NEUTRAL_COLOR);
    expect(ideologyColor(0.68)).toBe(CONSERVATIVE_COLOR);
    expect(ideologyColor(1.0)).toBe(CONSERVATIVE_COLOR);
  });

  it("band boundaries belong to the neutral band", () => {
    expect(ideologyColor(NEUTRAL_BAND[0])).toBe(NEUTRAL_COLOR);
    expect(ideologyColor(NEUTRAL_BAND[1])).toBe(NEUTRAL_COLOR);
  });

  it("mutes sources the user never consumed", () => {
    expect(sourceColor(0.9, false)).toBe(MUTED_COLOR);
    expect(sourceColor(0.9, true)).toBe(CONSERVATIVE_COLOR);
  });
});
