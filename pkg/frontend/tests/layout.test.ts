import { describe, expect, it } from "vitest";

import {
  boxRect,
  nodeRadius,
  popularityScale,
  projectX,
  projectY,
  MIN_RADIUS,
  MAX_RADIUS,
} from "../src/layout.js";
import type { SpaceDoc } from "../src/types.js";

const VP = { width: 900, height: 520, margin: 40 };

function docWithPopularities(values: number[]): SpaceDoc {
  return {
    users: [],
    sources: values.map((popularity, i) => ({
      id: `s${i}`, ideology: 0.5, popularity, cluster: 0, degenerate: false,
    })),
    edges: [],
  };
}

describe("projection", () => {
  it("is affine in the leaning score", () => {
    // midpoint maps to midpoint, the defining affine property
    for (const [a, b] of [[0, 1], [0.2, 0.9], [0.4, 0.41]] as const) {
      const mid = projectX((a + b) / 2, VP);
      expect(mid).toBeCloseTo((projectX(a, VP) + projectX(b, VP)) / 2, 10);
    }
    expect(projectX(0, VP)).toBe(VP.margin);
    expect(projectX(1, VP)).toBe(VP.width - VP.margin);
  });

  it("is affine in popularity on a linear scale", () => {
    const scale = popularityScale(docWithPopularities([1, 2, 3, 4]));
    expect(scale.kind).toBe("linear");
    const mid = projectY(2.5, scale, VP);
    expect(mid).toBeCloseTo((projectY(2, scale, VP) + projectY(3, scale, VP)) / 2, 10);
  });

  it("larger popularity renders higher (smaller y)", () => {
    const scale = popularityScale(docWithPopularities([1, 10]));
    expect(projectY(10, scale, VP)).toBeLessThan(projectY(1, scale, VP));
  });
});

describe("popularity scale", () => {
  it("stays linear within two decades", () => {
    expect(popularityScale(docWithPopularities([1, 50])).kind).toBe("linear");
  });

  it("switches to log beyond two decades", () => {
    expect(popularityScale(docWithPopularities([0.5, 200])).kind).toBe("log");
  });

  it("is affine in log10 when logged", () => {
    const scale = popularityScale(docWithPopularities([0.1, 1500]));
    expect(scale.kind).toBe("log");
    const mid = projectY(Math.sqrt(10 * 100), scale, VP); // log midpoint of 10 and 100
    expect(mid).toBeCloseTo((projectY(10, scale, VP) + projectY(100, scale, VP)) / 2, 8);
  });
});

describe("node radius", () => {
  it("grows with engagement weight up to the cap", () => {
    expect(nodeRadius(0, 10)).toBe(MIN_RADIUS);
    expect(nodeRadius(10, 10)).toBe(MAX_RADIUS);
    expect(nodeRadius(5, 10)).toBeGreaterThan(nodeRadius(2, 10));
  });
});

describe("tolerance box", () => {
  const scale = popularityScale(docWithPopularities([0, 4]));

  it("grows monotonically with theta", () => {
    let previous = -1;
    for (const theta of [0, 0.1, 0.2, 0.4]) {
      const rect = boxRect(0.5, 2, theta, 1, scale, VP);
      const area = rect.width * rect.height;
      expect(area).toBeGreaterThanOrEqual(previous);
      previous = area;
    }
  });

  it("collapses to zero area at zero tolerances", () => {
    const rect = boxRect(0.5, 2, 0, 0, scale, VP);
    expect(rect.width).toBe(0);
    expect(rect.height).toBe(0);
  });

  it("clips the leaning range to [0, 1]", () => {
    const rect = boxRect(0.05, 2, 0.5, 1, scale, VP);
    expect(rect.x).toBe(projectX(0, VP));
  });
});
