// Screen placement. Positions are pointwise transforms of the two payload
// scores and nothing else: x is affine in the leaning score, y is affine in
// popularity (or in log10 popularity when the exported range spans more
// than two orders of magnitude; the raw value still shows on hover). No
// layout algorithm ever moves a point.

import type { SpaceDoc } from "./types.js";

export interface Viewport {
  width: number;
  height: number;
  margin: number;
}

export const LOG_SCALE_DECADES = 2;

export interface PopularityScale {
  kind: "linear" | "log";
  lo: number;
  hi: number;
}

function decades(values: number[]): number {
  const positive = values.filter((v) => v > 0);
  if (positive.length < 2) return 0;
  const lo = Math.min(...positive);
  const hi = Math.max(...positive);
  return Math.log10(hi / lo);
}

export function popularityScale(doc: SpaceDoc): PopularityScale {
  const values = [
    ...doc.users.map((u) => u.popularity),
    ...doc.sources.map((s) => s.popularity),
  ];
  const useLog = decades(values) > LOG_SCALE_DECADES;
  const transformed = useLog
    ? values.filter((v) => v > 0).map(Math.log10)
    : values;
  const lo = transformed.length ? Math.min(...transformed) : 0;
  const hi = transformed.length ? Math.max(...transformed) : 1;
  return { kind: useLog ? "log" : "linear", lo, hi: hi > lo ? hi : lo + 1 };
}

function popularityCoord(value: number, scale: PopularityScale): number {
  if (scale.kind === "log") {
    // zero-popularity entities pin to the bottom of the log axis
    return value > 0 ? Math.log10(value) : scale.lo;
  }
  return value;
}

export function projectX(ideology: number, vp: Viewport): number {
  return vp.margin + ideology * (vp.width - 2 * vp.margin);
}

export function projectY(popularity: number, scale: PopularityScale, vp: Viewport): number {
  const t = (popularityCoord(popularity, scale) - scale.lo) / (scale.hi - scale.lo);
  return vp.height - vp.margin - t * (vp.height - 2 * vp.margin);
}

export const MIN_RADIUS = 2.5;
export const MAX_RADIUS = 11;

/** Consumed-source marker area grows linearly with the engagement weight. */
export function nodeRadius(weight: number, maxWeight: number): number {
  if (weight <= 0 || maxWeight <= 0) return MIN_RADIUS;
  const area = weight / maxWeight;
  return MIN_RADIUS + Math.sqrt(area) * (MAX_RADIUS - MIN_RADIUS);
}

export interface BoxRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

/** Tolerance box around the user's position, in screen coordinates. */
export function boxRect(
  ideology: number,
  popularity: number,
  theta: number,
  delta: number,
  scale: PopularityScale,
  vp: Viewport,
): BoxRect {
  const x0 = projectX(Math.max(ideology - theta, 0), vp);
  const x1 = projectX(Math.min(ideology + theta, 1), vp);
  const yLow = projectY(Math.max(popularity - delta, 0), scale, vp);
  const yHigh = projectY(popularity + delta, scale, vp);
  return { x: x0, y: yHigh, width: x1 - x0, height: yLow - yHigh };
}
