// Exploration state lives in the URL fragment so a copied link reproduces
// the identical view and, because the sample seed travels along, the
// identical recommendation draw.

import type { RecommendParams } from "./types.js";

export interface ExplorationState {
  user: string | null;
  theta: number;
  delta: number;
  seed: number;
  count: number;
}

export const DEFAULT_STATE: ExplorationState = {
  user: null,
  theta: 0.2,
  delta: 1.0,
  seed: 0,
  count: 10,
};

export function serializeState(state: ExplorationState): string {
  const params = new URLSearchParams();
  if (state.user !== null) params.set("user", state.user);
  params.set("theta", String(state.theta));
  params.set("delta", String(state.delta));
  params.set("seed", String(state.seed));
  params.set("count", String(state.count));
  return params.toString();
}

function nonNegative(raw: string | null, fallback: number): number {
  if (raw === null) return fallback;
  const value = Number(raw);
  return Number.isFinite(value) && value >= 0 ? value : fallback;
}

export function parseState(fragment: string): ExplorationState {
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const seedRaw = Number(params.get("seed") ?? DEFAULT_STATE.seed);
  const countRaw = Number(params.get("count") ?? DEFAULT_STATE.count);
  return {
    user: params.get("user"),
    theta: nonNegative(params.get("theta"), DEFAULT_STATE.theta),
    delta: nonNegative(params.get("delta"), DEFAULT_STATE.delta),
    seed: Number.isInteger(seedRaw) ? seedRaw : DEFAULT_STATE.seed,
    count: Number.isInteger(countRaw) && countRaw >= 1 ? countRaw : DEFAULT_STATE.count,
  };
}

export function recommendParams(state: ExplorationState): RecommendParams | null {
  if (state.user === null) return null;
  return {
    user: state.user,
    theta: state.theta,
    delta: state.delta,
    count: state.count,
    seed: state.seed,
  };
}
