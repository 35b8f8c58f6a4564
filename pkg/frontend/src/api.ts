// Backend access. Two modes: a live base URL (serving GET /space and
// GET /recommend exactly as the CLI defines them) or a static space
// document, which supports bubble viewing but no re-sampling.

import type { RecommendationDoc, RecommendParams, SpaceDoc } from "./types.js";

export class SchemaError extends Error {
  constructor(path: string, detail: string) {
    super(`space payload invalid at ${path}: ${detail}`);
    this.name = "SchemaError";
  }
}

export class BackendError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "BackendError";
  }
}

function requireNumber(obj: Record<string, unknown>, key: string, path: string): number {
  const v = obj[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(`${path}.${key}`, `expected a finite number, got ${JSON.stringify(v)}`);
  }
  return v;
}

function requireString(obj: Record<string, unknown>, key: string, path: string): string {
  const v = obj[key];
  if (typeof v !== "string" || v.length === 0) {
    throw new SchemaError(`${path}.${key}`, `expected a non-empty string`);
  }
  return v;
}

function requireBoolean(obj: Record<string, unknown>, key: string, path: string): boolean {
  const v = obj[key];
  if (typeof v !== "boolean") throw new SchemaError(`${path}.${key}`, "expected a boolean");
  return v;
}

function asRecord(value: unknown, path: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new SchemaError(path, "expected an object");
  }
  return value as Record<string, unknown>;
}

function requireArray(obj: Record<string, unknown>, key: string, path: string): unknown[] {
  const v = obj[key];
  if (!Array.isArray(v)) throw new SchemaError(`${path}.${key}`, "expected an array");
  return v;
}

/** Validate an untrusted payload into a SpaceDoc; throws SchemaError. */
export function validateSpace(raw: unknown): SpaceDoc {
  const doc = asRecord(raw, "$");
  const users = requireArray(doc, "users", "$").map((entry, i) => {
    const path = `$.users[${i}]`;
    const u = asRecord(entry, path);
    return {
      id: requireString(u, "id", path),
      ideology: requireNumber(u, "ideology", path),
      popularity: requireNumber(u, "popularity", path),
      cluster: requireNumber(u, "cluster", path),
      degenerate: requireBoolean(u, "degenerate", path),
      placed: requireBoolean(u, "placed", path),
    };
  });
  const sources = requireArray(doc, "sources", "$").map((entry, i) => {
    const path = `$.sources[${i}]`;
    const s = asRecord(entry, path);
    return {
      id: requireString(s, "id", path),
      ideology: requireNumber(s, "ideology", path),
      popularity: requireNumber(s, "popularity", path),
      cluster: requireNumber(s, "cluster", path),
      degenerate: requireBoolean(s, "degenerate", path),
    };
  });
  const sourceIds = new Set(sources.map((s) => s.id));
  const userIds = new Set(users.map((u) => u.id));
  const edges = requireArray(doc, "edges", "$").map((entry, i) => {
    const path = `$.edges[${i}]`;
    if (!Array.isArray(entry) || entry.length !== 3) {
      throw new SchemaError(path, "expected [user, source, weight]");
    }
    const [user, source, weight] = entry;
    if (typeof user !== "string" || !userIds.has(user)) {
      throw new SchemaError(path, `unknown user ${JSON.stringify(user)}`);
    }
    if (typeof source !== "string" || !sourceIds.has(source)) {
      throw new SchemaError(path, `unknown source ${JSON.stringify(source)}`);
    }
    if (typeof weight !== "number" || !(weight > 0)) {
      throw new SchemaError(path, "expected a positive weight");
    }
    return [user, source, weight] as [string, string, number];
  });
  return { users, sources, edges };
}

export function validateRecommendation(raw: unknown): RecommendationDoc {
  const doc = asRecord(raw, "$");
  const box = asRecord(doc["box"], "$.box");
  const items = requireArray(doc, "items", "$").map((entry, i) => {
    const path = `$.items[${i}]`;
    const item = asRecord(entry, path);
    return {
      source_id: requireString(item, "source_id", path),
      ideology: requireNumber(item, "ideology", path),
      popularity: requireNumber(item, "popularity", path),
      sample_weight: requireNumber(item, "sample_weight", path),
      novel: requireBoolean(item, "novel", path),
    };
  });
  return {
    user_id: requireString(doc, "user_id", "$"),
    box: {
      theta: requireNumber(box, "theta", "$.box"),
      delta: requireNumber(box, "delta", "$.box"),
    },
    items,
  };
}

export function recommendUrl(baseUrl: string, p: RecommendParams): string {
  const params = new URLSearchParams({
    user: p.user,
    theta: String(p.theta),
    delta: String(p.delta),
    count: String(p.count),
    seed: String(p.seed),
  });
  return `${baseUrl}/recommend?${params.toString()}`;
}

export class SpaceClient {
  /** `baseUrl` null means static mode: space from a bundled document. */
  constructor(
    private readonly baseUrl: string | null,
    private readonly fetchFn: typeof fetch = fetch,
    private readonly staticDoc: unknown = null,
  ) {}

  get live(): boolean {
    return this.baseUrl !== null;
  }

  async loadSpace(): Promise<SpaceDoc> {
    if (this.baseUrl === null) {
      return validateSpace(this.staticDoc);
    }
    const resp = await this.fetchFn(`${this.baseUrl}/space`);
    if (!resp.ok) throw new BackendError(`GET /space failed: ${resp.status}`);
    return validateSpace(await resp.json());
  }

  async recommend(params: RecommendParams): Promise<RecommendationDoc> {
    if (this.baseUrl === null) {
      throw new BackendError("re-sampling needs a live backend (static mode)");
    }
    const resp = await this.fetchFn(recommendUrl(this.baseUrl, params));
    if (!resp.ok) throw new BackendError(`GET /recommend failed: ${resp.status}`);
    return validateRecommendation(await resp.json());
  }
}
