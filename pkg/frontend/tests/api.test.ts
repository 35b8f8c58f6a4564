import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  BackendError,
  SchemaError,
  SpaceClient,
  recommendUrl,
  validateRecommendation,
  validateSpace,
} from "../src/api.js";

const spaceFixture = JSON.parse(
  readFileSync(new URL("./fixtures/space.json", import.meta.url), "utf-8"));
const recFixture = JSON.parse(
  readFileSync(new URL("./fixtures/rec_wide.json", import.meta.url), "utf-8"));

describe("space validation", () => {
  it("accepts a backend export verbatim", () => {
    const doc = validateSpace(spaceFixture);
    expect(doc.users.length).toBe(20);
    expect(doc.sources.length).toBe(10);
    expect(doc.edges.length).toBeGreaterThan(0);
  });

  it("names the offending path on a schema mismatch", () => {
    const broken = JSON.parse(JSON.stringify(spaceFixture));
    delete broken.users[1].ideology;
    expect(() => validateSpace(broken)).toThrowError(SchemaError);
    expect(() => validateSpace(broken)).toThrowError(/\$\.users\[1\]\.ideology/);
  });

  it("rejects edges pointing at unknown entities", () => {
    const broken = JSON.parse(JSON.stringify(spaceFixture));
    broken.edges.push(["ghost", broken.sources[0].id, 1]);
    expect(() => validateSpace(broken)).toThrowError(/unknown user/);
  });

  it("rejects non-object payloads", () => {
    expect(() => validateSpace([1, 2, 3])).toThrowError(SchemaError);
    expect(() => validateSpace(null)).toThrowError(SchemaError);
  });
});

describe("recommendation validation", () => {
  it("accepts a backend response verbatim", () => {
    const doc = validateRecommendation(recFixture);
    expect(doc.user_id).toBe("u0000");
    expect(doc.items.length).toBe(3);
    expect(doc.items[0]).toHaveProperty("sample_weight");
  });

  it("rejects items with missing fields", () => {
    const broken = JSON.parse(JSON.stringify(recFixture));
    delete broken.items[0].novel;
    expect(() => validateRecommendation(broken)).toThrowError(/items\[0\]\.novel/);
  });
});

describe("request construction", () => {
  it("builds exactly the documented query string", () => {
    const url = recommendUrl("http://127.0.0.1:8900", {
      user: "u0000", theta: 0.6, delta: 25, count: 5, seed: 11,
    });
    expect(url).toBe(
      "http://127.0.0.1:8900/recommend?user=u0000&theta=0.6&delta=25&count=5&seed=11");
  });
});

describe("client modes", () => {
  it("static mode serves the bundled space but refuses to resample", async () => {
    const client = new SpaceClient(null, undefined as never, spaceFixture);
    const doc = await client.loadSpace();
    expect(doc.users.length).toBe(20);
    await expect(
      client.recommend({ user: "u0000", theta: 1, delta: 1, count: 1, seed: 0 }),
    ).rejects.toBeInstanceOf(BackendError);
  });

  it("surfaces HTTP failures as backend errors", async () => {
    const failingFetch = (async () => ({ ok: false, status: 503 })) as unknown as typeof fetch;
    const client = new SpaceClient("http://backend", failingFetch);
    await expect(client.loadSpace()).rejects.toBeInstanceOf(BackendError);
  });
});
