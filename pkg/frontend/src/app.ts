// Page wiring: URL fragment <-> controls <-> backend <-> SVG. In-flight
// recommendation requests are superseded by newer tolerance adjustments
// (last-write-wins); a failed refresh flags the highlights as stale but
// leaves the controls live.

import { BackendError, SchemaError, SpaceClient, validateSpace } from "./api.js";
import { DEFAULT_STATE, ExplorationState, parseState, recommendParams, serializeState } from "./state.js";
import { renderSpace } from "./view.js";
import type { SpaceDoc } from "./types.js";

const VIEWPORT = { width: 900, height: 520, margin: 42 };

interface Elements {
  svg: Element;
  userSelect: HTMLSelectElement;
  theta: HTMLInputElement;
  delta: HTMLInputElement;
  seed: HTMLInputElement;
  count: HTMLInputElement;
  resample: HTMLButtonElement;
  banner: HTMLElement;
  status: HTMLElement;
}

function grab(): Elements {
  const byId = (id: string) => {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node;
  };
  return {
    svg: byId("plot"),
    userSelect: byId("user-select") as HTMLSelectElement,
    theta: byId("theta") as HTMLInputElement,
    delta: byId("delta") as HTMLInputElement,
    seed: byId("seed") as HTMLInputElement,
    count: byId("count") as HTMLInputElement,
    resample: byId("resample") as HTMLButtonElement,
    banner: byId("banner"),
    status: byId("status"),
  };
}

function endpointFromLocation(): string | null {
  const params = new URLSearchParams(window.location.search);
  return params.get("endpoint");
}

export async function boot(): Promise<void> {
  const els = grab();
  const endpoint = endpointFromLocation();
  const client = endpoint !== null ? new SpaceClient(endpoint, fetch.bind(window)) : null;

  let doc: SpaceDoc;
  try {
    if (client) {
      doc = await client.loadSpace();
    } else {
      const resp = await fetch("./space.json");
      if (!resp.ok) throw new BackendError(`space.json missing (${resp.status})`);
      doc = validateSpace(await resp.json());
    }
  } catch (err) {
    els.banner.textContent = err instanceof SchemaError
      ? `Export does not match the expected schema. ${err.message}`
      : `Could not load the space: ${String(err)}`;
    els.banner.hidden = false;
    return; // no partial render on a bad payload
  }

  let state: ExplorationState = parseState(window.location.hash);
  if (state.user === null && doc.users.length) state = { ...state, user: doc.users[0].id };
  let highlights: string[] = [];
  let requestToken = 0;
  const live = endpoint !== null;
  if (!live) {
    els.resample.disabled = true;
    els.status.textContent = "static space: re-sampling disabled";
  }

  for (const user of doc.users) {
    const option = document.createElement("option");
    option.value = user.id;
    option.textContent = user.id;
    els.userSelect.appendChild(option);
  }

  const syncControls = () => {
    if (state.user) els.userSelect.value = state.user;
    els.theta.value = String(state.theta);
    els.delta.value = String(state.delta);
    els.seed.value = String(state.seed);
    els.count.value = String(state.count);
  };

  const draw = () => {
    renderSpace(els.svg, doc, {
      selectedUser: state.user,
      theta: state.theta,
      delta: state.delta,
      highlights,
      viewport: VIEWPORT,
    });
  };

  const refresh = async () => {
    window.history.replaceState(null, "", `#${serializeState(state)}`);
    draw();
    const params = recommendParams(state);
    if (!client || !live || !params) return;
    const token = ++requestToken;
    try {
      const rec = await client.recommend(params);
      if (token !== requestToken) return; // superseded by a newer adjustment
      highlights = rec.items.map((item) => item.source_id);
      els.status.textContent =
        `${rec.items.length} recommendation(s) for ${rec.user_id} ` +
        `(theta=${rec.box.theta}, delta=${rec.box.delta}, seed=${state.seed})`;
      draw();
    } catch (err) {
      if (token !== requestToken) return;
      els.status.textContent = `stale results: refresh failed (${String(err)})`;
    }
  };

  const update = (patch: Partial<ExplorationState>) => {
    state = { ...state, ...patch };
    void refresh();
  };

  els.userSelect.addEventListener("change", () => update({ user: els.userSelect.value }));
  els.theta.addEventListener("input", () => update({ theta: Math.max(0, Number(els.theta.value) || 0) }));
  els.delta.addEventListener("input", () => update({ delta: Math.max(0, Number(els.delta.value) || 0) }));
  els.seed.addEventListener("change", () => update({ seed: Number(els.seed.value) || DEFAULT_STATE.seed }));
  els.count.addEventListener("change", () => update({ count: Math.max(1, Number(els.count.value) || DEFAULT_STATE.count) }));
  els.resample.addEventListener("click", () => update({ seed: state.seed + 1 }));
  window.addEventListener("hashchange", () => {
    state = parseState(window.location.hash);
    void refresh();
  });

  syncControls();
  await refresh();
}

if (typeof document !== "undefined" && document.getElementById("plot")) {
  void boot();
}
