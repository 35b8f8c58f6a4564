// SVG rendering of the shared space. The view is deliberately dumb: point
// positions come from layout.ts transforms of payload scores, colors from
// colors.ts bands, sizes from engagement weights. Nothing here invents or
// adjusts a score.

import { sourceColor, ideologyColor, USER_COLOR } from "./colors.js";
import {
  boxRect,
  nodeRadius,
  popularityScale,
  projectX,
  projectY,
  MIN_RADIUS,
  Viewport,
} from "./layout.js";
import type { SpaceDoc } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderOptions {
  selectedUser: string | null;
  theta: number;
  delta: number;
  /** ids of the currently recommended sources, in draw order */
  highlights: readonly string[];
  viewport: Viewport;
}

function el(tag: string, attrs: Record<string, string | number>): Element {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function titled(node: Element, text: string): Element {
  const title = document.createElementNS(SVG_NS, "title");
  title.textContent = text;
  node.appendChild(title);
  return node;
}

export function engagementOf(doc: SpaceDoc, userId: string | null): Map<string, number> {
  const weights = new Map<string, number>();
  if (userId === null) return weights;
  for (const [user, source, weight] of doc.edges) {
    if (user === userId) weights.set(source, (weights.get(source) ?? 0) + weight);
  }
  return weights;
}

export function renderSpace(svg: Element, doc: SpaceDoc, options: RenderOptions): void {
  const vp = options.viewport;
  const scale = popularityScale(doc);
  const consumed = engagementOf(doc, options.selectedUser);
  const maxWeight = Math.max(0, ...consumed.values());
  svg.setAttribute("viewBox", `0 0 ${vp.width} ${vp.height}`);
  while (svg.firstChild) svg.removeChild(svg.firstChild);

  const edges = el("g", { class: "edges" });
  const sources = el("g", { class: "sources" });
  const users = el("g", { class: "users" });
  const overlay = el("g", { class: "overlay" });
  svg.append(edges, sources, users, overlay);

  const selected = doc.users.find((u) => u.id === options.selectedUser) ?? null;
  const sx = new Map(doc.sources.map((s) => [s.id, projectX(s.ideology, vp)]));
  const sy = new Map(doc.sources.map((s) => [s.id, projectY(s.popularity, scale, vp)]));

  if (selected) {
    const ux = projectX(selected.ideology, vp);
    const uy = projectY(selected.popularity, scale, vp);
    for (const [sourceId, weight] of consumed) {
      edges.appendChild(
        el("line", {
          class: "edge",
          "data-source": sourceId,
          x1: ux, y1: uy,
          x2: sx.get(sourceId) ?? 0, y2: sy.get(sourceId) ?? 0,
          "stroke-width": Math.min(1 + Math.log1p(weight), 4),
        }),
      );
    }
  }

  for (const source of doc.sources) {
    const weight = consumed.get(source.id) ?? 0;
    const node = el("circle", {
      class: "source" + (source.degenerate ? " degenerate" : ""),
      "data-id": source.id,
      "data-kind": "source",
      cx: sx.get(source.id) ?? 0,
      cy: sy.get(source.id) ?? 0,
      r: weight > 0 ? nodeRadius(weight, maxWeight) : MIN_RADIUS,
      fill: sourceColor(source.ideology, weight > 0),
    });
    titled(node, `${source.id} | leaning ${source.ideology.toFixed(3)} | popularity ${source.popularity}`);
    sources.appendChild(node);
  }

  for (const user of doc.users) {
    const isSelected = user.id === options.selectedUser;
    const x = projectX(user.ideology, vp);
    const y = projectY(user.popularity, scale, vp);
    const node = el("circle", {
      class: "user" + (isSelected ? " selected" : ""),
      "data-id": user.id,
      "data-kind": "user",
      cx: x, cy: y,
      r: isSelected ? 6 : 3.2,
      fill: isSelected ? ideologyColor(user.ideology) : USER_COLOR,
      stroke: USER_COLOR,
    });
    if (!user.placed) node.setAttribute("data-badge", "no-engagement");
    titled(node, `${user.id} | leaning ${user.ideology.toFixed(3)} | popularity ${user.popularity}${user.placed ? "" : " (fallback)"}`);
    users.appendChild(node);
    if (isSelected && !user.placed) {
      const badge = el("text", { class: "badge", x: x + 9, y: y - 9 });
      badge.textContent = "no engagement";
      overlay.appendChild(badge);
    }
  }

  if (selected) {
    const rect = boxRect(selected.ideology, selected.popularity,
                         options.theta, options.delta, scale, vp);
    overlay.appendChild(el("rect", {
      class: "tolerance-box",
      x: rect.x, y: rect.y, width: rect.width, height: rect.height,
    }));
    for (const sourceId of options.highlights) {
      if (!sx.has(sourceId)) continue;
      overlay.appendChild(el("circle", {
        class: "highlight",
        "data-id": sourceId,
        cx: sx.get(sourceId) ?? 0,
        cy: sy.get(sourceId) ?? 0,
        r: MIN_RADIUS + 5,
      }));
    }
  }
}

export function highlightedIds(svg: Element): string[] {
  return Array.from(svg.querySelectorAll(".highlight"))
    .map((node) => node.getAttribute("data-id") ?? "");
}
