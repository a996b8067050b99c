// Context view: the episodic neighborhood of a selected element rendered as
// a layered graph, beside the categorical context of its activity category.

import { COLUMN_WIDTH, ROW_HEIGHT, episodicLayout } from "../layout.js";
import type { WorkspaceState } from "../state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderContextView(state: WorkspaceState): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "panel context-view";
  panel.dataset.testid = "context-view";

  const heading = document.createElement("h2");
  heading.textContent = "Context";
  panel.appendChild(heading);

  const selected = state.selectedContext;
  if (!selected) {
    const note = document.createElement("p");
    note.textContent = "Select a hit to inspect its context.";
    panel.appendChild(note);
    return panel;
  }

  const { episodic, categorical } = selected.payload;
  const positions = episodicLayout(episodic);
  const width = Math.max(...[...positions.values()].map((p) => p.x)) + COLUMN_WIDTH;
  const height = Math.max(...[...positions.values()].map((p) => p.y)) + ROW_HEIGHT;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("class", "episodic-graph");
  (svg as unknown as HTMLElement).dataset.testid = "episodic-graph";

  for (const edge of episodic.edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (!from || !to) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x + 55));
    line.setAttribute("y1", String(from.y + 14));
    line.setAttribute("x2", String(to.x + 55));
    line.setAttribute("y2", String(to.y + 14));
    line.setAttribute("class", `episodic-edge kind-${edge.kind}`);
    svg.appendChild(line);
  }

  for (const node of episodic.nodes) {
    const point = positions.get(node.id);
    if (!point) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("transform", `translate(${point.x}, ${point.y})`);
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("width", "110");
    rect.setAttribute("height", "28");
    rect.setAttribute("rx", "4");
    const classes = ["episodic-node"];
    if (node.id === episodic.focus) classes.push("focus");
    if (node.external) classes.push("external");
    rect.setAttribute("class", classes.join(" "));
    (rect as unknown as HTMLElement).dataset.testid = `ctx-node-${node.id}`;
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", "6");
    label.setAttribute("y", "18");
    label.textContent = node.direction ? `${node.category} (${node.direction})` : node.category;
    group.appendChild(rect);
    group.appendChild(label);
    svg.appendChild(group);
  }
  panel.appendChild(svg);

  const sidebar = document.createElement("aside");
  sidebar.className = "categorical-sidebar";
  sidebar.dataset.testid = "categorical-sidebar";

  const title = document.createElement("h3");
  title.textContent = `Around activity: ${categorical.focus}`;
  sidebar.appendChild(title);

  const before = categorical.activities.filter((a) => a.direction === "before" || a.direction === "both");
  const after = categorical.activities.filter((a) => a.direction === "after" || a.direction === "both");
  for (const [label, entries, testid] of [
    ["before", before, "cat-before"],
    ["after", after, "cat-after"],
  ] as const) {
    const block = document.createElement("p");
    block.dataset.testid = testid;
    block.textContent = `${label}: ${entries.map((e) => e.id).join(", ") || "none"}`;
    sidebar.appendChild(block);
  }

  const contents = document.createElement("ul");
  contents.dataset.testid = "cat-contents";
  for (const [activity, pairs] of Object.entries(categorical.contents).sort()) {
    for (const pair of pairs) {
      const item = document.createElement("li");
      item.textContent = `${activity} ${pair.role} ${pair.content}`;
      contents.appendChild(item);
    }
  }
  sidebar.appendChild(contents);

  const conceptEntries = Object.entries(categorical.concepts).sort();
  if (conceptEntries.length) {
    const concepts = document.createElement("p");
    concepts.dataset.testid = "cat-concepts";
    concepts.textContent = conceptEntries
      .map(([category, ids]) => `${category}: ${ids.join(", ")}`)
      .join(" | ");
    sidebar.appendChild(concepts);
  }

  panel.appendChild(sidebar);
  return panel;
}
