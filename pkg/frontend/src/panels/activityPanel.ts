// Activity-flow panel: the task's flow graph with begin/end controls.
// The active activity is highlighted; its precedes-successors are offered
// as the natural next steps.

import { COLUMN_WIDTH, ROW_HEIGHT, flowLayout } from "../layout.js";
import type { WorkspaceState } from "../state.js";

export interface ActivityActions {
  beginActivity(category: string): void;
  endActivity(): void;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderActivityPanel(state: WorkspaceState, actions: ActivityActions): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "panel activity-panel";
  panel.dataset.testid = "activity-panel";

  const heading = document.createElement("h2");
  heading.textContent = state.instance
    ? `${state.instance.title} (${state.instance.status})`
    : "No task instance";
  panel.appendChild(heading);

  const schema = state.schema;
  if (!schema) return panel;

  const positions = flowLayout(schema);
  const width = Math.max(...[...positions.values()].map((p) => p.x)) + COLUMN_WIDTH;
  const height = Math.max(...[...positions.values()].map((p) => p.y)) + ROW_HEIGHT;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("class", "flow-graph");

  for (const edge of schema.flow_edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (!from || !to) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x + 60));
    line.setAttribute("y1", String(from.y + 16));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y + 16));
    line.setAttribute("class", `flow-edge flow-edge-${edge.kind}`);
    svg.appendChild(line);
  }

  const activeCategory = state.activeActivity?.category ?? null;
  for (const activity of [...schema.activities].sort((a, b) => (a.id < b.id ? -1 : 1))) {
    const point = positions.get(activity.id);
    if (!point) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("transform", `translate(${point.x}, ${point.y})`);
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("width", "120");
    rect.setAttribute("height", "32");
    rect.setAttribute("rx", "6");
    rect.setAttribute(
      "class",
      activity.id === activeCategory ? "flow-node active" : "flow-node",
    );
    (rect as unknown as HTMLElement).dataset.testid = `flow-node-${activity.id}`;
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", "8");
    label.setAttribute("y", "20");
    label.textContent = activity.name;
    group.appendChild(rect);
    group.appendChild(label);
    svg.appendChild(group);
  }
  panel.appendChild(svg);

  const controls = document.createElement("div");
  controls.className = "activity-controls";
  if (!state.instance || state.instance.status !== "open") {
    // nothing beginnable on a missing or closed instance
  } else if (state.activeActivity) {
    const next = schema.flow_edges
      .filter((e) => e.kind === "precedes" && e.from === activeCategory)
      .map((e) => e.to)
      .sort();
    if (next.length) {
      const hint = document.createElement("p");
      hint.dataset.testid = "next-hint";
      hint.textContent = `next: ${next.join(", ")}`;
      controls.appendChild(hint);
    }
    const end = document.createElement("button");
    end.dataset.testid = "end-activity";
    end.textContent = `End ${state.activeActivity.category}`;
    end.addEventListener("click", () => actions.endActivity());
    controls.appendChild(end);
  } else {
    for (const activity of [...schema.activities].sort((a, b) => (a.id < b.id ? -1 : 1))) {
      const begin = document.createElement("button");
      begin.dataset.testid = `begin-${activity.id}`;
      begin.textContent = `Begin ${activity.id}`;
      begin.addEventListener("click", () => actions.beginActivity(activity.id));
      controls.appendChild(begin);
    }
  }
  panel.appendChild(controls);
  return panel;
}
