// Search panel: queries carry the current work context unless toggled off;
// hits show boosted badges and snippets, and can be marked as DS/RS
// references for the capture draft or opened in the context view.

import type { WorkspaceState } from "../state.js";

export interface SearchActions {
  runSearch(query: string): void;
  toggleContext(on: boolean): void;
  toggleSemantic(on: boolean): void;
  markRef(kind: "DS" | "RS", id: string, category: string): void;
  openContext(elementId: string): void;
}

export function renderSearchPanel(state: WorkspaceState, actions: SearchActions): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "panel search-panel";
  panel.dataset.testid = "search-panel";

  const heading = document.createElement("h2");
  heading.textContent = "Search";
  panel.appendChild(heading);

  const input = document.createElement("input");
  input.type = "text";
  input.dataset.testid = "query-input";
  input.value = state.lastQuery;
  panel.appendChild(input);

  const run = document.createElement("button");
  run.dataset.testid = "query-run";
  run.textContent = "Search";
  run.addEventListener("click", () => actions.runSearch(input.value));
  panel.appendChild(run);

  const contextToggle = document.createElement("label");
  const contextBox = document.createElement("input");
  contextBox.type = "checkbox";
  contextBox.checked = state.contextOn;
  contextBox.dataset.testid = "toggle-context";
  contextBox.addEventListener("change", () => actions.toggleContext(contextBox.checked));
  contextToggle.appendChild(contextBox);
  contextToggle.appendChild(document.createTextNode(" use work context"));
  panel.appendChild(contextToggle);

  const semanticToggle = document.createElement("label");
  const semanticBox = document.createElement("input");
  semanticBox.type = "checkbox";
  semanticBox.checked = state.semanticOn;
  semanticBox.dataset.testid = "toggle-semantic";
  semanticBox.addEventListener("change", () => actions.toggleSemantic(semanticBox.checked));
  semanticToggle.appendChild(semanticBox);
  semanticToggle.appendChild(document.createTextNode(" semantic expansion"));
  panel.appendChild(semanticToggle);

  if (state.results === null) return panel;

  if (state.results.hits.length === 0) {
    const empty = document.createElement("p");
    empty.dataset.testid = "no-match";
    empty.textContent = `No matches for "${state.lastQuery}".`;
    panel.appendChild(empty);
    return panel;
  }

  const list = document.createElement("ol");
  list.dataset.testid = "hit-list";
  for (const hit of state.results.hits) {
    const item = document.createElement("li");
    item.dataset.testid = `hit-${hit.ie}`;

    const header = document.createElement("div");
    const category = document.createElement("strong");
    category.textContent = hit.links?.category ?? "?";
    header.appendChild(category);
    if (hit.boosted) {
      const badge = document.createElement("span");
      badge.className = "badge boosted";
      badge.dataset.testid = `badge-${hit.ie}`;
      badge.textContent = "boosted";
      header.appendChild(badge);
    }
    const score = document.createElement("span");
    score.className = "score";
    score.textContent = hit.score.toFixed(4);
    header.appendChild(score);
    item.appendChild(header);

    const snippet = document.createElement("p");
    snippet.className = "snippet";
    snippet.textContent = hit.snippet;
    item.appendChild(snippet);

    const markDs = document.createElement("button");
    markDs.dataset.testid = `mark-ds-${hit.ie}`;
    markDs.textContent = "mark as demand";
    markDs.addEventListener("click", () => actions.markRef("DS", hit.ie, hit.links?.category ?? ""));
    item.appendChild(markDs);

    const markRs = document.createElement("button");
    markRs.dataset.testid = `mark-rs-${hit.ie}`;
    markRs.textContent = "mark as reference";
    markRs.addEventListener("click", () => actions.markRef("RS", hit.ie, hit.links?.category ?? ""));
    item.appendChild(markRs);

    const open = document.createElement("button");
    open.dataset.testid = `open-${hit.ie}`;
    open.textContent = "context";
    open.addEventListener("click", () => actions.openContext(hit.ie));
    item.appendChild(open);

    list.appendChild(item);
  }
  panel.appendChild(list);
  return panel;
}
