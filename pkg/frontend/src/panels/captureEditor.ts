// Capture editor: draft a new element for the active activity. DS/RS
// references come from hits the user marked in the search panel; they are
// submitted exactly as marked, in marking order.

import type { WorkspaceState } from "../state.js";

export interface CaptureActions {
  setDraftCategory(category: string): void;
  setDraftBody(body: string): void;
  unmarkRef(kind: "DS" | "RS", id: string): void;
  saveDraft(): void;
  confirmOverride(): void;
  cancelOverride(): void;
}

export function renderCaptureEditor(state: WorkspaceState, actions: CaptureActions): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "panel capture-editor";
  panel.dataset.testid = "capture-editor";

  const heading = document.createElement("h2");
  heading.textContent = "Capture";
  panel.appendChild(heading);

  if (!state.activeActivity) {
    const note = document.createElement("p");
    note.dataset.testid = "capture-disabled";
    note.textContent = "Begin an activity to capture its contents.";
    panel.appendChild(note);
    return panel;
  }

  const schema = state.schema!;
  const draft = state.draft;

  const select = document.createElement("select");
  select.dataset.testid = "draft-category";
  for (const content of [...schema.contents].sort((a, b) => (a.id < b.id ? -1 : 1))) {
    const option = document.createElement("option");
    option.value = content.id;
    option.textContent = content.name;
    if (content.id === draft.category) option.selected = true;
    select.appendChild(option);
  }
  select.addEventListener("change", () => actions.setDraftCategory(select.value));
  panel.appendChild(select);

  const body = document.createElement("textarea");
  body.dataset.testid = "draft-body";
  body.value = draft.body;
  body.addEventListener("input", () => actions.setDraftBody(body.value));
  panel.appendChild(body);

  const refs = document.createElement("ul");
  refs.dataset.testid = "draft-refs";
  for (const [kind, list] of [["DS", draft.dsRefs], ["RS", draft.rsRefs]] as const) {
    for (const ref of list) {
      const item = document.createElement("li");
      item.dataset.testid = `ref-${ref.id}`;
      item.textContent = `${kind} -> ${ref.category} `;
      const remove = document.createElement("button");
      remove.textContent = "remove";
      remove.dataset.testid = `unmark-${ref.id}`;
      remove.addEventListener("click", () => actions.unmarkRef(kind, ref.id));
      item.appendChild(remove);
      refs.appendChild(item);
    }
  }
  panel.appendChild(refs);

  const save = document.createElement("button");
  save.dataset.testid = "draft-save";
  save.textContent = "Save";
  save.disabled = draft.body.trim() === "";
  save.addEventListener("click", () => actions.saveDraft());
  panel.appendChild(save);

  if (draft.overridePrompt) {
    const prompt = document.createElement("div");
    prompt.dataset.testid = "override-prompt";
    const message = document.createElement("p");
    message.textContent = draft.overridePrompt;
    prompt.appendChild(message);
    const confirm = document.createElement("button");
    confirm.dataset.testid = "override-confirm";
    confirm.textContent = "Record anyway";
    confirm.addEventListener("click", () => actions.confirmOverride());
    prompt.appendChild(confirm);
    const cancel = document.createElement("button");
    cancel.dataset.testid = "override-cancel";
    cancel.textContent = "Cancel";
    cancel.addEventListener("click", () => actions.cancelOverride());
    prompt.appendChild(cancel);
    panel.appendChild(prompt);
  }
  return panel;
}
