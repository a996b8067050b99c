// Wires the store, the API client, and the four panels together. All panel
// actions round-trip through the service; the store only ever holds
// server-confirmed state.

import { ApiClient, ApiError } from "./api.js";
import { WorkspaceStore, emptyDraft, producesOf } from "./state.js";
import { renderActivityPanel } from "./panels/activityPanel.js";
import { renderCaptureEditor } from "./panels/captureEditor.js";
import { renderContextView } from "./panels/contextView.js";
import { renderSearchPanel } from "./panels/searchPanel.js";

export class App {
  readonly store = new WorkspaceStore();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.store.subscribe(() => this.render());
    this.render();
  }

  /** Attach the workspace to a server-confirmed instance record. Assumes the
   *  client already holds a session. */
  async boot(actor: string, instance: import("./types.js").TaskInstance): Promise<void> {
    const schema = await this.api.getSchema(instance.schema_id, instance.schema_version);
    const graph = await this.api.instanceGraph(instance.id);
    this.store.update({ actor, schema, instance, instanceGraph: graph });
  }

  private fail(error: unknown): void {
    if (error instanceof ApiError) {
      this.store.setBanner({ code: error.code, message: error.message });
    } else {
      this.store.setBanner({ code: "client_error", message: String(error) });
    }
  }

  async beginActivity(category: string): Promise<void> {
    const { instance } = this.store.get();
    if (!instance) return;
    try {
      const activity = await this.api.beginActivity(instance.id, category);
      this.store.setBanner(null);
      this.store.setActiveActivity(activity);
    } catch (error) {
      this.fail(error);
    }
  }

  async endActivity(): Promise<void> {
    const { activeActivity } = this.store.get();
    if (!activeActivity) return;
    try {
      await this.api.endActivity(activeActivity.id);
      this.store.setBanner(null);
      this.store.setActiveActivity(null);
    } catch (error) {
      this.fail(error);
    }
  }

  async saveDraft(): Promise<void> {
    const { instance, activeActivity, draft, schema } = this.store.get();
    if (!instance || !activeActivity || !schema) return;
    try {
      await this.api.capture(instance.id, {
        activity: activeActivity.id,
        category: draft.category,
        body: draft.body,
        ds_refs: draft.dsRefs.map((r) => r.id),
        rs_refs: draft.rsRefs.map((r) => r.id),
        override: draft.override,
      });
      const defaultCategory = producesOf(schema, activeActivity.category)[0] ?? "";
      this.store.update({ draft: emptyDraft(defaultCategory), banner: null });
      const graph = await this.api.instanceGraph(instance.id);
      this.store.update({ instanceGraph: graph });
      await this.api.reindex(); // keep search results in step with captures
    } catch (error) {
      if (error instanceof ApiError && error.code === "produces_mismatch") {
        this.store.update({ draft: { ...draft, overridePrompt: error.message } });
        return;
      }
      this.fail(error);
    }
  }

  async confirmOverride(): Promise<void> {
    const { draft } = this.store.get();
    this.store.update({ draft: { ...draft, override: true, overridePrompt: null } });
    await this.saveDraft();
  }

  cancelOverride(): void {
    const { draft } = this.store.get();
    this.store.update({ draft: { ...draft, override: false, overridePrompt: null } });
  }

  async runSearch(query: string): Promise<void> {
    const { instance, activeActivity, contextOn, semanticOn } = this.store.get();
    const context =
      contextOn && instance && activeActivity
        ? { instance: instance.id, activity_category: activeActivity.category }
        : null;
    try {
      const results = await this.api.search({ query, k: 10, context, semantic: semanticOn });
      this.store.update({ results, lastQuery: query, banner: null });
    } catch (error) {
      this.fail(error);
    }
  }

  async openContext(elementId: string): Promise<void> {
    try {
      const payload = await this.api.elementContext(elementId, 1);
      this.store.update({ selectedContext: { element: elementId, payload }, banner: null });
    } catch (error) {
      this.fail(error);
    }
  }

  private render(): void {
    const state = this.store.get();
    this.root.replaceChildren();

    if (state.banner) {
      const banner = document.createElement("div");
      banner.className = "banner error";
      banner.dataset.testid = "banner";
      banner.textContent = `[${state.banner.code}] ${state.banner.message}`;
      this.root.appendChild(banner);
    }

    this.root.appendChild(
      renderActivityPanel(state, {
        beginActivity: (category) => void this.beginActivity(category),
        endActivity: () => void this.endActivity(),
      }),
    );
    this.root.appendChild(
      renderCaptureEditor(state, {
        setDraftCategory: (category) =>
          this.store.update({ draft: { ...this.store.get().draft, category } }),
        setDraftBody: (body) => this.store.update({ draft: { ...this.store.get().draft, body } }),
        unmarkRef: (kind, id) => this.store.unmarkReference(kind, id),
        saveDraft: () => void this.saveDraft(),
        confirmOverride: () => void this.confirmOverride(),
        cancelOverride: () => this.cancelOverride(),
      }),
    );
    this.root.appendChild(
      renderSearchPanel(state, {
        runSearch: (query) => void this.runSearch(query),
        toggleContext: (on) => this.store.update({ contextOn: on }),
        toggleSemantic: (on) => this.store.update({ semanticOn: on }),
        markRef: (kind, id, category) => this.store.markReference(kind, { id, category }),
        openContext: (id) => void this.openContext(id),
      }),
    );
    this.root.appendChild(renderContextView(state));
  }
}
