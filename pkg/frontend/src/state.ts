// Workspace state: one store, panels re-render on every change. Only
// server-confirmed facts are stored; there are no optimistic updates.

import type { ActivityInstance, ContextPayload, SchemaDoc, SearchResponse, Subgraph, TaskInstance } from "./types.js";

export interface MarkedRef {
  id: string;
  category: string;
}

export interface CaptureDraft {
  category: string;
  body: string;
  dsRefs: MarkedRef[];
  rsRefs: MarkedRef[];
  override: boolean;
  overridePrompt: string | null; // message shown when the server asked for an override
}

export interface Banner {
  code: string;
  message: string;
}

export interface WorkspaceState {
  actor: string | null;
  schema: SchemaDoc | null;
  instance: TaskInstance | null;
  activeActivity: ActivityInstance | null;
  draft: CaptureDraft;
  results: SearchResponse | null;
  lastQuery: string;
  contextOn: boolean;
  semanticOn: boolean;
  selectedContext: { element: string; payload: ContextPayload } | null;
  instanceGraph: Subgraph | null;
  banner: Banner | null;
}

export function emptyDraft(category = ""): CaptureDraft {
  return { category, body: "", dsRefs: [], rsRefs: [], override: false, overridePrompt: null };
}

function initialState(): WorkspaceState {
  return {
    actor: null,
    schema: null,
    instance: null,
    activeActivity: null,
    draft: emptyDraft(),
    results: null,
    lastQuery: "",
    contextOn: true,
    semanticOn: false,
    selectedContext: null,
    instanceGraph: null,
    banner: null,
  };
}

export function producesOf(schema: SchemaDoc, activityCategory: string): string[] {
  return schema.assoc_edges
    .filter((e) => e.activity === activityCategory && e.role === "produces")
    .map((e) => e.content)
    .sort();
}

export class WorkspaceStore {
  private state: WorkspaceState = initialState();
  private listeners: ((state: WorkspaceState) => void)[] = [];

  get(): WorkspaceState {
    return this.state;
  }

  subscribe(listener: (state: WorkspaceState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<WorkspaceState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Server confirmed a new active activity: reset the draft so its category
   *  defaults to a produces category of the activity. */
  setActiveActivity(activity: ActivityInstance | null): void {
    const schema = this.state.schema;
    let category = "";
    if (activity && schema) {
      category = producesOf(schema, activity.category)[0] ?? "";
    }
    this.update({ activeActivity: activity, draft: emptyDraft(category) });
  }

  markReference(kind: "DS" | "RS", ref: MarkedRef): void {
    const draft = this.state.draft;
    const list = kind === "DS" ? draft.dsRefs : draft.rsRefs;
    if (list.some((r) => r.id === ref.id)) return;
    const next = { ...draft };
    if (kind === "DS") next.dsRefs = [...draft.dsRefs, ref];
    else next.rsRefs = [...draft.rsRefs, ref];
    this.update({ draft: next });
  }

  unmarkReference(kind: "DS" | "RS", id: string): void {
    const draft = this.state.draft;
    const next = { ...draft };
    if (kind === "DS") next.dsRefs = draft.dsRefs.filter((r) => r.id !== id);
    else next.rsRefs = draft.rsRefs.filter((r) => r.id !== id);
    this.update({ draft: next });
  }

  setBanner(banner: Banner | null): void {
    this.update({ banner });
  }
}
