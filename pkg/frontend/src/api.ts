// Typed client for the archive service. Every request goes through one of
// these methods, so the workspace can only ever issue documented calls.

import type {
  ActivityInstance,
  CaptureResponse,
  ContextPayload,
  ProfileReport,
  SchemaDoc,
  SearchResponse,
  Subgraph,
  TaskInstance,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface CapturePayload {
  activity: string;
  category: string;
  body: string;
  ds_refs: string[];
  rs_refs: string[];
  override: boolean;
}

export interface SearchPayload {
  query: string;
  k?: number;
  context?: { instance: string; activity_category: string } | null;
  semantic?: boolean;
}

type FetchLike = typeof fetch;

export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const code = payload?.error?.code ?? "http_error";
      const message = payload?.error?.message ?? `HTTP ${response.status}`;
      throw new ApiError(response.status, code, message);
    }
    return payload as T;
  }

  async createSession(actor: string): Promise<string> {
    const session = await this.request<{ token: string }>("POST", "/api/sessions", { actor });
    this.token = session.token;
    return session.token;
  }

  addSchema(doc: SchemaDoc): Promise<{ id: string; version: number }> {
    return this.request("POST", "/api/schemas", doc);
  }

  getSchema(id: string, version: number): Promise<SchemaDoc> {
    return this.request("GET", `/api/schemas/${encodeURIComponent(id)}/${version}`);
  }

  beginInstance(schemaId: string, schemaVersion: number, title: string): Promise<TaskInstance> {
    return this.request("POST", "/api/instances", {
      schema_id: schemaId,
      schema_version: schemaVersion,
      title,
    });
  }

  closeInstance(instanceId: string): Promise<TaskInstance> {
    return this.request("PATCH", `/api/instances/${encodeURIComponent(instanceId)}`, { status: "closed" });
  }

  beginActivity(instanceId: string, category: string): Promise<ActivityInstance> {
    return this.request("POST", `/api/instances/${encodeURIComponent(instanceId)}/activities`, { category });
  }

  endActivity(activityId: string): Promise<ActivityInstance> {
    return this.request("PATCH", `/api/activities/${encodeURIComponent(activityId)}`, { status: "ended" });
  }

  capture(instanceId: string, payload: CapturePayload): Promise<CaptureResponse> {
    return this.request("POST", `/api/instances/${encodeURIComponent(instanceId)}/elements`, payload);
  }

  link(fromId: string, to: string, kind: "DS" | "RS", note?: string): Promise<unknown> {
    return this.request("POST", `/api/elements/${encodeURIComponent(fromId)}/links`, { to, kind, note: note ?? null });
  }

  elementContext(elementId: string, depth = 1): Promise<ContextPayload> {
    return this.request("GET", `/api/elements/${encodeURIComponent(elementId)}/context?depth=${depth}`);
  }

  instanceGraph(instanceId: string): Promise<Subgraph> {
    return this.request("GET", `/api/instances/${encodeURIComponent(instanceId)}/graph`);
  }

  actorProfile(actor: string): Promise<ProfileReport> {
    return this.request("GET", `/api/actors/${encodeURIComponent(actor)}/profile`);
  }

  search(payload: SearchPayload): Promise<SearchResponse> {
    return this.request("POST", "/api/search", payload);
  }

  reindex(): Promise<{ built_at_seq: number; doc_count: number }> {
    return this.request("POST", "/api/admin/reindex", { admin: true });
  }
}

// The full surface this client may touch; tests assert no request escapes it.
export const DOCUMENTED_ENDPOINTS: RegExp[] = [
  /^POST \/api\/sessions$/,
  /^POST \/api\/schemas$/,
  /^GET \/api\/schemas\/[^/]+\/\d+$/,
  /^POST \/api\/instances$/,
  /^PATCH \/api\/instances\/[^/]+$/,
  /^POST \/api\/instances\/[^/]+\/activities$/,
  /^PATCH \/api\/activities\/[^/]+$/,
  /^POST \/api\/instances\/[^/]+\/elements$/,
  /^POST \/api\/elements\/[^/]+\/links$/,
  /^GET \/api\/elements\/[^/]+\/context(\?depth=\d+)?$/,
  /^POST \/api\/search$/,
  /^GET \/api\/instances\/[^/]+\/graph$/,
  /^GET \/api\/actors\/[^/]+\/profile$/,
  /^POST \/api\/admin\/reindex$/,
];

export function isDocumentedCall(method: string, url: string): boolean {
  const path = url.replace(/^https?:\/\/[^/]+/, "");
  return DOCUMENTED_ENDPOINTS.some((pattern) => pattern.test(`${method} ${path}`));
}
