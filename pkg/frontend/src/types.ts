// Payload shapes of the archive service's JSON API.

export interface SchemaDoc {
  id: string;
  name: string;
  version: number;
  activities: { id: string; name: string; description: string }[];
  contents: { id: string; name: string; description: string }[];
  concepts: { id: string; label: string; definition: string; related: { concept: string; kind: string }[] }[];
  flow_edges: { from: string; to: string; kind: "precedes" | "iterates-to" | "decomposes-into" }[];
  assoc_edges: { activity: string; content: string; role: "produces" | "consumes" }[];
  template_edges: { from: string; to: string; kind: "DS" | "RS" }[];
  semantic_links: { category: string; concept: string }[];
}

export interface TaskInstance {
  id: string;
  schema_id: string;
  schema_version: number;
  title: string;
  actor: string;
  status: "open" | "closed";
  started_at: string;
  closed_at: string | null;
}

export interface ActivityInstance {
  id: string;
  instance: string;
  category: string;
  status: "active" | "ended";
  started_at: string;
  ended_at: string | null;
}

export interface ElementRecord {
  id: string;
  instance: string;
  activity: string;
  category: string;
  author: string;
  created_at: string;
  body: string;
  attachments: string[];
  override: boolean;
  retracted: boolean;
}

export interface EdgeRecord {
  from: string;
  to: string;
  kind: "DS" | "RS";
  created_at: string;
  note: string | null;
}

export interface CaptureResponse {
  element: ElementRecord;
  edges: EdgeRecord[];
}

export interface SubgraphNode {
  id: string;
  category: string;
  activity: string;
  instance: string;
  external: boolean;
  distance: number | null;
  direction: string | null;
}

export interface Subgraph {
  focus: string | null;
  nodes: SubgraphNode[];
  edges: EdgeRecord[];
}

export interface CategoricalContext {
  focus: string;
  radius: number;
  activities: { id: string; direction: string; distance: number }[];
  contents: Record<string, { content: string; role: string }[]>;
  template_edges: { from: string; to: string; kind: string }[];
  concepts: Record<string, string[]>;
}

export interface ContextPayload {
  episodic: Subgraph;
  categorical: CategoricalContext;
}

export interface NeighborLink {
  element: string;
  kind: "DS" | "RS";
  direction: string;
  category: string;
}

export interface Hit {
  ie: string;
  score: number;
  base_score: number;
  boosted: boolean;
  snippet: string;
  links: { category: string; concepts: string[]; neighbors: NeighborLink[] } | null;
  matched_terms: string[];
}

export interface SearchResponse {
  hits: Hit[];
  built_at_seq: number;
}

export interface ProfileReport {
  actor: string;
  total: number;
  rows: {
    schema_id: string;
    schema_version: number;
    activity_category: string;
    content_category: string;
    count: number;
    evidence: string[];
  }[];
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
