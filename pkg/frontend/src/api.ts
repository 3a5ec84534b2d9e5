/**
 * Typed client for the studio service.
 *
 * Every response uses one envelope: status, a human feedback sentence, a
 * payload, and sometimes structured diagnostics. The client never invents
 * messages; callers display `feedback` as received. HTTP-level failures
 * (network down, non-JSON body) throw; service errors come back as a normal
 * envelope with status "error" so screens can show them inline.
 */

export interface Envelope<P = unknown> {
  status: "ok" | "error";
  feedback: string;
  payload: P;
  diagnostics?: unknown[];
  httpStatus: number;
}

export interface GraphDocument {
  version: number;
  canvas: { width: number; height: number };
  elements: { id: string; kind: string; x: number; y: number; properties: Record<string, unknown> }[];
  connections: { from: string; to: string }[];
}

export interface PropertyEntry {
  key: string;
  value_kind: "choice" | "multi_choice" | "text" | "flag";
  allowed: string[] | null;
  required: boolean;
  help_text: string;
}

export interface PropertySchema {
  element_id: string;
  kind: string;
  current: Record<string, unknown>;
  entries: PropertyEntry[];
}

export interface Tip {
  rule: string;
  span: [number, number];
  message: string;
  equivalence: string;
  fingerprint: string;
  rewritten_sql: string | null;
}

export interface PlanNodePayload {
  operator: string;
  detail: string;
  cost: number;
  rows: number;
  children: PlanNodePayload[];
}

export interface PlanPayload {
  plan: PlanNodePayload;
  plan_text: string;
  estimated_cost: number;
  estimated_planning_time_ms: number;
  estimated_execution_time_ms: number;
  plan_count: number;
  alternatives: { plan_text: string; total_cost: number }[];
  comparison: string;
}

export interface HistoryEntry {
  sequence: number;
  timestamp: string;
  label: string;
}

export interface TypeDescriptor {
  name: string;
  category: string;
  tooltip: string;
}

export interface ContextAction {
  id: string;
  label: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  token: string | null = null;

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (...args) => globalThis.fetch(...args),
  ) {}

  /** One request, one envelope. Throws only when no envelope came back. */
  async request<P = unknown>(
    method: string,
    path: string,
    body?: unknown,
    params?: Record<string, string>,
  ): Promise<Envelope<P>> {
    let url = this.baseUrl + path;
    if (params) url += "?" + new URLSearchParams(params).toString();
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const init: RequestInit = { method, headers };
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(url, init);
    const parsed = (await response.json()) as Omit<Envelope<P>, "httpStatus">;
    if (typeof parsed.feedback !== "string") {
      throw new Error(`The service answered without an envelope (${response.status}).`);
    }
    return { ...parsed, httpStatus: response.status };
  }

  // -- accounts

  async register(username: string, password: string) {
    const env = await this.request<{ token: string; username: string }>(
      "POST", "/api/auth/register", { username, password });
    if (env.status === "ok") this.token = env.payload.token;
    return env;
  }

  async login(username: string, password: string) {
    const env = await this.request<{ token: string; username: string }>(
      "POST", "/api/auth/login", { username, password });
    if (env.status === "ok") this.token = env.payload.token;
    return env;
  }

  async logout() {
    const env = await this.request("POST", "/api/auth/logout");
    if (env.status === "ok") this.token = null;
    return env;
  }

  // -- projects

  listProjects() {
    return this.request<{ id: string; name: string }[]>("GET", "/api/projects");
  }

  createProject(name: string) {
    return this.request<{ id: string; name: string }>("POST", "/api/projects", { name });
  }

  getProject(id: string) {
    return this.request<{ project: Record<string, unknown>; state_hash: string }>(
      "GET", `/api/projects/${id}`);
  }

  getCatalog(projectId: string) {
    return this.request<{
      databases: { name: string }[];
      schemas: string[];
      tables: { name: string; columns: { name: string; data_type: string }[] }[];
      indexes: { name: string }[];
      triggers: { name: string }[];
    }>("GET", `/api/projects/${projectId}/catalog`);
  }

  // -- schema objects

  createDdl(projectId: string, kind: string, definition: unknown) {
    const body = kind === "schema" ? definition : { definition };
    return this.request<{ ddl: string }>("POST", `/api/projects/${projectId}/ddl/${kind}`, body);
  }

  validateDdl(projectId: string, kind: string, definition: unknown) {
    const body = kind === "schema" ? definition : { definition };
    return this.request<{ ok: boolean; ui_hints: Record<string, unknown>; ddl: string | null }>(
      "POST", `/api/projects/${projectId}/ddl/${kind}/validate`, body);
  }

  dropDdl(projectId: string, kind: string, name: string) {
    return this.request("DELETE", `/api/projects/${projectId}/ddl/${kind}/${name}`);
  }

  // -- canvases

  listGraphs(projectId: string) {
    return this.request<string[]>("GET", `/api/projects/${projectId}/graphs`);
  }

  createGraph(projectId: string, name: string) {
    return this.request<{ document: GraphDocument }>(
      "POST", `/api/projects/${projectId}/graphs`, { name });
  }

  getGraph(projectId: string, graph: string) {
    return this.request<{ document: GraphDocument }>(
      "GET", `/api/projects/${projectId}/graphs/${graph}`);
  }

  dropElement(projectId: string, graph: string, kind: string, x: number, y: number) {
    return this.request<{ document: GraphDocument; element_id: string }>(
      "POST", `/api/projects/${projectId}/graphs/${graph}/drop-element`, { kind, x, y });
  }

  moveElement(projectId: string, graph: string, elementId: string, x: number, y: number) {
    return this.request<{ document: GraphDocument }>(
      "POST", `/api/projects/${projectId}/graphs/${graph}/move-element`,
      { element_id: elementId, x, y });
  }

  deleteElement(projectId: string, graph: string, elementId: string) {
    return this.request<{ document: GraphDocument }>(
      "POST", `/api/projects/${projectId}/graphs/${graph}/delete-element`,
      { element_id: elementId });
  }

  connect(projectId: string, graph: string, from: string, to: string) {
    return this.request<{ document: GraphDocument }>(
      "POST", `/api/projects/${projectId}/graphs/${graph}/connect`, { from, to });
  }

  disconnect(projectId: string, graph: string, from: string, to: string) {
    return this.request<{ document: GraphDocument }>(
      "POST", `/api/projects/${projectId}/graphs/${graph}/disconnect`, { from, to });
  }

  setProperty(projectId: string, graph: string, elementId: string, key: string, value: unknown) {
    return this.request<{ document: GraphDocument }>(
      "POST", `/api/projects/${projectId}/graphs/${graph}/set-property`,
      { element_id: elementId, key, value });
  }

  clearProperty(projectId: string, graph: string, elementId: string, key: string) {
    return this.request<{ document: GraphDocument }>(
      "POST", `/api/projects/${projectId}/graphs/${graph}/clear-property`,
      { element_id: elementId, key });
  }

  elementProperties(projectId: string, graph: string, elementId: string) {
    return this.request<PropertySchema>(
      "GET", `/api/projects/${projectId}/graphs/${graph}/elements/${elementId}/properties`);
  }

  validateGraph(projectId: string, graph: string) {
    return this.request<{ ok: boolean }>(
      "GET", `/api/projects/${projectId}/graphs/${graph}/validate`);
  }

  graphToSql(projectId: string, graph: string) {
    return this.request<{ sql: string; clause_spans: Record<string, [number, number]> }>(
      "GET", `/api/projects/${projectId}/graphs/${graph}/to-sql`);
  }

  // -- text editor

  parseSql(projectId: string, sql: string) {
    return this.request<{ sql: string; clause_spans: Record<string, [number, number]> }>(
      "POST", `/api/projects/${projectId}/sql/parse`, { sql });
  }

  analyzeSql(projectId: string, sql: string) {
    return this.request<{ sql: string; fingerprint: string; tips: Tip[] }>(
      "POST", `/api/projects/${projectId}/sql/analyze`, { sql });
  }

  applyRewrite(projectId: string, sql: string, rule: string, fingerprint: string) {
    return this.request<{ sql: string }>(
      "POST", `/api/projects/${projectId}/sql/apply-rewrite`, { sql, rule, fingerprint });
  }

  planSql(projectId: string, sql: string) {
    return this.request<PlanPayload>("POST", `/api/projects/${projectId}/sql/plan`, { sql });
  }

  complete(projectId: string, text: string, cursor: number) {
    return this.request<{
      replacement_start: number;
      candidates: { text: string; kind: string; rank: number; explanation: string }[];
    }>("POST", `/api/projects/${projectId}/sql/complete`, { text, cursor });
  }

  pseudocode(projectId: string, text: string) {
    return this.request<{ sql: string; warnings: string[] }>(
      "POST", `/api/projects/${projectId}/sql/pseudocode`, { text });
  }

  evalSql(projectId: string, sql: string) {
    return this.request<{ columns: string[]; rows: unknown[][]; row_count: number }>(
      "POST", `/api/projects/${projectId}/sandbox/eval`, { sql });
  }

  // -- history

  history(projectId: string, limit = 50, offset = 0) {
    return this.request<{ entries: HistoryEntry[]; total: number; redoable: number }>(
      "GET", `/api/projects/${projectId}/history`,
      undefined, { limit: String(limit), offset: String(offset) });
  }

  undo(projectId: string) {
    return this.request<{ sequence: number; label: string; state_hash: string }>(
      "POST", `/api/projects/${projectId}/history/undo`);
  }

  redo(projectId: string) {
    return this.request<{ sequence: number; label: string; state_hash: string }>(
      "POST", `/api/projects/${projectId}/history/redo`);
  }

  // -- reference data

  listTypes() {
    return this.request<TypeDescriptor[]>("GET", "/api/types");
  }

  describeType(name: string) {
    return this.request<TypeDescriptor>("GET", `/api/types/${name}`);
  }

  contextActions(kind: string) {
    return this.request<{ kind: string; actions: ContextAction[] }>(
      "GET", "/api/objects/context-actions", undefined, { kind });
  }
}
