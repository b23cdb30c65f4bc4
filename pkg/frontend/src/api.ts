/** Typed client for the ontosearch HTTP API.
 *
 * Mirrors the documented contract exactly; no endpoint beyond it.  Errors
 * arrive as `{"error": {"code", "message", "detail"}}` and are rethrown as
 * ApiError so callers can branch on `code` and HTTP `status`.
 */

export interface SuggestItem {
  entity_id: string;
  label: string;
  kind: "class" | "concept";
  document_count: number;
}

export interface TreeConcept {
  entity_id: string;
  relation: string;
  label: string;
}

export interface TreeNode {
  entity_id: string;
  label: string;
  document_count: number;
  concepts: TreeConcept[];
  children: TreeNode[];
}

export interface ResultRow {
  doc_id: string;
  score: number;
  title: string;
  date: string;
  language: string;
  snippet: string;
  matched_entities: string[];
}

export interface Expansion {
  entities: string[];
  /** entity id -> derivation step: self | subclass | narrower | mapping | related */
  trace: Record<string, string>;
}

export interface SearchResponse {
  query: string;
  total: number;
  results: ResultRow[];
  expansion: Record<string, Expansion>;
}

export interface TextSearchResponse extends SearchResponse {
  or_fallback: boolean;
  concepts: { entity_id: string; span: [number, number] }[];
  keywords: string[];
}

export interface ScoreBreakdown {
  components: Record<string, number>;
  weights: Record<string, number>;
  weighted_score: number;
  penalty: number;
}

export interface ParentSuggestion {
  parent: string;
  detector: string;
  evidence: string;
  resolved: boolean;
}

export type CandidateState =
  | "new" | "to_validate" | "postponed" | "accepted" | "rejected";

export interface Candidate {
  id: string;
  lemmas: string[];
  surface: string;
  frequency: number;
  doc_ids: string[];
  occurrences: [string, [number, number]][];
  state: CandidateState;
  score: number;
  breakdown: ScoreBreakdown | null;
  parents: ParentSuggestion[];
}

export interface Stats {
  documents: number;
  terms: number;
  postings: number;
  entities: number;
  associations: number;
  classes: number;
  concepts: number;
  mappings: number;
  candidates: number;
  knowledge_fingerprint: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, "Unreachable", `API unreachable: ${String(err)}`);
    }
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const error = (payload as { error?: { code?: string; message?: string; detail?: unknown } } | null)?.error;
      throw new ApiError(
        response.status,
        error?.code ?? `Http${response.status}`,
        error?.message ?? `request failed with status ${response.status}`,
        error?.detail ?? payload,
      );
    }
    return payload as T;
  }

  stats(): Promise<Stats> {
    return this.request("GET", "/api/stats");
  }

  tree(): Promise<TreeNode[]> {
    return this.request("GET", "/api/tree");
  }

  suggest(prefix: string, language = "en", limit = 10): Promise<SuggestItem[]> {
    const params = new URLSearchParams({ prefix, language, limit: String(limit) });
    return this.request("GET", `/api/suggest?${params}`);
  }

  entity(entityId: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/api/entities/${encodeURIComponent(entityId)}`);
  }

  documents(): Promise<Record<string, unknown>[]> {
    return this.request("GET", "/api/documents");
  }

  document(docId: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/api/documents/${encodeURIComponent(docId)}`);
  }

  search(query: string, includeRelated = false, limit: number | null = null): Promise<SearchResponse> {
    return this.request("POST", "/api/search", {
      query, include_related: includeRelated, limit,
    });
  }

  searchText(text: string, language = "en", includeRelated = false,
             limit: number | null = null): Promise<TextSearchResponse> {
    return this.request("POST", "/api/search/text", {
      text, language, include_related: includeRelated, limit,
    });
  }

  searchMetadata(filters: Record<string, string>): Promise<SearchResponse> {
    return this.request("POST", "/api/search/metadata", { filters });
  }

  reindex(rebuild = false): Promise<Record<string, unknown>> {
    return this.request("POST", "/api/index", { rebuild });
  }

  enrich(): Promise<{ candidates: number; new: number; ids: string[] }> {
    return this.request("POST", "/api/enrich");
  }

  candidates(state?: CandidateState): Promise<Candidate[]> {
    const suffix = state ? `?state=${encodeURIComponent(state)}` : "";
    return this.request("GET", `/api/candidates${suffix}`);
  }

  candidate(candidateId: string): Promise<Candidate> {
    return this.request("GET", `/api/candidates/${encodeURIComponent(candidateId)}`);
  }

  setCandidateState(candidateId: string, state: CandidateState, note = ""): Promise<Candidate> {
    return this.request("POST",
      `/api/candidates/${encodeURIComponent(candidateId)}/state`,
      { state, note });
  }

  exportSuggestions(): Promise<{ suggestions: Record<string, unknown>[] }> {
    return this.request("GET", "/api/suggestions/export");
  }
}
