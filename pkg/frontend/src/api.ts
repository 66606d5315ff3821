// Thin HTTP client for the lessonsgraph service. Every error body is
// {code, message}; non-JSON failures surface as code HTTP_<status>.

import type {
  ApiError,
  NodeDetail,
  SearchResponse,
  StatsResponse,
  SubgraphResponse,
} from './types';

export class ServiceError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.code = code;
  }
}

export interface SearchParams {
  query: string;
  depth?: number;
  limit?: number;
  result_types?: string[];
}

export interface RecommendParams {
  element_id?: string;
  element_text?: string;
  depth?: number;
  limit?: number;
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let error: ApiError = { code: `HTTP_${response.status}`, message: response.statusText };
      try {
        const body = (await response.json()) as Partial<ApiError>;
        if (body && typeof body.code === 'string') {
          error = { code: body.code, message: body.message ?? '' };
        }
      } catch {
        // keep the HTTP status fallback
      }
      throw new ServiceError(error.code, error.message);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  search(params: SearchParams): Promise<SearchResponse> {
    return this.post<SearchResponse>('/search', params);
  }

  recommend(params: RecommendParams): Promise<SearchResponse> {
    return this.post<SearchResponse>('/recommend', params);
  }

  node(id: string): Promise<NodeDetail> {
    return this.request<NodeDetail>(`/nodes/${encodeURIComponent(id)}`);
  }

  subgraph(id: string, radius: number): Promise<SubgraphResponse> {
    const query = `node=${encodeURIComponent(id)}&radius=${radius}`;
    return this.request<SubgraphResponse>(`/subgraph?${query}`);
  }

  stats(): Promise<StatsResponse> {
    return this.request<StatsResponse>('/stats');
  }
}
