// Client-side session state for a design session. The service is stateless,
// so everything here lives in the page: inserted elements, their latest
// recommendation cards, search history and the shared controls. The UI never
// reorders or rescores anything; every list is stored exactly as the server
// returned it.
//
// Concurrent requests resolve last-write-wins per panel: each request takes a
// sequence number and a response is dropped when a newer request for the same
// panel has already been issued.

import { ApiClient, ServiceError } from './api';
import type { DocType, ResultItem, SubgraphResponse } from './types';

export interface SearchPanel {
  query: string;
  results: ResultItem[];
  error: string | null;
  requestDepth: number;
  requestLimit: number;
}

export interface RecommendationCard {
  elementId: string;
  elementLabel: string;
  results: ResultItem[];
  error: string | null;
  requestDepth: number;
  requestLimit: number;
}

export interface GraphPanel {
  nodeId: string;
  radius: number;
  data: SubgraphResponse;
}

export interface SessionState {
  depth: number;
  limit: number;
  typeFilter: DocType[];
  searchHistory: string[];
  search: SearchPanel | null;
  insertedElements: string[];
  cards: Record<string, RecommendationCard>;
  graph: GraphPanel | null;
  notice: string | null;
}

export const DEPTH_MIN = 0;
export const DEPTH_MAX = 3;

export class Session {
  readonly state: SessionState = {
    depth: 1,
    limit: 20,
    typeFilter: ['FC'],
    searchHistory: [],
    search: null,
    insertedElements: [],
    cards: {},
    graph: null,
    notice: null,
  };

  private sequence = 0;
  private applied: Record<string, number> = {};
  private listeners: (() => void)[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private changed(): void {
    for (const listener of this.listeners) listener();
  }

  private nextSeq(): number {
    this.sequence += 1;
    return this.sequence;
  }

  /** True when `seq` is still the newest request issued for `panel`. */
  private accept(panel: string, seq: number): boolean {
    if ((this.applied[panel] ?? 0) > seq) return false;
    this.applied[panel] = seq;
    return true;
  }

  private issue(panel: string): number {
    const seq = this.nextSeq();
    this.applied[panel] = seq;
    return seq;
  }

  async performSearch(query: string): Promise<void> {
    const seq = this.issue('search');
    const depth = this.state.depth;
    const limit = this.state.limit;
    try {
      const response = await this.api.search({
        query,
        depth,
        limit,
        result_types: this.state.typeFilter,
      });
      if (!this.accept('search', seq)) return;
      this.state.search = {
        query,
        results: response.results,
        error: null,
        requestDepth: depth,
        requestLimit: limit,
      };
      this.state.searchHistory.push(query);
    } catch (err) {
      if (!this.accept('search', seq)) return;
      const message = err instanceof ServiceError ? `${err.code}: ${err.message}` : String(err);
      // inline error, previous list untouched
      this.state.search = this.state.search
        ? { ...this.state.search, error: message }
        : { query, results: [], error: message, requestDepth: depth, requestLimit: limit };
    }
    this.changed();
  }

  async insertElement(elementId: string): Promise<void> {
    if (this.state.insertedElements.includes(elementId)) {
      this.state.notice = `element ${elementId} is already inserted`;
      this.changed();
      return;
    }
    let label = elementId;
    try {
      const detail = await this.api.node(elementId);
      if (detail.type !== 'PE') {
        this.state.notice = `${elementId} is a ${detail.type} node, not a project element`;
        this.changed();
        return;
      }
      label = detail.label;
    } catch (err) {
      const message = err instanceof ServiceError ? `${err.code}: ${err.message}` : String(err);
      this.state.notice = message; // session unchanged
      this.changed();
      return;
    }
    this.state.notice = null;
    this.state.insertedElements.push(elementId);
    this.changed();
    await this.refreshCard(elementId, label);
  }

  removeElement(elementId: string): void {
    this.state.insertedElements = this.state.insertedElements.filter((id) => id !== elementId);
    delete this.state.cards[elementId];
    this.changed();
  }

  private async refreshCard(elementId: string, label?: string): Promise<void> {
    const panel = `card:${elementId}`;
    const seq = this.issue(panel);
    const depth = this.state.depth;
    const limit = this.state.limit;
    const previous = this.state.cards[elementId];
    try {
      const response = await this.api.recommend({ element_id: elementId, depth, limit });
      if (!this.accept(panel, seq)) return;
      if (!this.state.insertedElements.includes(elementId)) return; // removed meanwhile
      this.state.cards[elementId] = {
        elementId,
        elementLabel: label ?? previous?.elementLabel ?? elementId,
        results: response.results,
        error: null,
        requestDepth: depth,
        requestLimit: limit,
      };
    } catch (err) {
      if (!this.accept(panel, seq)) return;
      if (!this.state.insertedElements.includes(elementId)) return;
      const message = err instanceof ServiceError ? `${err.code}: ${err.message}` : String(err);
      this.state.cards[elementId] = {
        elementId,
        elementLabel: label ?? previous?.elementLabel ?? elementId,
        results: previous?.results ?? [],
        error: message,
        requestDepth: depth,
        requestLimit: limit,
      };
    }
    this.changed();
  }

  /** Depth slider: re-issues the search and every recommendation card so the
   * panels stay mutually comparable at the new depth. */
  async setDepth(depth: number): Promise<void> {
    if (depth < DEPTH_MIN || depth > DEPTH_MAX) {
      throw new RangeError(`depth must be between ${DEPTH_MIN} and ${DEPTH_MAX}`);
    }
    this.state.depth = depth;
    this.changed();
    await this.refreshAll();
  }

  async setLimit(limit: number): Promise<void> {
    this.state.limit = limit;
    this.changed();
    await this.refreshAll();
  }

  async setTypeFilter(types: DocType[]): Promise<void> {
    this.state.typeFilter = types;
    this.changed();
    if (this.state.search) {
      await this.performSearch(this.state.search.query);
    }
  }

  private async refreshAll(): Promise<void> {
    const work: Promise<void>[] = [];
    if (this.state.search) {
      work.push(this.performSearch(this.state.search.query));
    }
    for (const elementId of this.state.insertedElements) {
      work.push(this.refreshCard(elementId));
    }
    await Promise.all(work);
  }

  async exploreNeighborhood(nodeId: string, radius: number): Promise<void> {
    const panel = 'graph';
    const seq = this.issue(panel);
    try {
      const data = await this.api.subgraph(nodeId, radius);
      if (!this.accept(panel, seq)) return;
      this.state.graph = { nodeId, radius, data };
      this.state.notice = null;
    } catch (err) {
      if (!this.accept(panel, seq)) return;
      const message = err instanceof ServiceError ? `${err.code}: ${err.message}` : String(err);
      this.state.notice = message;
    }
    this.changed();
  }
}
