// Wire types mirroring the service's response schemas.

export type DocType = 'FC' | 'PE' | 'PS';
export type NodeTypeName = DocType | 'LN';

export interface PathStep {
  category: string;
  weight: number;
}

export interface ResultItem {
  id: string;
  label: string;
  type: DocType;
  score: number;
  base: boolean;
  path: PathStep[];
}

export interface SearchResponse {
  results: ResultItem[];
}

export interface NodeDetail {
  id: string;
  type: NodeTypeName;
  label: string;
  payload: Record<string, unknown>;
  structure_parent: string | null;
  degree: number;
}

export interface SubgraphNode {
  id: string;
  type: NodeTypeName;
  label: string;
}

export interface SubgraphEdge {
  a: string;
  b: string;
  category: string;
  weight: number;
}

export interface SubgraphResponse {
  nodes: SubgraphNode[];
  edges: SubgraphEdge[];
}

export interface StatsResponse {
  total_nodes: number;
  total_relations: number;
  nodes: { type: string; count: number; percent: number }[];
  relations: { category: string; count: number }[];
}

export interface ApiError {
  code: string;
  message: string;
}
