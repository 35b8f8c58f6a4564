// Wire contract with the backend export surface (GET /space, GET /recommend).
// The explorer is a pure view over these payloads: every displayed score or
// weight is traceable to a field below, and the client computes none of them.

export interface SpaceUser {
  id: string;
  ideology: number;
  popularity: number;
  cluster: number;
  degenerate: boolean;
  /** false when the backend fell back to the median source popularity */
  placed: boolean;
}

export interface SpaceSource {
  id: string;
  ideology: number;
  popularity: number;
  cluster: number;
  degenerate: boolean;
}

export type SpaceEdge = [userId: string, sourceId: string, weight: number];

export interface SpaceDoc {
  users: SpaceUser[];
  sources: SpaceSource[];
  edges: SpaceEdge[];
}

export interface RecommendationItem {
  source_id: string;
  ideology: number;
  popularity: number;
  sample_weight: number;
  novel: boolean;
}

export interface RecommendationDoc {
  user_id: string;
  box: { theta: number; delta: number };
  items: RecommendationItem[];
}

export interface RecommendParams {
  user: string;
  theta: number;
  delta: number;
  count: number;
  seed: number;
}
