/** Shapes of the /v1 API documents the explorer consumes. */

export type FactorKind = "target" | "control" | "general" | "special";

export interface FactorDoc {
  id: string;
  name: string;
  kind: FactorKind;
  parent: string | null;
}

export interface EdgeDoc {
  source: string;
  target: string;
  weight: number;
}

export interface MapDoc {
  format: string;
  kind: string;
  metadata: { name: string; version: string; municipality_type: unknown };
  factors: FactorDoc[];
  edges: EdgeDoc[];
}

export interface MapListEntry {
  id: string;
  revision: number;
  name?: string | null;
  factors?: number;
  edges?: number;
}

export interface TrajectoryDoc {
  format: string;
  kind: string;
  factors: string[];
  horizon: number;
  y: number[][];
  o: number[][];
}

export interface StabilityDoc {
  spectral_radius: number;
  classification: string;
  tol: number;
}

export interface AnalysisDoc {
  format: string;
  kind: string;
  factors: string[];
  stability: StabilityDoc;
  closure: { v_plus: number[][]; v_minus: number[][] };
  influence: {
    P: number[][];
    C: number[][];
    D: number[][];
    per_factor: {
      influence_on_system: number[];
      susceptibility: number[];
      consonance_on_system: number[];
    };
  };
}

export interface RankingEntry {
  name: string;
  target_delta: number;
  distance: number;
}

export interface RankingDoc {
  format: string;
  kind: string;
  ranking: RankingEntry[];
}

export interface InvertDoc {
  format: string;
  kind: string;
  impulse: Record<string, number>;
  achieved_delta: number;
  residual: number;
}

export interface ScenarioBody {
  name: string;
  controls: string[];
  schedule: Record<string, Record<string, number>>;
  horizon: number;
  clamp?: boolean;
  y_base?: Record<string, number> | null;
}

export interface TargetBody {
  factor: string;
  desired_delta: number;
  horizon: number;
}

/** A parsed response paired with the exact bytes the server sent. */
export interface Raw<T> {
  doc: T;
  raw: string;
}
