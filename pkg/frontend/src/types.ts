/** API payload shapes, mirrored from the service's response models. */

export type Relation = "<" | ">" | "=" | "-";

export const RELATIONS: Relation[] = ["<", ">", "=", "-"];

export interface EndpointView {
  ref: string;
  entity_id: string;
  side: string;
  entity_text: string;
  kind: string;
  is_dct: boolean;
}

export interface CellView {
  source: string;
  target: string;
  relation: string | null;
  provenance: string;
  playable: boolean;
}

export interface BoardView {
  endpoints: EndpointView[];
  cells: CellView[];
}

export interface EntityView {
  id: string;
  text: string;
  start: number;
  end: number;
  kind: string;
  is_dct: boolean;
}

export interface RelationRef {
  source: string;
  target: string;
  relation: string;
}

export interface ComparisonCell {
  source: string;
  target: string;
  predicted: string;
  gold: string | null;
  provenance: string;
  mismatch: boolean;
}

export interface EpisodeState {
  episode_id: string;
  game_id: string;
  level: number;
  text: string;
  entities: EntityView[];
  board: BoardView;
  score: number;
  status: string;
  done: boolean;
  comparison: ComparisonCell[] | null;
}

export interface StepResult {
  reward: number;
  terminal_reward: number;
  done: boolean;
  status: string;
  score: number;
  inferred: RelationRef[];
  board: BoardView;
  comparison: ComparisonCell[] | null;
}

export interface SessionState {
  session_id: string;
  text: string;
  dct: string | null;
  entities: EntityView[];
  board: BoardView;
  coherent: boolean;
}

export interface ConflictView {
  source: string;
  target: string;
  existing: string;
  attempted: string;
}

export interface AnnotateResult {
  coherent: boolean;
  inferred: RelationRef[];
  conflict: ConflictView | null;
  session: SessionState;
}

export interface NextPair {
  source: string;
  target: string;
  mode: string;
  confidence: number | null;
}

export interface LevelsInfo {
  levels: { level: number; games: number }[];
}

export interface AnnotationImport {
  dct?: string;
  text: string;
  entities?: { start: number; end: number }[];
}
