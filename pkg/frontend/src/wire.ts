/** Wire types for the /v1 JSON contract. */

/** One stroke in corpus shape: two parallel coordinate arrays [xs, ys]. */
export type CorpusStroke = [number[], number[]];

export interface ShiftRequest {
  label: string;
  strokes: CorpusStroke[];
  novelty: NoveltyLevel;
}

export type NoveltyLevel = "low" | "intermediate" | "high";

export const NOVELTY_LEVELS: NoveltyLevel[] = ["low", "intermediate", "high"];

export interface ShiftReply {
  target_label: string;
  novelty: string;
  visual_similarity: number;
  conceptual_similarity: number;
  composite: number;
  fallback_used: boolean;
  sketch: CorpusStroke[];
  request_id: string;
}

export interface ErrorBody {
  error_code: string;
  detail?: string;
}

export interface CategoriesReply {
  categories: string[];
  k: number;
  extractor: { kind: string; dimension: number; version: string };
}
