// Shapes returned by the bwtx HTTP service. Field names mirror the JSON
// payloads exactly, so everything here is snake_case.

export interface RunStats {
  end_marker_used: number;
  original_size: number;
  run_count: number;
  rle_length: number;
}

export interface TransformInfo {
  id: string;
  name: string;
  order: number[];
  spec: string;
  highlights: number[];
  stats: RunStats | null;
}

export interface AlphabetEntry {
  byte: number;
  count: number;
}

export interface SessionSummary {
  session_id: string;
  size: number;
  m: number;
  end_marker: number;
  alphabet: AlphabetEntry[];
  window: { rows: number; cols: number };
  transforms: TransformInfo[];
}

export interface WindowPayload {
  top_row: number;
  left_col: number;
  height: number;
  width: number;
  m: number;
  rows: string[];
  l_column: string;
  truncated: boolean[];
}

export interface SearchResult {
  row: number | null;
  interval: [number, number];
}

export interface HighlightResult {
  transform_id: string;
  highlights: number[];
}

export interface PropagateResult {
  rows: Record<string, number>;
  highlights: Record<string, number[]>;
}

export interface RunBreakerItem {
  row: number;
  breaker: number;
  flanked_by: number;
}

export interface PotentialRunItem {
  character: number;
  member_runs: [number, number][];
  gaps: [number, number][];
  total_length: number;
  total_gap: number;
}

export interface SectionItem {
  first_char: number;
  rows: [number, number];
}

export interface ConstraintItem {
  lesser: number;
  greater: number;
  rows: [number, number];
  depth: number;
  immovable: boolean;
}

export interface PairsItem {
  section: SectionItem;
  pairs: ConstraintItem[];
}

export type AnalysisKind =
  | "run_breakers"
  | "potential_runs"
  | "sections"
  | "pairs";

export interface AnalysisResult<T> {
  kind: AnalysisKind;
  items: T[];
}

export interface ProposeResult {
  order: number[];
  spec: string;
  preview_stats: RunStats;
}

export interface OrderConstraintInput {
  lesser: number;
  greater: number;
}

export interface MoveInput {
  ch: number;
  anchor: number;
  placement: "before" | "after";
}

export interface ApiErrorBody {
  code: string;
  message: string;
  cycle?: number[];
}

export const PRESET_NAMES = [
  "ascii",
  "reverse_ascii",
  "least_frequent",
  "most_frequent",
  "chapin_tate",
  "order_of_appearance",
  "vowels_first",
] as const;

export type PresetName = (typeof PRESET_NAMES)[number];
