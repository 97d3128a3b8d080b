/** Request/response shapes of the classification service API. */

export type Role = "title" | "abstract" | "author_keywords" | "index_keywords";

export const ROLES: Role[] = ["title", "abstract", "author_keywords", "index_keywords"];

export interface SubqueryInfo {
  id: string;
  label: string;
  query: string;
}

export interface ResultEntry {
  sdg_id: number;
  sdg_name: string;
  score: number;
  confidence: number;
  matched: number;
  total: number;
  /** Single-paper responses expand these to SubqueryInfo; batch rows carry ids. */
  matched_subqueries: (SubqueryInfo | string)[];
}

export interface SingleResult {
  no_recognition: boolean;
  top_n: number;
  library: string;
  entries: ResultEntry[];
}

export interface BatchRow extends SingleResult {
  row_index: number;
  source_file: string;
  classifiable: boolean;
}

export interface RoleBinding {
  column: string | null;
  provenance: string;
}

export interface UploadedFile {
  name: string;
  rows: number;
  columns: string[];
}

export interface PreviewRow {
  row_index: number;
  cells: Record<string, string>;
}

export interface UploadResponse {
  batch_id: string;
  files: UploadedFile[];
  total_rows: number;
  columns: string[];
  mapping: Record<Role, RoleBinding>;
  preview: PreviewRow[];
  warnings: string[];
}

export interface SummaryData {
  top_n: number;
  total: number;
  no_recognition: number;
  rank_counts: Record<string, number[]>;
  cumulative: Record<string, number[]>;
}

export interface RunResponse {
  top_n: number;
  library: string;
  results: BatchRow[];
  summary: SummaryData | null;
}

export interface MetaResponse {
  library: { name: string; version: string; provenance: string };
  totals: Record<string, number>;
  sdg_names: Record<string, number>;
  warnings: string[];
  default_top_n: number;
  max_upload_bytes: number;
  build: string;
}
