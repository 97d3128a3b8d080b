/** Client-side Top-N re-truncation.
 *
 * The UI requests one server result ranked at top_n=17 and truncates it
 * locally as the slider moves.  This matches server semantics exactly
 * because Top-k results are always a prefix of Top-(k+1) results; the
 * e2e test verifies that against a live service.
 */

import type { BatchRow, ResultEntry, SingleResult } from "./types.js";

export function clampTopN(value: number): number {
  if (!Number.isFinite(value)) return 3;
  return Math.min(17, Math.max(1, Math.round(value)));
}

export function truncateEntries(entries: ResultEntry[], topN: number): ResultEntry[] {
  return entries.slice(0, clampTopN(topN));
}

export function truncateResult<T extends SingleResult | BatchRow>(result: T, topN: number): T {
  return { ...result, entries: truncateEntries(result.entries, topN), top_n: clampTopN(topN) };
}

export function truncateRows(rows: BatchRow[], topN: number): BatchRow[] {
  return rows.map((r) => truncateResult(r, topN));
}

/** True when `shorter` is exactly the first entries of `longer` (append-only slider). */
export function isEntryPrefix(shorter: ResultEntry[], longer: ResultEntry[]): boolean {
  if (shorter.length > longer.length) return false;
  return shorter.every((e, i) => longer[i].sdg_id === e.sdg_id && longer[i].score === e.score);
}
