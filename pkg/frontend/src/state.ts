/** UI state and pure transitions; rendering reads, handlers dispatch. */

import type { Mapping } from "./mapping.js";
import type { BatchRow, SummaryData, UploadResponse } from "./types.js";
import { clampTopN } from "./truncate.js";

export type Tab = "single" | "upload" | "analytics";
export type ChartMode = "bar" | "pie" | "donut";

export interface UiState {
  tab: Tab;
  /** Slider value 1..17; results are re-truncated to it client-side. */
  topN: number;
  chartMode: ChartMode;
  upload: UploadResponse | null;
  mapping: Mapping | null;
  /** Full server results ranked at top_n=17; truncation happens at render. */
  fullResults: BatchRow[] | null;
  summary: SummaryData | null;
  /** Slider value the visible results were last rendered with. */
  resultsTopN: number | null;
  previewPage: number;
  error: string | null;
}

export function initialState(defaultTopN = 3): UiState {
  return {
    tab: "single",
    topN: clampTopN(defaultTopN),
    chartMode: "bar",
    upload: null,
    mapping: null,
    fullResults: null,
    summary: null,
    resultsTopN: null,
    previewPage: 0,
    error: null,
  };
}

export function setTab(state: UiState, tab: Tab): UiState {
  return { ...state, tab };
}

export function setSlider(state: UiState, value: number): UiState {
  const topN = clampTopN(value);
  return {
    ...state,
    topN,
    resultsTopN: state.fullResults ? topN : state.resultsTopN,
  };
}

export function setChartMode(state: UiState, chartMode: ChartMode): UiState {
  return { ...state, chartMode };
}

export function uploadCompleted(state: UiState, upload: UploadResponse): UiState {
  return {
    ...state,
    upload,
    mapping: { ...upload.mapping },
    fullResults: null,
    summary: null,
    resultsTopN: null,
    previewPage: 0,
    error: null,
  };
}

export function uploadsCleared(state: UiState): UiState {
  return {
    ...state,
    upload: null,
    mapping: null,
    fullResults: null,
    summary: null,
    resultsTopN: null,
    previewPage: 0,
  };
}

export function runCompleted(state: UiState, results: BatchRow[], summary: SummaryData | null): UiState {
  return { ...state, fullResults: results, summary, resultsTopN: state.topN, error: null };
}

export function failed(state: UiState, message: string): UiState {
  return { ...state, error: message };
}
