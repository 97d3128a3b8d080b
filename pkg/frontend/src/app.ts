/** Page wiring: tabs, slider, single-paper form, batch flow, analytics. */

import { ApiClient } from "./api.js";
import { seriesFromRows } from "./charts.js";
import { applyOverride, mappingPayload } from "./mapping.js";
import {
  renderBatchResults,
  renderChart,
  renderMappingTable,
  renderPreviewTable,
  renderSingleResult,
} from "./render.js";
import * as state from "./state.js";
import { truncateResult, truncateRows } from "./truncate.js";
import type { Role, SingleResult } from "./types.js";

const api = new ApiClient();
let ui = state.initialState();
let batchId: string | null = null;
let lastSingle: SingleResult | null = null;
const PREVIEW_PAGE_SIZE = 5;

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setState(next: state.UiState): void {
  ui = next;
  render();
}

function showError(message: string | null): void {
  const banner = byId<HTMLDivElement>("error-banner");
  banner.textContent = message ?? "";
  banner.classList.toggle("hidden", !message);
}

function render(): void {
  showError(ui.error);
  byId<HTMLSpanElement>("slider-value").textContent = String(ui.topN);
  for (const tab of ["single", "upload", "analytics"] as const) {
    byId(`tab-${tab}`).classList.toggle("active", ui.tab === tab);
    byId(`panel-${tab}`).classList.toggle("hidden", ui.tab !== tab);
  }

  if (lastSingle) {
    renderSingleResult(byId("single-result"), truncateResult(lastSingle, ui.topN), ui.topN);
  }

  const uploadInfo = byId<HTMLDivElement>("upload-info");
  const mappingBox = byId<HTMLDivElement>("mapping-box");
  const previewBox = byId<HTMLDivElement>("preview-box");
  const runButton = byId<HTMLButtonElement>("run-batch");
  if (ui.upload && ui.mapping) {
    const names = ui.upload.files.map((f) => `${f.name} (${f.rows} rows)`).join(", ");
    uploadInfo.textContent = `${ui.upload.files.length} file(s) uploaded: ${names}`;
    renderMappingTable(mappingBox, ui.mapping, ui.upload.columns, onMappingChange);
    const pages = renderPreviewTable(
      previewBox, ui.upload.preview, ui.upload.columns, ui.previewPage, PREVIEW_PAGE_SIZE,
    );
    byId<HTMLSpanElement>("preview-meta").textContent =
      `Data preview (${ui.upload.total_rows} papers loaded), page ${Math.min(ui.previewPage + 1, pages)}/${pages}`;
    runButton.disabled = false;
  } else {
    uploadInfo.textContent = "";
    mappingBox.replaceChildren();
    previewBox.replaceChildren();
    byId<HTMLSpanElement>("preview-meta").textContent = "";
    runButton.disabled = true;
  }

  const resultsBox = byId<HTMLDivElement>("batch-results");
  const downloadLink = byId<HTMLAnchorElement>("download-csv");
  if (ui.fullResults && batchId) {
    renderBatchResults(resultsBox, truncateRows(ui.fullResults, ui.topN), ui.topN);
    downloadLink.href = api.exportUrl(batchId, ui.topN);
    downloadLink.classList.remove("hidden");
  } else {
    resultsBox.replaceChildren();
    downloadLink.classList.add("hidden");
  }

  const chartBox = byId<HTMLDivElement>("chart-box");
  const emptyState = byId<HTMLParagraphElement>("analytics-empty");
  if (ui.fullResults) {
    emptyState.classList.add("hidden");
    renderChart(chartBox, seriesFromRows(ui.fullResults, ui.topN), ui.chartMode);
    byId<HTMLSpanElement>("analytics-meta").textContent =
      `${ui.fullResults.length} papers, top ${ui.topN}` +
      (ui.summary ? `, no recognition: ${ui.summary.no_recognition}` : "");
  } else {
    emptyState.classList.remove("hidden");
    chartBox.replaceChildren();
    byId<HTMLSpanElement>("analytics-meta").textContent = "";
  }
  for (const mode of ["bar", "pie", "donut"] as const) {
    byId(`chart-${mode}`).classList.toggle("active", ui.chartMode === mode);
  }
}

function onMappingChange(role: Role, column: string | null): void {
  if (!ui.mapping || !ui.upload) return;
  try {
    setState({ ...ui, mapping: applyOverride(ui.mapping, role, column, ui.upload.columns) });
  } catch (err) {
    setState(state.failed(ui, String(err)));
  }
}

async function onAnalyze(event: Event): Promise<void> {
  event.preventDefault();
  const fields = {
    title: byId<HTMLInputElement>("f-title").value,
    abstract: byId<HTMLTextAreaElement>("f-abstract").value,
    author_keywords: byId<HTMLInputElement>("f-author-kw").value,
    index_keywords: byId<HTMLInputElement>("f-index-kw").value,
  };
  if (!Object.values(fields).some((v) => v.trim())) {
    byId("single-validation").textContent = "Fill in at least one field.";
    return; // inline validation, no request
  }
  byId("single-validation").textContent = "";
  try {
    // ranked at 17 once; the slider re-truncates instantly client-side
    lastSingle = await api.classifySingle({ ...fields, top_n: 17 });
    setState({ ...ui, error: null });
  } catch (err) {
    setState(state.failed(ui, String(err)));
  }
}

async function onFilesChosen(fileList: FileList | null): Promise<void> {
  if (!fileList || fileList.length === 0) return;
  const files = Array.from(fileList).map((f) => ({ name: f.name, blob: f as Blob }));
  try {
    const upload = await api.uploadBatch(files);
    batchId = upload.batch_id;
    setState(state.uploadCompleted(ui, upload));
  } catch (err) {
    setState(state.failed(ui, String(err)));
  }
}

async function onRun(): Promise<void> {
  if (!batchId || !ui.mapping) return;
  const runButton = byId<HTMLButtonElement>("run-batch");
  runButton.disabled = true;
  runButton.textContent = "Running...";
  try {
    // one server ranking at 17; slider movements only truncate locally
    const resp = await api.runBatch(batchId, { mapping: mappingPayload(ui.mapping), top_n: 17 });
    setState(state.runCompleted(ui, resp.results, resp.summary));
  } catch (err) {
    setState(state.failed(ui, String(err)));
  } finally {
    runButton.textContent = "Run classification";
    runButton.disabled = ui.upload === null;
  }
}

function wire(): void {
  byId<HTMLInputElement>("slider").addEventListener("input", (e) => {
    setState(state.setSlider(ui, Number((e.target as HTMLInputElement).value)));
  });
  for (const tab of ["single", "upload", "analytics"] as const) {
    byId(`tab-${tab}`).addEventListener("click", () => setState(state.setTab(ui, tab)));
  }
  for (const mode of ["bar", "pie", "donut"] as const) {
    byId(`chart-${mode}`).addEventListener("click", () => setState(state.setChartMode(ui, mode)));
  }
  byId<HTMLFormElement>("single-form").addEventListener("submit", onAnalyze);
  const fileInput = byId<HTMLInputElement>("file-input");
  fileInput.addEventListener("change", () => onFilesChosen(fileInput.files));
  const dropZone = byId<HTMLDivElement>("drop-zone");
  dropZone.addEventListener("dragover", (e) => {
    e.preventDefault();
    dropZone.classList.add("dragging");
  });
  dropZone.addEventListener("dragleave", () => dropZone.classList.remove("dragging"));
  dropZone.addEventListener("drop", (e) => {
    e.preventDefault();
    dropZone.classList.remove("dragging");
    onFilesChosen(e.dataTransfer?.files ?? null);
  });
  byId<HTMLButtonElement>("remove-all").addEventListener("click", () => {
    fileInput.value = "";
    batchId = null;
    setState(state.uploadsCleared(ui));
  });
  byId<HTMLButtonElement>("run-batch").addEventListener("click", onRun);
  byId<HTMLButtonElement>("preview-prev").addEventListener("click", () => {
    setState({ ...ui, previewPage: Math.max(0, ui.previewPage - 1) });
  });
  byId<HTMLButtonElement>("preview-next").addEventListener("click", () => {
    setState({ ...ui, previewPage: ui.previewPage + 1 });
  });

  api
    .meta()
    .then((meta) => {
      byId("library-info").textContent =
        `library ${meta.library.provenance} - ` +
        `${Object.values(meta.totals).reduce((a, b) => a + b, 0)} sub-queries`;
      const slider = byId<HTMLInputElement>("slider");
      slider.value = String(meta.default_top_n);
      setState(state.setSlider(ui, meta.default_top_n));
    })
    .catch((err) => setState(state.failed(ui, `service unreachable: ${err}`)));
}

document.addEventListener("DOMContentLoaded", () => {
  wire();
  render();
});
