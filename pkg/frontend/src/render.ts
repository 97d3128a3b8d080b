/** DOM builders for results, mapping, preview and charts. */

import { barRects, pieSlices, SDG_COLORS, type SeriesPoint } from "./charts.js";
import type { Mapping } from "./mapping.js";
import { ROLES, type BatchRow, type PreviewRow, type ResultEntry, type Role, type SingleResult, type SubqueryInfo } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "text") node.textContent = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) node.append(child);
  return node;
}

function scorePercent(entry: ResultEntry): string {
  return `${(entry.score * 100).toFixed(1)}%`;
}

function isExpanded(sq: SubqueryInfo | string): sq is SubqueryInfo {
  return typeof sq !== "string";
}

function entryCard(entry: ResultEntry): HTMLElement {
  const header = el("div", { class: "entry-header" }, [
    el("span", { class: "sdg-badge", text: `SDG ${entry.sdg_id}`, style: `background:${SDG_COLORS[entry.sdg_id]}` }),
    el("span", { class: "sdg-name", text: entry.sdg_name }),
    el("span", {
      class: "entry-score",
      text: `score ${scorePercent(entry)} (${entry.matched}/${entry.total} sub-queries)`,
    }),
  ]);
  const bar = el("div", { class: "score-track" }, [
    el("div", {
      class: "score-fill",
      style: `width:${entry.score * 100}%;background:${SDG_COLORS[entry.sdg_id]}`,
    }),
  ]);
  const card = el("div", { class: "entry-card" }, [header, bar]);
  if (entry.matched_subqueries.length > 0 && entry.matched_subqueries.every(isExpanded)) {
    const list = el("ul", { class: "subquery-list" });
    for (const sq of entry.matched_subqueries as SubqueryInfo[]) {
      list.append(
        el("li", {}, [
          el("code", { text: sq.id }),
          el("span", { text: sq.label ? ` ${sq.label}` : "" }),
          el("pre", { text: sq.query }),
        ]),
      );
    }
    card.append(
      el("details", { class: "transparency" }, [
        el("summary", { text: `matched sub-queries (${entry.matched})` }),
        list,
      ]),
    );
  }
  return card;
}

export function renderSingleResult(container: HTMLElement, result: SingleResult, topN: number): void {
  container.replaceChildren();
  if (result.no_recognition) {
    container.append(el("p", { class: "muted", text: "No recognition: no SDG sub-query matched this paper." }));
    return;
  }
  container.append(el("p", { class: "muted", text: `library ${result.library}, top ${topN}` }));
  for (const entry of result.entries.slice(0, topN)) container.append(entryCard(entry));
}

export function renderMappingTable(
  container: HTMLElement,
  mapping: Mapping,
  columns: string[],
  onChange: (role: Role, column: string | null) => void,
): void {
  container.replaceChildren();
  const labels: Record<Role, string> = {
    title: "Title",
    abstract: "Abstract",
    author_keywords: "Author Keywords",
    index_keywords: "Index Keywords",
  };
  const table = el("table", { class: "mapping-table" });
  for (const role of ROLES) {
    const select = el("select", { "data-role": role }) as HTMLSelectElement;
    select.append(el("option", { value: "", text: "(none)" }));
    for (const col of columns) {
      const option = el("option", { value: col, text: col });
      if (mapping[role].column === col) option.setAttribute("selected", "selected");
      select.append(option);
    }
    select.addEventListener("change", () => onChange(role, select.value || null));
    const badge = el("span", { class: `prov prov-${mapping[role].provenance}`, text: mapping[role].provenance });
    table.append(
      el("tr", {}, [
        el("td", { text: `${labels[role]}:` }),
        el("td", {}, [select]),
        el("td", {}, [badge]),
      ]),
    );
  }
  container.append(table);
}

export function renderPreviewTable(
  container: HTMLElement,
  preview: PreviewRow[],
  columns: string[],
  page: number,
  pageSize: number,
): number {
  container.replaceChildren();
  const pages = Math.max(1, Math.ceil(preview.length / pageSize));
  const current = Math.min(page, pages - 1);
  const slice = preview.slice(current * pageSize, (current + 1) * pageSize);
  const shown = columns.slice(0, 6);
  const head = el("tr", {}, [el("th", { text: "#" }), ...shown.map((c) => el("th", { text: c }))]);
  const table = el("table", { class: "preview-table" }, [head]);
  for (const row of slice) {
    table.append(
      el("tr", {}, [
        el("td", { text: String(row.row_index) }),
        ...shown.map((c) => el("td", { text: (row.cells[c] ?? "").slice(0, 90) })),
      ]),
    );
  }
  container.append(table);
  return pages;
}

export function renderBatchResults(container: HTMLElement, rows: BatchRow[], topN: number): void {
  container.replaceChildren();
  const head = el("tr", {}, [
    el("th", { text: "#" }),
    el("th", { text: "file" }),
    el("th", { text: `top ${topN} SDGs` }),
  ]);
  const table = el("table", { class: "results-table" }, [head]);
  for (const row of rows) {
    const cell = el("td", { class: "sdg-cells" });
    if (row.no_recognition) {
      cell.append(el("span", { class: "muted", text: "no recognition" }));
    }
    for (const entry of row.entries.slice(0, topN)) {
      cell.append(
        el("span", {
          class: "sdg-chip",
          style: `background:${SDG_COLORS[entry.sdg_id]}`,
          text: `SDG ${entry.sdg_id} ${scorePercent(entry)}`,
          title: `${entry.sdg_name}: ${entry.matched}/${entry.total} matched`,
        }),
      );
    }
    table.append(
      el("tr", {}, [
        el("td", { text: String(row.row_index) }),
        el("td", { text: row.source_file }),
        cell,
      ]),
    );
  }
  container.append(table);
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function renderChart(
  container: HTMLElement,
  series: SeriesPoint[],
  mode: "bar" | "pie" | "donut",
): void {
  container.replaceChildren();
  const width = 640;
  const height = 300;
  const svg = svgEl("svg", { viewBox: `0 0 ${width} ${height}`, class: "chart" });
  if (mode === "bar") {
    for (const rect of barRects(series, width, height - 20)) {
      if (rect.count > 0) {
        const title = svgEl("title", {});
        title.textContent = `SDG ${rect.sdgId}: ${rect.count}`;
        const r = svgEl("rect", {
          x: String(rect.x),
          y: String(rect.y),
          width: String(rect.width),
          height: String(rect.height),
          fill: rect.color,
        });
        r.append(title);
        svg.append(r);
      }
      const label = svgEl("text", {
        x: String(rect.x + rect.width / 2),
        y: String(height - 6),
        "text-anchor": "middle",
        class: "bar-label",
      });
      label.textContent = String(rect.sdgId);
      svg.append(label);
    }
  } else {
    const inner = mode === "donut" ? 70 : 0;
    for (const slice of pieSlices(series, width / 2, height / 2, 130, inner)) {
      const title = svgEl("title", {});
      title.textContent = `SDG ${slice.sdgId}: ${slice.count} (${(slice.fraction * 100).toFixed(1)}%)`;
      const path = svgEl("path", { d: slice.path, fill: slice.color, class: "slice" });
      path.append(title);
      svg.append(path);
    }
  }
  container.append(svg);
  const legend = el("div", { class: "legend" });
  for (const p of series) {
    if (p.count === 0) continue;
    legend.append(
      el("span", { class: "legend-item" }, [
        el("span", { class: "legend-swatch", style: `background:${SDG_COLORS[p.sdgId]}` }),
        `SDG ${p.sdgId}: ${p.count}`,
      ]),
    );
  }
  container.append(legend);
}
