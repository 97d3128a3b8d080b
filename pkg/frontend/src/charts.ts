/** SDG frequency chart data and SVG geometry (bar, pie, donut).
 *
 * The data series is derived by counting, never by re-scoring: it must
 * equal the server's summary export for the same top-N.
 */

import type { BatchRow, SummaryData } from "./types.js";

export const SDG_COLORS: Record<number, string> = {
  1: "#E5243B", 2: "#DDA63A", 3: "#4C9F38", 4: "#C5192D", 5: "#FF3A21",
  6: "#26BDE2", 7: "#FCC30B", 8: "#A21942", 9: "#FD6925", 10: "#DD1367",
  11: "#FD9D24", 12: "#BF8B2E", 13: "#3F7E44", 14: "#0A97D9", 15: "#56C02B",
  16: "#00689D", 17: "#19486A",
};

export interface SeriesPoint {
  sdgId: number;
  count: number;
}

/** Papers whose top-k entries include each SDG; index order 1..17. */
export function seriesFromRows(rows: BatchRow[], topN: number): SeriesPoint[] {
  const counts = new Array<number>(17).fill(0);
  for (const row of rows) {
    for (const entry of row.entries.slice(0, topN)) {
      counts[entry.sdg_id - 1] += 1;
    }
  }
  return counts.map((count, i) => ({ sdgId: i + 1, count }));
}

/** The same series read off a server summary (cumulative top-k counts). */
export function seriesFromSummary(summary: SummaryData, topN: number): SeriesPoint[] {
  const k = Math.min(topN, summary.top_n);
  const points: SeriesPoint[] = [];
  for (let sdg = 1; sdg <= 17; sdg++) {
    const cumulative = summary.cumulative[String(sdg)] ?? [];
    points.push({ sdgId: sdg, count: cumulative[k - 1] ?? 0 });
  }
  return points;
}

export interface BarRect {
  sdgId: number;
  x: number;
  y: number;
  width: number;
  height: number;
  color: string;
  count: number;
}

export function barRects(series: SeriesPoint[], width: number, height: number): BarRect[] {
  const max = Math.max(1, ...series.map((p) => p.count));
  const slot = width / series.length;
  const barWidth = slot * 0.7;
  return series.map((p, i) => {
    const h = (p.count / max) * (height - 4);
    return {
      sdgId: p.sdgId,
      x: i * slot + (slot - barWidth) / 2,
      y: height - h,
      width: barWidth,
      height: h,
      color: SDG_COLORS[p.sdgId],
      count: p.count,
    };
  });
}

export interface PieSlice {
  sdgId: number;
  path: string;
  color: string;
  count: number;
  fraction: number;
}

function polar(cx: number, cy: number, r: number, angle: number): [number, number] {
  return [cx + r * Math.cos(angle), cy + r * Math.sin(angle)];
}

function arcPath(
  cx: number,
  cy: number,
  r: number,
  inner: number,
  start: number,
  end: number,
): string {
  const largeArc = end - start > Math.PI ? 1 : 0;
  const [x0, y0] = polar(cx, cy, r, start);
  const [x1, y1] = polar(cx, cy, r, end);
  if (inner <= 0) {
    return `M ${cx} ${cy} L ${x0} ${y0} A ${r} ${r} 0 ${largeArc} 1 ${x1} ${y1} Z`;
  }
  const [x2, y2] = polar(cx, cy, inner, end);
  const [x3, y3] = polar(cx, cy, inner, start);
  return (
    `M ${x0} ${y0} A ${r} ${r} 0 ${largeArc} 1 ${x1} ${y1} ` +
    `L ${x2} ${y2} A ${inner} ${inner} 0 ${largeArc} 0 ${x3} ${y3} Z`
  );
}

/** Pie (inner=0) or donut slices; zero-count SDGs are omitted.  A lone
 * slice covering the whole circle is split in two so the arc renders. */
export function pieSlices(
  series: SeriesPoint[],
  cx: number,
  cy: number,
  r: number,
  inner = 0,
): PieSlice[] {
  const total = series.reduce((acc, p) => acc + p.count, 0);
  if (total === 0) return [];
  const slices: PieSlice[] = [];
  let angle = -Math.PI / 2;
  for (const p of series) {
    if (p.count === 0) continue;
    const fraction = p.count / total;
    const sweep = fraction * 2 * Math.PI;
    let path: string;
    if (fraction === 1) {
      const mid = angle + Math.PI;
      path = arcPath(cx, cy, r, inner, angle, mid) + " " + arcPath(cx, cy, r, inner, mid, angle + sweep);
    } else {
      path = arcPath(cx, cy, r, inner, angle, angle + sweep);
    }
    slices.push({ sdgId: p.sdgId, path, color: SDG_COLORS[p.sdgId], count: p.count, fraction });
    angle += sweep;
  }
  return slices;
}
