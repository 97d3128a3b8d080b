/** Thin client for the classification service; all scores come from here. */

import type { MetaResponse, RunResponse, SingleResult, UploadResponse } from "./types.js";

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = `${resp.status} ${resp.statusText}`;
    try {
      const body = await resp.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      /* non-JSON error body; keep the status line */
    }
    throw new Error(detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private base: string = "") {}

  meta(): Promise<MetaResponse> {
    return fetch(`${this.base}/api/meta`).then((r) => asJson<MetaResponse>(r));
  }

  classifySingle(fields: {
    title: string;
    abstract: string;
    author_keywords: string;
    index_keywords: string;
    top_n: number;
  }): Promise<SingleResult> {
    return fetch(`${this.base}/api/classify`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(fields),
    }).then((r) => asJson<SingleResult>(r));
  }

  uploadBatch(files: { name: string; blob: Blob }[]): Promise<UploadResponse> {
    const form = new FormData();
    for (const f of files) form.append("files", f.blob, f.name);
    return fetch(`${this.base}/api/batch`, { method: "POST", body: form }).then((r) =>
      asJson<UploadResponse>(r),
    );
  }

  runBatch(
    batchId: string,
    body: { mapping?: Record<string, string>; top_n?: number },
  ): Promise<RunResponse> {
    return fetch(`${this.base}/api/batch/${batchId}/run`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => asJson<RunResponse>(r));
  }

  exportUrl(batchId: string, topN: number): string {
    return `${this.base}/api/batch/${batchId}/export?format=csv&top_n=${topN}`;
  }

  async exportCsv(batchId: string, topN: number): Promise<string> {
    const resp = await fetch(this.exportUrl(batchId, topN));
    if (!resp.ok) throw new Error(`export failed: ${resp.status}`);
    return await resp.text();
  }
}
