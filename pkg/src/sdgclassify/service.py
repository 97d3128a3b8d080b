"""HTTP service exposing the classification engine to the web UI.

Endpoints (JSON over HTTP):

    GET  /api/meta                      library name/version, per-SDG totals
    POST /api/classify                  single-paper classification
    POST /api/batch                     multipart upload -> mapping proposal
    POST /api/batch/{id}/run            confirmed mapping -> results + summary
    GET  /api/batch/{id}/export?format=csv[&top_n=k]   CLI-identical CSV

The compiled library is immutable shared state; batch jobs are kept in
memory only (synchronous, desk-scale workflow -- no job store).
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, File, HTTPException, UploadFile
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import __version__, analytics, batch, ingestion, library
from .engine import SDG_IDS, SDG_NAMES


@dataclass
class ServiceConfig:
    library_path: str
    host: str = "127.0.0.1"
    port: int = 8000
    default_top_n: int = 3
    max_upload_bytes: int = 50 * 1024 * 1024
    workers: int = 1
    frontend_dir: str | None = None


@dataclass
class _Upload:
    name: str
    text: str
    delimiter: str


@dataclass
class _BatchState:
    uploads: list[_Upload]
    records: list[ingestion.PaperRecord]
    diagnostics: list[ingestion.BatchDiagnostics]
    run_mapping: dict[str, str] | None = None
    run_top_n: int | None = None
    has_run: bool = False
    warnings: list[str] = field(default_factory=list)


class ClassifyRequest(BaseModel):
    title: str = ""
    abstract: str = ""
    author_keywords: str = ""
    index_keywords: str = ""
    top_n: int | None = None


class RunRequest(BaseModel):
    mapping: dict[str, str] | None = None
    top_n: int | None = None


def _check_top_n(value: int) -> int:
    if not 1 <= value <= 17:
        raise HTTPException(status_code=400, detail=f"top_n must be in [1, 17], got {value}")
    return value


def _summary_to_dict(summary: analytics.CorpusSummary) -> dict:
    return {
        "top_n": summary.top_n,
        "total": summary.total,
        "no_recognition": summary.no_recognition,
        "rank_counts": {str(s): summary.rank_counts[s] for s in SDG_IDS},
        "cumulative": {str(s): summary.cumulative[s] for s in SDG_IDS},
    }


def _parse_uploads(state: _BatchState, mapping: ingestion.ColumnMapping | None) -> None:
    records: list[ingestion.PaperRecord] = []
    diagnostics: list[ingestion.BatchDiagnostics] = []
    for upload in state.uploads:
        file_records, diag = ingestion.parse_batch_text(
            upload.text, upload.name, upload.delimiter, mapping, start_index=len(records)
        )
        records.extend(file_records)
        diagnostics.append(diag)
    state.records = records
    state.diagnostics = diagnostics


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the service; fails fast if the query library does not load."""
    lib = library.load_library(config.library_path)
    compiled = library.compile_library(lib)
    subquery_info = {
        sq.subquery_id: {"id": sq.subquery_id, "label": sq.label, "query": sq.raw}
        for sq in lib.all_subqueries()
    }
    batches: dict[str, _BatchState] = {}

    app = FastAPI(title="sdgclassify", version=__version__)

    @app.get("/api/meta")
    def meta() -> dict:
        return {
            "library": {"name": lib.name, "version": lib.version, "provenance": lib.provenance},
            "totals": {str(s): len(lib.by_sdg[s]) for s in SDG_IDS},
            "sdg_names": {str(s): SDG_NAMES[s] for s in SDG_IDS},
            "warnings": lib.warnings,
            "default_top_n": config.default_top_n,
            "max_upload_bytes": config.max_upload_bytes,
            "build": __version__,
        }

    @app.post("/api/classify")
    def classify_single(req: ClassifyRequest) -> dict:
        fields = (req.title, req.abstract, req.author_keywords, req.index_keywords)
        if not any(f.strip() for f in fields):
            raise HTTPException(status_code=400, detail="at least one metadata field must be non-empty")
        top_n = _check_top_n(req.top_n if req.top_n is not None else config.default_top_n)
        text = " ".join(f for f in fields if f)
        result = batch.classify_text(text, compiled, top_n)
        payload = batch.result_to_dict(result)
        for entry in payload["entries"]:
            entry["matched_subqueries"] = [subquery_info[i] for i in entry["matched_subqueries"]]
        return payload

    @app.post("/api/batch")
    async def upload_batch(files: list[UploadFile] = File(...)) -> dict:
        total_size = 0
        uploads: list[_Upload] = []
        for f in files:
            content = await f.read()
            total_size += len(content)
            if total_size > config.max_upload_bytes:
                raise HTTPException(
                    status_code=413,
                    detail=f"upload exceeds the {config.max_upload_bytes} byte limit",
                )
            name = f.filename or "upload.csv"
            delimiter = "\t" if name.lower().endswith((".tsv", ".tab")) else ","
            uploads.append(_Upload(name, content.decode("utf-8-sig"), delimiter))
        state = _BatchState(uploads=uploads, records=[], diagnostics=[])
        try:
            _parse_uploads(state, mapping=None)
        except ingestion.IngestError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        batch_id = uuid.uuid4().hex
        batches[batch_id] = state

        proposal = state.diagnostics[0].mapping if state.diagnostics else None
        columns = batch.output_columns(state.diagnostics)
        role_by_file = {
            diag.path: {col: role for role, col in diag.mapping.columns.items() if col}
            for diag in state.diagnostics
        }
        preview = []
        for record in state.records[:10]:
            roles = role_by_file.get(record.source_file, {})
            cells = {
                col: record.role_value(roles[col]) if col in roles else record.extra.get(col, "")
                for col in columns
            }
            preview.append({"row_index": record.row_index, "cells": cells})
        return {
            "batch_id": batch_id,
            "files": [
                {"name": diag.path, "rows": diag.row_count, "columns": diag.header}
                for diag in state.diagnostics
            ],
            "total_rows": len(state.records),
            "columns": columns,
            "mapping": {
                role: {
                    "column": proposal.columns[role] if proposal else None,
                    "provenance": proposal.provenance[role] if proposal else "none",
                }
                for role in ingestion.ROLES
            },
            "preview": preview,
            "warnings": [w for diag in state.diagnostics for w in diag.warnings],
        }

    def _get_batch(batch_id: str) -> _BatchState:
        state = batches.get(batch_id)
        if state is None:
            raise HTTPException(status_code=404, detail=f"unknown batch id {batch_id!r}")
        return state

    @app.post("/api/batch/{batch_id}/run")
    def run_batch(batch_id: str, req: RunRequest) -> dict:
        state = _get_batch(batch_id)
        top_n = _check_top_n(req.top_n if req.top_n is not None else config.default_top_n)
        try:
            mapping = ingestion.ColumnMapping.manual(req.mapping) if req.mapping else None
            _parse_uploads(state, mapping)
        except ingestion.IngestError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        state.run_mapping = req.mapping
        state.run_top_n = top_n
        state.has_run = True
        results = batch.classify_records(state.records, compiled, top_n=top_n, workers=config.workers)
        summary = analytics.summarize(results) if results else None
        rows = []
        for record, result in zip(state.records, results):
            row = batch.result_to_dict(result, row_index=record.row_index)
            row["source_file"] = record.source_file
            row["classifiable"] = record.classifiable
            rows.append(row)
        return {
            "top_n": top_n,
            "library": lib.provenance,
            "results": rows,
            "summary": _summary_to_dict(summary) if summary else None,
        }

    @app.get("/api/batch/{batch_id}/export")
    def export_batch(batch_id: str, format: str = "csv", top_n: int | None = None) -> PlainTextResponse:
        state = _get_batch(batch_id)
        if format != "csv":
            raise HTTPException(status_code=400, detail=f"unknown export format {format!r}")
        if not state.has_run:
            raise HTTPException(status_code=400, detail="batch has not been run yet")
        effective_top_n = _check_top_n(top_n if top_n is not None else state.run_top_n)
        results = batch.classify_records(
            state.records, compiled, top_n=effective_top_n, workers=config.workers
        )
        rendered = batch.render_results_csv(state.records, results, state.diagnostics, effective_top_n)
        return PlainTextResponse(
            rendered,
            media_type="text/csv; charset=utf-8",
            headers={"Content-Disposition": 'attachment; filename="sdg_results.csv"'},
        )

    if config.frontend_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.frontend_dir, html=True), name="ui")

    return app
