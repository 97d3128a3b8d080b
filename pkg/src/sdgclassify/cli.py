"""Command-line interface: batch classification, Elsevier import, HTTP service.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import __version__, analytics, batch, ingestion, library
from .query_lang import ParseError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_mapping(spec: str) -> ingestion.ColumnMapping:
    assignments = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ingestion.IngestError(f"bad --map entry {part!r}; expected role=column")
        role, col = part.split("=", 1)
        assignments[role.strip()] = col.strip()
    return ingestion.ColumnMapping.manual(assignments)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sdgclassify", description="Rule-based SDG classification of research papers")
    parser.add_argument("--version", action="version", version=f"sdgclassify {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify bibliographic files", parents=[], prog="sdgclassify classify")
    p.add_argument("--queries", required=True, help="query library TSV")
    p.add_argument("--input", required=True, nargs="+", help="input CSV/TSV file(s)")
    p.add_argument("--top-n", type=int, default=3, help="SDGs returned per paper (1-17, default 3)")
    p.add_argument("--output", help="augmented output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv", help="output format")
    p.add_argument("--input-format", choices=["csv", "tsv"], help="override input format (default: by extension)")
    p.add_argument("--map", dest="mapping", help="manual column mapping: title=Col,abstract=Col,...")
    p.add_argument("--eval", dest="truth", help="ground-truth CSV (row_index,sdg_id)")
    p.add_argument("--eval-output", help="write the eval table as CSV here (default: text to stdout)")
    p.add_argument("--summary", help="write the corpus summary CSV here")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="worker processes")

    p = sub.add_parser("import-elsevier", help="convert the Elsevier 2023 mapping file", prog="sdgclassify import-elsevier")
    p.add_argument("--source", required=True, help="downloaded dataset file (CSV/TSV)")
    p.add_argument("--output", required=True, help="native query TSV to write")
    p.add_argument("--report", help="write the conversion report here (default: stderr)")
    p.add_argument(
        "--rewrite-proximity-as-and",
        action="store_true",
        help="rewrite W/n and PRE/n as AND instead of rejecting the row",
    )
    p.add_argument("--name", help="library name to record (default: source file stem)")
    p.add_argument("--library-version", help="library version to record")

    # service flags fall back to SDGCLASSIFY_* environment variables
    env = os.environ.get
    p = sub.add_parser("serve", help="run the HTTP classification service", prog="sdgclassify serve")
    p.add_argument(
        "--queries", required=env("SDGCLASSIFY_QUERIES") is None,
        default=env("SDGCLASSIFY_QUERIES"), help="query library TSV",
    )
    p.add_argument("--host", default=env("SDGCLASSIFY_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(env("SDGCLASSIFY_PORT", "8000")))
    p.add_argument(
        "--top-n", type=int, default=int(env("SDGCLASSIFY_TOP_N", "3")),
        help="default top-N for requests",
    )
    p.add_argument("--max-upload-mb", type=int, default=int(env("SDGCLASSIFY_MAX_UPLOAD_MB", "50")))
    p.add_argument(
        "--workers", type=int, default=int(env("SDGCLASSIFY_WORKERS", str(os.cpu_count() or 1))),
        help="worker processes for batch runs",
    )
    p.add_argument(
        "--frontend", default=env("SDGCLASSIFY_FRONTEND"),
        help="directory with the web UI to serve at /",
    )
    return parser


def _cmd_classify(args) -> int:
    if not 1 <= args.top_n <= 17:
        print(f"sdgclassify: error: --top-n must be in [1, 17], got {args.top_n}", file=sys.stderr)
        return EXIT_USAGE
    lib = library.load_library(args.queries)
    for warning in lib.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    compiled = library.compile_library(lib)
    mapping = _parse_mapping(args.mapping) if args.mapping else None
    records, diagnostics = ingestion.read_many(args.input, mapping=mapping, fmt=args.input_format)
    for diag in diagnostics:
        for warning in diag.warnings:
            print(f"warning: {diag.path}: {warning}", file=sys.stderr)

    started = time.perf_counter()
    results = batch.classify_records(records, compiled, top_n=args.top_n, workers=args.workers)
    elapsed = time.perf_counter() - started
    rate = len(records) / elapsed if elapsed > 0 else float("inf")
    print(f"classified {len(records)} records in {elapsed:.2f}s ({rate:.0f} records/sec)", file=sys.stderr)

    if args.format == "csv":
        rendered = batch.render_results_csv(records, results, diagnostics, args.top_n)
    else:
        rendered = batch.render_results_jsonl(results)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(rendered)

    if args.summary:
        analytics.export_summary(analytics.summarize(results), args.summary, "csv")
    if args.truth:
        truth = analytics.load_truth(args.truth, records)
        table = analytics.evaluate(results, truth, k_max=min(5, args.top_n))
        if args.eval_output:
            analytics.export_summary(table, args.eval_output, "csv")
        else:
            sys.stdout.write(analytics.render_eval_text(table))
    return EXIT_OK


def _cmd_import(args) -> int:
    sink = open(args.report, "w", encoding="utf-8") if args.report else sys.stderr
    try:
        lib, report = library.import_elsevier(
            args.source, report_sink=sink, rewrite_proximity_as_and=args.rewrite_proximity_as_and
        )
    finally:
        if args.report:
            sink.close()
    if args.name:
        lib.name = args.name
    if args.library_version:
        lib.version = args.library_version
    library.save_library(lib, args.output)
    imported = sum(report.imported_per_sdg.values())
    print(f"imported {imported} sub-queries ({len(report.rejected)} rejected) -> {args.output}", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    if not 1 <= args.top_n <= 17:
        print(f"sdgclassify: error: --top-n must be in [1, 17], got {args.top_n}", file=sys.stderr)
        return EXIT_USAGE
    config = ServiceConfig(
        library_path=args.queries,
        host=args.host,
        port=args.port,
        default_top_n=args.top_n,
        max_upload_bytes=args.max_upload_mb * 1024 * 1024,
        workers=args.workers,
        frontend_dir=args.frontend,
    )
    app = create_app(config)  # loads the library; raises on failure
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "import-elsevier":
            return _cmd_import(args)
        if args.command == "serve":
            return _cmd_serve(args)
        parser.error(f"unknown command {args.command!r}")
        return EXIT_USAGE
    except (library.LibraryError, ingestion.IngestError, ParseError, ValueError) as exc:
        print(f"sdgclassify: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"sdgclassify: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - defensive
        print(f"sdgclassify: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
