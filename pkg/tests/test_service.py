import pytest
from fastapi.testclient import TestClient

from sdgclassify.batch import classify_records, render_results_csv
from sdgclassify.data import MINI_CORPUS, MINI_LIBRARY
from sdgclassify.ingestion import read_many
from sdgclassify.library import compile_library, load_library
from sdgclassify.service import ServiceConfig, create_app


@pytest.fixture(scope="module")
def client():
    config = ServiceConfig(library_path=str(MINI_LIBRARY), default_top_n=3, workers=1)
    return TestClient(create_app(config))


def upload_mini(client):
    with open(MINI_CORPUS, "rb") as fh:
        return client.post("/api/batch", files=[("files", ("mini_corpus.csv", fh, "text/csv"))])


class TestMeta:
    def test_library_and_totals(self, client):
        body = client.get("/api/meta").json()
        assert body["library"]["provenance"] == "sdgclassify-mini@1.0"
        assert body["totals"]["1"] == 4
        assert body["totals"]["2"] == 2
        assert body["sdg_names"]["5"] == "Gender Equality"
        assert body["default_top_n"] == 3

    def test_repeated_calls_identical(self, client):
        assert client.get("/api/meta").json() == client.get("/api/meta").json()


class TestClassifySingle:
    def test_known_subquery_fixture(self, client):
        resp = client.post(
            "/api/classify",
            json={"abstract": "A study of extreme poverty and social protection policy."},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["no_recognition"] is False
        top = body["entries"][0]
        assert top["sdg_id"] == 1
        matched_ids = [m["id"] for m in top["matched_subqueries"]]
        assert "sdg1.poverty" in matched_ids and "sdg1.protection" in matched_ids
        assert all({"id", "label", "query"} <= set(m) for m in top["matched_subqueries"])

    def test_all_fields_empty_is_client_error(self, client):
        resp = client.post("/api/classify", json={"title": "  ", "abstract": ""})
        assert resp.status_code == 400

    def test_top_n_out_of_range_names_bounds(self, client):
        resp = client.post("/api/classify", json={"title": "poverty", "top_n": 18})
        assert resp.status_code == 400
        assert "[1, 17]" in resp.json()["detail"]

    def test_no_recognition_response(self, client):
        resp = client.post("/api/classify", json={"title": "quantum chromodynamics lattice"})
        body = resp.json()
        assert body["no_recognition"] is True
        assert body["entries"] == []

    def test_library_version_echoed(self, client):
        body = client.post("/api/classify", json={"title": "poverty"}).json()
        assert body["library"] == "sdgclassify-mini@1.0"


class TestBatchFlow:
    def test_upload_proposes_scopus_mapping(self, client):
        resp = upload_mini(client)
        assert resp.status_code == 200
        body = resp.json()
        assert body["total_rows"] == 15
        assert body["mapping"]["title"] == {"column": "Title", "provenance": "auto"}
        assert body["mapping"]["abstract"] == {"column": "Abstract", "provenance": "auto"}
        assert len(body["preview"]) == 10
        assert body["preview"][0]["cells"]["Title"].startswith("Extreme poverty")

    def test_run_returns_results_and_summary(self, client):
        batch_id = upload_mini(client).json()["batch_id"]
        resp = client.post(f"/api/batch/{batch_id}/run", json={"top_n": 3})
        assert resp.status_code == 200
        body = resp.json()
        assert len(body["results"]) == 15
        assert body["results"][0]["entries"][0]["sdg_id"] == 1
        assert body["summary"]["total"] == 15
        assert body["summary"]["no_recognition"] == 0

    def test_manual_mapping_override_used(self, client, tmp_path):
        csv_body = "Headline,Abstract\nGirls education and gender equality,empower women\n"
        resp = client.post(
            "/api/batch", files=[("files", ("x.csv", csv_body.encode(), "text/csv"))]
        )
        batch_id = resp.json()["batch_id"]
        assert resp.json()["mapping"]["title"]["column"] is None
        run = client.post(
            f"/api/batch/{batch_id}/run",
            json={"mapping": {"title": "Headline", "abstract": "Abstract"}, "top_n": 3},
        )
        top = run.json()["results"][0]["entries"][0]
        assert top["sdg_id"] == 5

    def test_export_matches_cli_bytes(self, client):
        batch_id = upload_mini(client).json()["batch_id"]
        client.post(f"/api/batch/{batch_id}/run", json={"top_n": 2})
        exported = client.get(f"/api/batch/{batch_id}/export?format=csv").text

        lib = compile_library(load_library(MINI_LIBRARY))
        records, diags = read_many([MINI_CORPUS])
        for diag in diags:
            diag.path = "mini_corpus.csv"  # uploads are keyed by filename
        for record in records:
            record.source_file = "mini_corpus.csv"
        results = classify_records(records, lib, top_n=2)
        assert exported == render_results_csv(records, results, diags, 2)

    def test_export_before_run_rejected(self, client):
        batch_id = upload_mini(client).json()["batch_id"]
        assert client.get(f"/api/batch/{batch_id}/export").status_code == 400

    def test_unknown_batch_id(self, client):
        assert client.post("/api/batch/deadbeef/run", json={}).status_code == 404
        assert client.get("/api/batch/deadbeef/export").status_code == 404

    def test_unclassifiable_rows_complete_with_no_recognition(self, client):
        csv_body = "Title,Abstract,DOI\n,,10.1/a\n,,10.1/b\n"
        resp = client.post(
            "/api/batch", files=[("files", ("empty.csv", csv_body.encode(), "text/csv"))]
        )
        batch_id = resp.json()["batch_id"]
        body = client.post(f"/api/batch/{batch_id}/run", json={}).json()
        assert all(not r["classifiable"] for r in body["results"])
        assert body["summary"]["no_recognition"] == 2

    def test_unparseable_upload_is_row_addressed(self, client):
        bad = b'Title,Abstract\n"unterminated,oops\n'
        resp = client.post("/api/batch", files=[("files", ("bad.csv", bad, "text/csv"))])
        assert resp.status_code == 400
        assert "row" in resp.json()["detail"]

    def test_oversize_upload_rejected(self):
        config = ServiceConfig(library_path=str(MINI_LIBRARY), max_upload_bytes=64)
        small_client = TestClient(create_app(config))
        big = b"Title,Abstract\n" + b"x" * 100
        resp = small_client.post("/api/batch", files=[("files", ("big.csv", big, "text/csv"))])
        assert resp.status_code == 413

    def test_multi_file_upload_concatenates(self, client):
        a = b"Title,Abstract\npoverty,extreme poverty reduction\n"
        b = b"Title,Abstract\ngirls education,gender equality women empowerment\n"
        resp = client.post(
            "/api/batch",
            files=[("files", ("a.csv", a, "text/csv")), ("files", ("b.csv", b, "text/csv"))],
        )
        body = resp.json()
        assert body["total_rows"] == 2
        assert [f["rows"] for f in body["files"]] == [1, 1]
        batch_id = body["batch_id"]
        run = client.post(f"/api/batch/{batch_id}/run", json={}).json()
        assert run["results"][0]["source_file"] == "a.csv"
        assert run["results"][1]["source_file"] == "b.csv"
        assert run["results"][1]["row_index"] == 1


class TestStartupFailure:
    def test_bad_library_fails_fast(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("nope\n", encoding="utf-8")
        from sdgclassify.library import LibraryError

        with pytest.raises(LibraryError):
            create_app(ServiceConfig(library_path=str(bad)))
