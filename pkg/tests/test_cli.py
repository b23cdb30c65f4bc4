"""Command line: argument wiring, output formats, exit codes."""

from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest
from conftest import FIXTURES

from ontosearch.cli import run


def run_cli(capsys, config, *argv, as_json=False):
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    args = ["--config", str(config)]
    if as_json:
        args.append("--json")
    code = run(args + list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def indexed_config(config_file, capsys):
    code, _, err = run_cli(capsys, config_file, "index")
    assert code == 0, err
    return config_file


@pytest.fixture
def mutable_config(tmp_path, config_file):
    corpus = tmp_path / "corpus-rw"
    shutil.copytree(FIXTURES / "corpus-mini", corpus)
    config = json.loads(config_file.read_text(encoding="utf-8"))
    config["corpus_dir"] = str(corpus)
    path = tmp_path / "config-rw.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


# -- indexing and stats ---------------------------------------------------


def test_index_human_summary(config_file, capsys):
    code, out, err = run_cli(capsys, config_file, "index")
    assert code == 0 and err == ""
    assert "indexed 14 document(s), 178 term(s), 11 entit(ies)" in out
    assert "+14 -0 ~0" in out

    code, out, _ = run_cli(capsys, config_file, "index", "--rebuild")
    assert code == 0
    assert "(full rebuild)" in out


def test_index_json_payload(config_file, capsys):
    code, out, _ = run_cli(capsys, config_file, "index", as_json=True)
    assert code == 0
    stats = json.loads(out)
    assert stats["documents"] == 14
    assert stats["added"] == 14
    assert stats["rebuilt"] is False
    assert stats["warnings"] == []


def test_stats_outputs(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "stats")
    assert code == 0
    assert "documents: 14" in out
    assert "classes: 7" in out

    code, out, _ = run_cli(capsys, indexed_config, "stats", as_json=True)
    assert json.loads(out)["postings"] == 241


# -- search ---------------------------------------------------------------


def test_search_human_output(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "search", "concept:COPD")
    assert code == 0
    assert out.startswith("query: concept:COPD\n")
    assert "expanded COPD: COPD, ChronicBronchitis, Emphysema, M1, M3, M4" in out
    assert "6 result(s)" in out
    assert "e06" in out and "Alveolar damage and hyperinflation" in out


def test_search_json_output(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "search",
                           "concept:COPD AND NOT emphysema", as_json=True)
    assert code == 0
    payload = json.loads(out)
    ids = [r["doc_id"] for r in payload["results"]]
    assert "e06" not in ids  # the emphysema document is excluded
    assert payload["total"] == len(ids)
    assert "COPD" in payload["expansion"]


def test_search_text_mode(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "search", "--text",
                           "--language", "it", "bronchite cronica", as_json=True)
    assert code == 0
    payload = json.loads(out)
    assert payload["concepts"] == [{"entity_id": "M3", "span": [0, 17]}]
    assert payload["or_fallback"] is False


def test_search_text_or_fallback_note(mini_config_file, capsys):
    assert run_cli(capsys, mini_config_file, "index")[0] == 0
    code, out, _ = run_cli(capsys, mini_config_file, "search", "--text",
                           "emphysema dialysis")
    assert code == 0
    assert "note: no document matched every part" in out


def test_metadata_command(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "metadata",
                           "--date-from", "2021-01-01", as_json=True)
    assert code == 0
    payload = json.loads(out)
    assert [r["doc_id"] for r in payload["results"]] == \
        ["e08", "e12", "e13", "e14"]

    code, out, _ = run_cli(capsys, indexed_config, "metadata", "--title", "copd")
    assert code == 0
    assert "2 result(s)" in out


# -- knowledge views ------------------------------------------------------


def test_suggest_command(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "suggest", "chron",
                           "--limit", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("M5  [concept]  chronic kidney failure")

    code, out, _ = run_cli(capsys, indexed_config, "suggest", "zzz")
    assert code == 0
    assert out.strip() == "no matches"


def test_tree_command(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "tree")
    assert code == 0
    assert "device [Device]" in out
    assert "disease [Disease]" in out
    assert "= chronic obstructive pulmonary disease [M1, exactMatch]" in out
    # children render indented under their parent
    assert "\n  COPD [COPD]" in out


def test_entity_and_document_commands(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "entity", "COPD")
    assert code == 0
    card = json.loads(out)
    assert card["kind"] == "class" and card["children"] == \
        ["ChronicBronchitis", "Emphysema"]

    code, out, _ = run_cli(capsys, indexed_config, "document", "e01")
    assert code == 0
    assert json.loads(out)["title"] == "The global burden of COPD"


# -- ingest ---------------------------------------------------------------


def test_ingest_plain_and_html(mutable_config, tmp_path, capsys):
    plain = tmp_path / "note.txt"
    plain.write_text("Spirometry can measure the breath.", encoding="utf-8")
    page = tmp_path / "page.html"
    page.write_text("<html><body><p>Emphysema can damage the lung.</p></body></html>",
                    encoding="utf-8")

    code, out, _ = run_cli(capsys, mutable_config, "ingest", str(plain),
                           str(page), as_json=True)
    assert code == 0
    written = json.loads(out)["ingested"]
    assert len(written) == 2
    for row in written:
        assert len(row["doc_id"]) == 16  # content-hash id
        assert Path(row["file"]).exists()

    code, out, _ = run_cli(capsys, mutable_config, "index", as_json=True)
    assert code == 0
    stats = json.loads(out)
    assert stats["documents"] == 6  # four bundled plus the two ingested

    code, out, _ = run_cli(capsys, mutable_config, "document",
                           written[1]["doc_id"])
    card = json.loads(out)
    assert card["title"] == "page"
    assert "Emphysema can damage the lung." in card["text"]
    assert "<p>" not in card["text"]


# -- enrichment workflow --------------------------------------------------


def test_enrich_and_candidate_workflow(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "enrich")
    assert code == 0
    assert "15 candidate(s), 15 new" in out

    code, out, _ = run_cli(capsys, indexed_config, "candidates", as_json=True)
    rows = json.loads(out)
    assert len(rows) == 15
    assert rows[0]["id"] == "cand-inhaler-device"

    code, out, _ = run_cli(capsys, indexed_config, "candidate", "set-state",
                           "cand-illness", "to_validate")
    assert code == 0
    assert "cand-illness -> to_validate" in out

    code, out, _ = run_cli(capsys, indexed_config, "candidates",
                           "--state", "to_validate")
    assert code == 0
    assert "cand-illness" in out and "cand-airflow" not in out

    code, out, _ = run_cli(capsys, indexed_config, "candidate", "show",
                           "cand-illness")
    assert code == 0
    assert json.loads(out)["state"] == "to_validate"


def test_export_suggestions(indexed_config, tmp_path, capsys):
    run_cli(capsys, indexed_config, "enrich")
    run_cli(capsys, indexed_config, "candidate", "set-state",
            "cand-inhaler-device", "to_validate")
    run_cli(capsys, indexed_config, "candidate", "set-state",
            "cand-inhaler-device", "accepted")

    out_file = tmp_path / "suggestions.json"
    code, out, _ = run_cli(capsys, indexed_config, "export-suggestions",
                           "--out", str(out_file))
    assert code == 0
    assert f"wrote 1 suggestion(s) to {out_file}" in out
    payload = json.loads(out_file.read_text(encoding="utf-8"))
    assert payload["suggestions"][0]["candidate_id"] == "cand-inhaler-device"

    code, out, _ = run_cli(capsys, indexed_config, "export-suggestions")
    assert json.loads(out)["suggestions"][0]["pref_label"] == \
        {"en": "inhaler device"}


# -- evaluation -----------------------------------------------------------


def test_eval_command_with_compare_and_curve(indexed_config, tmp_path, capsys):
    curve = tmp_path / "curve.csv"
    code, out, _ = run_cli(
        capsys, indexed_config, "eval",
        str(FIXTURES / "judgments/conceptual.tsv"),
        "--compare", str(FIXTURES / "judgments/baseline.tsv"),
        "--curve", str(curve), as_json=True)
    assert code == 0
    payload = json.loads(out)
    assert payload["macro_f"] == pytest.approx(1.0)
    assert {c["query_id"] for c in payload["comparison"]} == {"q1", "q2", "q3"}
    assert all(c["delta"] >= 0 for c in payload["comparison"])
    assert payload["curve_file"] == str(curve)
    assert curve.read_text(encoding="utf-8").startswith(
        "query_id,depth,precision,recall,f")


def test_eval_human_output(indexed_config, capsys):
    code, out, _ = run_cli(capsys, indexed_config, "eval",
                           str(FIXTURES / "judgments/conceptual.tsv"))
    assert code == 0
    assert "macro precision 1.0000  recall 1.0000  F 1.0000" in out
    assert "q1: P 1.0000 R 1.0000 F 1.0000" in out


# -- error handling -------------------------------------------------------


def test_domain_errors_exit_one(indexed_config, capsys):
    code, out, err = run_cli(capsys, indexed_config, "search", "AND copd")
    assert code == 1 and out == ""
    assert err.startswith("error: SyntaxError: ")

    code, _, err = run_cli(capsys, indexed_config, "entity", "Nope")
    assert code == 1
    assert err.startswith("error: UnknownEntity: ")

    code, _, err = run_cli(capsys, indexed_config, "candidate", "set-state",
                           "cand-ghost", "accepted")
    assert code == 1
    assert err.startswith("error: UnknownCandidate: ")

    code, _, err = run_cli(capsys, indexed_config, "eval",
                           str(FIXTURES / "judgments/absent.tsv"))
    assert code == 1
    assert err.startswith("error: JudgmentsNotFound: ")


def test_missing_config_exits_one(tmp_path, capsys):
    code, _, err = run_cli(capsys, tmp_path / "absent.json", "stats")
    assert code == 1
    assert err.startswith("error: IoFailure: ")


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exit_info:
        run(["--config", "x.json"])  # no subcommand
    assert exit_info.value.code == 2

    with pytest.raises(SystemExit) as exit_info:
        run(["--config", "x.json", "frobnicate"])
    assert exit_info.value.code == 2
    assert "invalid choice" in capsys.readouterr().err
