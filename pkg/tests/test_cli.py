import json

from tutorforum.cli import main

from .conftest import COURSE_CORPUS, EVAL_RECORDS


def test_ingest_writes_passage_bank(tmp_path, capsys):
    out = tmp_path / "bank"
    assert main(["ingest", "--corpus", str(COURSE_CORPUS), "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["documents"] == 8
    assert summary["passages"] == 54
    assert (out / "passages.jsonl").exists()
    assert (out / "docs.jsonl").exists()


def test_detect_prints_single_json_verdict(capsys):
    assert main(["detect", "--text", "How do I declare a variable?"]) == 0
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["language"] == "en"
    assert 0.0 <= verdict["confidence"] <= 1.0

    assert main(["detect", "--text", "Comment déclarer une variable ?"]) == 0
    assert json.loads(capsys.readouterr().out)["language"] == "fr"


def test_index_build_and_query(tmp_path, capsys):
    out = tmp_path / "index"
    assert main(["index", "build", "--corpus", str(COURSE_CORPUS), "--out", str(out)]) == 0
    capsys.readouterr()
    assert (
        main(["index", "query", "--index", str(out), "--text", "how do loops work", "--k", "3"]) == 0
    )
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    hits = [json.loads(line) for line in lines]
    assert [h["rank"] for h in hits] == [1, 2, 3]
    assert all(set(h) == {"passage_id", "score", "rank"} for h in hits)


def test_index_query_with_tags(tmp_path, capsys):
    out = tmp_path / "index"
    main(["index", "build", "--corpus", str(COURSE_CORPUS), "--out", str(out)])
    capsys.readouterr()
    main(["index", "query", "--index", str(out), "--text", "functions", "--tags", "section-3", "--k", "5"])
    hits = [json.loads(line) for line in capsys.readouterr().out.strip().splitlines()]
    assert len(hits) == 4
    assert all(h["passage_id"].startswith("en-lesson-3") for h in hits)


def test_ask_prints_cited_answer(tmp_path, capsys):
    out = tmp_path / "index"
    main(["index", "build", "--corpus", str(COURSE_CORPUS), "--out", str(out)])
    capsys.readouterr()
    assert main(["ask", "--index", str(out), "--text", "How do I declare a variable?"]) == 0
    body = capsys.readouterr().out
    assert body.startswith("Hint: ")
    assert "Sources:" in body


def test_eval_prints_report(capsys):
    assert main(["eval", "--records", str(EVAL_RECORDS)]) == 0
    out = capsys.readouterr().out
    assert "490 valid" in out
    assert "76.7%" in out


def test_eval_json_mode(capsys):
    assert main(["eval", "--records", str(EVAL_RECORDS), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["n_valid"] == 490
    assert abs(report["ai_accuracy_overall"] - 376 / 490) < 1e-12


def test_errors_exit_with_code_two(tmp_path, capsys):
    assert main(["eval", "--records", str(tmp_path / "missing.csv")]) == 2
    assert "error:" in capsys.readouterr().err
