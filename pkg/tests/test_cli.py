import json
from pathlib import Path

import pytest

from cathedra.cli import main

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_reports_counts(capsys):
    code, out, _ = run(capsys, "check", CORPUS_DIR / "div12.cat")
    assert code == 0
    assert "ok (1 categories" in out and "8 tasks" in out


def test_missing_file_is_a_usage_error(capsys, tmp_path):
    code, _, err = run(capsys, "check", tmp_path / "absent.cat")
    assert code == 1 and "absent.cat" in err


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1 and "invalid choice" in err


def test_validation_error_is_located(capsys, tmp_path):
    bad = tmp_path / "bad.cat"
    bad.write_text("category A { objects a; arrow f: a -> b; }")
    code, _, err = run(capsys, "check", bad)
    assert code == 2
    assert err.strip() == f"{bad}:1:39: no object 'b'"


def test_failed_task_gives_exit_three(capsys):
    code, out, _ = run(capsys, "task", CORPUS_DIR / "two.cat", "--no-timing")
    assert code == 3
    assert "left-adjoint#2   not-found" in out


def test_limit_subcommand(capsys):
    code, out, _ = run(capsys, "limit", "--shape", "product", "--in", "Div12", "4", "6", "--json", "--no-timing")
    assert code == 0
    (task,) = json.loads(out)["tasks"]
    # [DERIVED] gcd(4, 6)
    assert task["witness"]["vertex"] == str(2)
    assert task["millis"] == 0


def test_colimit_subcommand(capsys):
    code, out, _ = run(capsys, "colimit", "--shape", "coproduct", "--in", "Div12", "4", "6", "--json")
    assert code == 0
    assert json.loads(out)["tasks"][0]["witness"]["vertex"] == "12"


@pytest.mark.parametrize("via", ["comma", "oaft", "gaft"])
def test_adjoint_subcommand(capsys, via):
    code, out, _ = run(capsys, "adjoint", "incl", "--via", via, "--json")
    assert code == 0
    w = json.loads(out)["tasks"][0]["witness"]
    # [DERIVED] the closure of {1} in the Sierpinski space is the whole space
    assert w["left"]["{1}"] == "{1,2}" and w["method"] == via


def test_presheaf_subcommands(capsys):
    assert run(capsys, "yoneda", "X")[0] == 0
    code, out, _ = run(capsys, "classifier", "Two", "--json")
    assert code == 0
    assert json.loads(out)["tasks"][0]["witness"]["sizes"] == {"a": 2, "b": 3}
    assert run(capsys, "density", "Five")[0] == 0


def test_report_writes_json_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "report", CORPUS_DIR / "sierpinski.cat", "--no-timing", "-o", target)
    assert code == 0 and out == ""
    report = json.loads(target.read_text())
    assert report["schema"] == "1"
    assert {t["status"] for t in report["tasks"]} == {"ok"}


def test_local_file_shadows_corpus(capsys, tmp_path):
    f = tmp_path / "mine.cat"
    f.write_text("poset Div12 { elements 1, 3; order divides; }")
    code, out, _ = run(capsys, "limit", "--shape", "terminal", "--in", "Div12", "--file", f, "--json")
    assert code == 0
    assert json.loads(out)["tasks"][0]["witness"]["vertex"] == "3"


def test_caps_flags_reach_the_report(capsys):
    code, out, _ = run(capsys, "limit", "--shape", "product", "--in", "Div12", "4", "6", "--json",
                       "--max-enum", "5000")
    assert json.loads(out)["caps"]["max_enum"] == 5000


def test_unknown_reference_is_reported_per_task(capsys):
    code, out, _ = run(capsys, "colimit", "--shape", "coproduct", "--in", "Nope", "1", "2")
    assert code == 3 and "UnresolvedReference" in out
