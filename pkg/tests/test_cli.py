import csv
import io
import json
import subprocess
import sys

import pytest

from hardy_contextuality.cli import main
from hardy_contextuality.scenario import pentagon, save_scenario


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_demo(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0
    assert "1/9" in out and "0.111111" in out
    assert "P(0,1|1,2) + P(0,1|2,3)  1.000000" in out
    assert "P(0,1|3,4) + P(0,1|4,5)  1.000000" in out


def test_demo_json_matches_text(capsys):
    _, text, _ = run(capsys, "demo")
    _, raw, _ = run(capsys, "demo", "--format", "json")
    doc = json.loads(raw)
    assert doc["hardy_prob"] == pytest.approx(1 / 9, rel=1e-12)
    assert f"{doc['hardy_prob']:.6f}" in text
    assert f"{doc['cycle_sum']:.6f}" in text
    assert doc["nchv_implication_holds"] is True
    assert doc["nchv_cycle_bound"] == 2


def test_bounds_text_and_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "5")
    assert code == 0
    assert "2.236068" in out
    code, out, _ = run(capsys, "bounds", "--n", "5", "7", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "nchv_bound", "quantum_bound", "hardy_max_bound"]
    assert rows[0]["nchv_bound"] == "2"
    assert float(rows[0]["quantum_bound"]) == pytest.approx(5**0.5, abs=1e-11)
    assert rows[1]["n"] == "7" and rows[1]["nchv_bound"] == "3"


def test_bounds_json_uses_closed_form_beyond_limit(capsys):
    _, out, _ = run(capsys, "bounds", "--n", "27", "--format", "json")
    (row,) = json.loads(out)["rows"]
    assert row["nchv_bound"] == 13 and row["nchv_method"] == "closed-form"


def test_family_roundtrip(capsys, tmp_path):
    path = tmp_path / "f.json"
    code, _, _ = run(capsys, "family", "--k", "2", "--out", str(path))
    assert code == 0
    assert json.loads(path.read_text())["report"]["hardy_prob"] == pytest.approx(9 / 41, rel=1e-11)
    code, out, _ = run(capsys, "check", "--scenario", str(path))
    assert code == 0
    assert "0.219512" in out and "yes" in out
    _, raw, _ = run(capsys, "check", "--scenario", str(path), "--format", "json")
    assert json.loads(raw)["all_satisfied"] is True


def test_check_invalid_scenario_exit_1(capsys, tmp_path):
    path = tmp_path / "bad.json"
    save_scenario(pentagon().with_vector(2, [1, 0, 0]), path)
    code, _, err = run(capsys, "check", "--scenario", str(path))
    assert code == 1
    assert "orthogonality" in err and "(1,2)" in err


def test_check_unreadable_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "check", "--scenario", str(tmp_path / "missing.json"))
    assert code == 2
    (tmp_path / "junk.json").write_text("{not json")
    code, _, _ = run(capsys, "check", "--scenario", str(tmp_path / "junk.json"))
    assert code == 2


def test_check_warns_on_normalization(capsys, tmp_path):
    doc = {"n": 5, "state": [1, 1, 1], "vectors": [[1, -1, 1], [1, 1, 0], [0, 0, 1], [1, 0, 0], [0, 1, 1]]}
    path = tmp_path / "raw.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "check", "--scenario", str(path))
    assert code == 0
    assert "normalized" in err
    assert "0.111111" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--n", "6"],
        ["optimize", "--n", "4"],
        ["family", "--k", "1"],
        ["demo", "--format", "csv"],
        ["graph", "--builtin", "pentagon", "--k", "2"],
        ["simulate", "--shots", "0"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_graph_commands(capsys):
    code, out, _ = run(capsys, "ks-block", "--format", "dot")
    assert code == 0 and out.count("--") == 11
    code, out, _ = run(capsys, "graph", "--builtin", "pentagon")
    assert out.count("--") == 5 and out.startswith("graph orthogonality {")
    _, out, _ = run(capsys, "graph", "--k", "2", "--format", "json")
    assert len(json.loads(out)["edges"]) >= 9
    _, out, _ = run(capsys, "graph", "--builtin", "ks-block", "--format", "text")
    assert "11 orthogonal pairs" in out
    _, out, _ = run(capsys, "graph", "--builtin", "pentagon", "--include-state")
    assert '"eta";' in out


def test_simulate_formats(capsys):
    code, out, _ = run(capsys, "simulate", "--shots", "1000", "--seed", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 20
    assert all(r["count"] == "0" for r in rows if (r["a"], r["b"]) == ("1", "1"))
    _, out, _ = run(capsys, "simulate", "--shots", "1000", "--seed", "3")
    assert "P(0,1|5,1)" in out


def test_optimize_writes_scenario(capsys, tmp_path):
    path = tmp_path / "opt.json"
    code, _, _ = run(capsys, "optimize", "--n", "7", "--starts", "4", "--seed", "1", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["report"]["objective"] == pytest.approx(0.2, abs=1e-6)
    code, out, _ = run(capsys, "check", "--scenario", str(path), "--format", "json")
    assert json.loads(out)["hardy_prob"] == pytest.approx(0.2, abs=1e-6)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hardy_contextuality", "bounds", "--n", "5", "--format", "json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["rows"][0]["nchv_bound"] == 2
