import json

import pytest
from typer.testing import CliRunner

from ndcomm import results_db
from ndcomm.cli import app, parse_range
from ndcomm.errors import ParameterError

runner = CliRunner()


def run(tmp_path, *args: str, name: str = "report.json"):
    out = tmp_path / name
    result = runner.invoke(app, ["--threads", "1", "--output", str(out), *args])
    return result, out


def load(path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def test_parse_range():
    assert parse_range("3..8") == range(3, 9)
    assert parse_range("5") == range(5, 6)
    assert parse_range("k..2k", 4) == range(4, 9)
    assert parse_range("k..12", 13) == range(13, 13)
    with pytest.raises(ParameterError):
        parse_range("8..3")
    with pytest.raises(ParameterError):
        parse_range("k..5")


def test_verify_quantum(tmp_path):
    result, out = run(tmp_path, "verify", "--k", "2", "--kprime", "1")
    assert result.exit_code == 0
    report = load(out)
    assert report["tool"] == "ndcomm"
    assert report["passed"]
    assert report["failures"] == []
    assert report["config"]["mode"] == "exhaustive"
    assert report["result"]["instances_checked"] == 64
    assert "duration_s" not in report


def test_verify_neq(tmp_path):
    result, out = run(tmp_path, "verify", "--protocol", "neq", "--n", "4")
    assert result.exit_code == 0
    assert load(out)["result"]["max_cost"] == 1


def test_sampled_reports_are_identical(tmp_path):
    args = ["verify", "--k", "3", "--kprime", "3", "--mode", "sample"]
    args += ["--count", "90", "--seed", "1"]
    first, out1 = run(tmp_path, *args, name="first.json")
    second, out2 = run(tmp_path, *args, name="second.json")
    assert first.exit_code == second.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_sampling_needs_seed(tmp_path):
    args = ["verify", "--k", "2", "--kprime", "1", "--mode", "sample"]
    result, out = run(tmp_path, *args)
    assert result.exit_code == 2
    assert not out.exists()


def test_budget_exit_status(tmp_path):
    result, _ = run(tmp_path, "cover", "--k", "2", "--kprime", "3")
    assert result.exit_code == 2


def test_unknown_protocol(tmp_path):
    result, _ = run(tmp_path, "verify", "--protocol", "nope")
    assert result.exit_code == 2


def test_timing(tmp_path):
    out = tmp_path / "timed.json"
    args = ["--threads", "1", "--timing", "-o", str(out)]
    result = runner.invoke(app, [*args, "verify", "--protocol", "neq", "--n", "2"])
    assert result.exit_code == 0
    assert load(out)["duration_s"] >= 0


def test_cover(tmp_path):
    result, out = run(
        tmp_path, "cover", "--k", "2", "--kprime", "1", "--clique-bound"
    )
    assert result.exit_code == 0
    report = load(out)["result"]
    assert report["size"] >= 4
    assert report["diagonal_cover_lower_bound"] == 4
    assert report["communication_lower_bound"] >= 2


def test_cover_csv(tmp_path):
    out = tmp_path / "cover.csv"
    args = ["--threads", "1", "--format", "csv", "-o", str(out)]
    result = runner.invoke(app, [*args, "cover", "--function", "neq", "--n", "1"])
    assert result.exit_code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "rectangle_id,a_members,b_members"
    assert len(lines) == 3


def test_csv_not_available(tmp_path):
    args = ["--threads", "1", "--format", "csv", "-o", str(tmp_path / "x.csv")]
    result = runner.invoke(app, [*args, "clique", "--k", "2", "--kprime", "1"])
    assert result.exit_code == 2


def test_clique(tmp_path):
    result, out = run(
        tmp_path, "clique", "--k", "2", "--kprime", "1", "--cross-check"
    )
    assert result.exit_code == 0
    report = load(out)["result"]
    assert report["size"] == 2
    assert report["reference_size"] == 2
    assert len(report["witness"]) == 2


def test_clique_heuristic(tmp_path):
    args = ["clique", "--k", "3", "--kprime", "3", "--mode", "heuristic"]
    result, out = run(tmp_path, *args, "--seed", "5", "--iterations", "200")
    assert result.exit_code == 0
    report = load(out)["result"]
    assert report["cover_exponent"] == -6
    assert report["theorem_bound_exponent"] == 27


def test_polycheck_all_sets(tmp_path):
    args = ["polycheck", "--k", "2", "--kprime", "1", "--all-valid-sets"]
    result, out = run(tmp_path, *args)
    assert result.exit_code == 0
    report = load(out)["result"]
    assert report["sets_checked"] == 24
    assert report["largest_set"] == 2
    assert all(c["passed"] for c in report["certificates"])


def test_polycheck_default_witness(tmp_path):
    result, out = run(tmp_path, "polycheck", "--k", "2", "--kprime", "1")
    assert result.exit_code == 0
    assert load(out)["result"]["sets_checked"] == 1


def test_bounds(tmp_path):
    args = ["bounds", "--k", "3..4", "--kprime-rel", "k..6", "--separation", "3..6"]
    result, out = run(tmp_path, *args)
    assert result.exit_code == 0
    report = load(out)
    assert report["passed"]
    assert len(report["result"]["bounds"]) == 4 + 3
    last = report["result"]["separation"][-1]
    assert last["k"] == 6
    assert last["classical_lower_bound"] == 18
    assert last["quantum_upper_bound"] == 54


def test_record(tmp_path, monkeypatch):
    monkeypatch.setattr(results_db, "RESULTS_DB_DIR", tmp_path)
    out = tmp_path / "neq.json"
    args = ["--threads", "1", "--record", "-o", str(out)]
    result = runner.invoke(app, [*args, "verify", "--protocol", "neq", "--n", "2"])
    assert result.exit_code == 0
    runs = results_db.get_runs("verify")
    assert len(runs) == 1
    assert runs[0]["report"] == out.read_text(encoding="utf-8")


def test_cover_rectangle_budget(tmp_path):
    args = ["cover", "--function", "neq", "--n", "2", "--rectangle-budget", "10"]
    result, out = run(tmp_path, *args)
    assert result.exit_code == 2
    assert not out.exists()


def test_polycheck_set_budget(tmp_path):
    args = ["polycheck", "--k", "2", "--kprime", "1", "--all-valid-sets"]
    result, out = run(tmp_path, *args, "--set-budget", "5")
    assert result.exit_code == 2
    assert not out.exists()
