import json
import subprocess
import sys

import pytest

from bijective.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_profile_kcenter_path(capsys):
    code, out = run(capsys, "profile", "--alg", "kcenter", "--metric", "path:5", "--k", "2", "--n", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "rank,cost_num,cost_den"
    assert [ln.split(",")[1] for ln in lines[1:]] == ["0", "0", "2", "2", "2"]


def test_compare_cycle(capsys, tmp_path):
    code, out = run(capsys, "compare", "--metric", "cycle:6", "--k", "2", "--n", "4", "--a", "greedy",
                    "--b", "opt", "--max-rho", "2", "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0
    assert rep["check"]["passed"]
    assert rep["strict_rho"] == "3/2"
    assert (tmp_path / "profile_a.csv").exists() and (tmp_path / "report.json").read_text() == out


def test_compare_check_failure_exit_code(capsys):
    code, out = run(capsys, "compare", "--metric", "cycle:6", "--k", "2", "--n", "3", "--a", "greedy",
                    "--b", "opt", "--max-rho", "1")
    assert code == 1 and not json.loads(out)["check"]["passed"]


def test_reruns_are_byte_identical(capsys, tmp_path):
    outs = []
    for sub in ("a", "b"):
        run(capsys, "compare", "--metric", "path:4", "--k", "2", "--n", "3", "--a", "wfa", "--b", "kcenter",
            "--rho", "2", "--out", str(tmp_path / sub))
        outs.append({f.name: f.read_bytes() for f in (tmp_path / sub).iterdir()})
    assert outs[0] == outs[1]


def test_budget_refusal(capsys):
    code, out = run(capsys, "profile", "--alg", "greedy", "--metric", "path:50", "--k", "2", "--n", "6")
    assert code == 3 and json.loads(out)["error"] == "budget_exceeded"


def test_invalid_metric(capsys):
    code, out = run(capsys, "profile", "--alg", "greedy", "--metric", "blob:3", "--k", "2", "--n", "1")
    assert code == 2 and json.loads(out)["error"] == "invalid_input"


def test_invalid_configuration(capsys):
    code, out = run(capsys, "profile", "--alg", "greedy", "--metric", "path:4", "--k", "2", "--n", "1",
                    "--c0", "0,9")
    assert code == 2


def test_metric_from_json_file(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text('{"kind": "spider", "rays": [[2, "1"], [2, "1"]]}')
    code, out = run(capsys, "profile", "--alg", "greedy", "--metric", str(f), "--k", "1", "--n", "1",
                    "--c0", "0")
    assert code == 0 and len(out.splitlines()) == 6


def test_sampling_mode(capsys, tmp_path):
    code, _ = run(capsys, "profile", "--alg", "greedy", "--metric", "cycle:12", "--k", "3", "--n", "6",
                  "--samples", "50", "--seed", "4", "--out", str(tmp_path))
    assert code == 0
    assert json.loads((tmp_path / "run.json").read_text())["approximate"] is True


def test_verify_suite(capsys, tmp_path):
    code, out = run(capsys, "verify", "--suite", "circle-optimality", "--out", str(tmp_path))
    assert code == 0
    assert out.splitlines()[-1].startswith("PASS")
    assert json.loads((tmp_path / "verify.json").read_text())["passed"] is True


def test_verify_failing_suite_exit_code(capsys):
    code, out = run(capsys, "verify", "--suite", "kcenter-bound")
    assert code == 1 and "FAIL" in out


def test_oracles(capsys):
    code, out = run(capsys, "oracle", "--metric", "cycle:4", "--k", "2", "--n", "3", "--c0", "0,2")
    v = json.loads(out)
    assert code == 0 and v["dominates"] and v["tree_count"] >= 8192
    code, out = run(capsys, "oracle", "--problem", "paging", "--costs", "1,1,4", "--n", "3")
    assert code == 0 and json.loads(out)["tree_count"] == 8192
    code, out = run(capsys, "oracle", "--problem", "buffer", "--k", "2", "--colours", "2", "--n", "4")
    assert code == 0 and json.loads(out)["dominates"]
    code, out = run(capsys, "oracle", "--problem", "paging", "--n", "3")
    assert code == 2


def test_adversaries(capsys):
    code, out = run(capsys, "adversary", "--kind", "three-point", "--n", "4")
    rep = json.loads(out)
    assert code == 0 and rep["sequence"] == [0, 0, 1, 0] and rep["ratio_at_least_2"]
    code, out = run(capsys, "adversary", "--kind", "line", "--n", "60")
    rep = json.loads(out)
    assert code == 0 and rep["min_suffix_step"] == "9/20" and rep["kcenter_cost"] == "27"
    code, out = run(capsys, "adversary", "--kind", "star", "--k", "2", "--d", "3", "--n", "2")
    assert code == 0 and json.loads(out)["certified_rho"] is not None


def test_usage_error_exit():
    with pytest.raises(SystemExit) as exc:
        main(["profile", "--alg", "nope", "--metric", "path:3", "--k", "1", "--n", "1"])
    assert exc.value.code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "bijective", "profile", "--alg", "greedy", "--metric",
                          "cycle:4", "--k", "2", "--n", "2"], capture_output=True, text=True, check=True)
    assert out.stdout.splitlines()[0] == "rank,cost_num,cost_den"
