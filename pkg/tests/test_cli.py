import json
import os
import subprocess
import sys

import pytest

from liemean import mean
from liemean.cli import main
from liemean.liealg import LieSeries


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bch_text(capsys):
    code, out, _ = run(capsys, "bch", "--degree", "3", "--arity", "2")
    assert code == 0 and "1/2·[12]" in out


def test_bch_arity_three_degree_one(capsys):
    _, out, _ = run(capsys, "bch", "--degree", "1", "--arity", "3")
    assert out.strip() == "1·[1] + 1·[2] + 1·[3]"


def test_bch_arity_one(capsys):
    _, out, _ = run(capsys, "bch", "--degree", "2", "--arity", "1")
    assert out.strip() == "1·[1]"


def test_bch_json_round_trips(capsys):
    _, out, _ = run(capsys, "bch", "--degree", "5", "--arity", "2", "--format", "json")
    s = LieSeries.from_json(out)
    assert s.to_json() == out.strip()
    assert s.coefficient((1, 1, 2)) * 12 == 1


@pytest.mark.parametrize("argv", [
    ["bch", "--degree", "11"],
    ["bch", "--degree", "3", "--arity", "5"],
    ["bch", "--degree", "x"],
    ["mu", "-n", "1", "--degree", "3"],
    ["nosuch"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_resource_guard(capsys):
    code, _, err = run(capsys, "bch", "--degree", "10", "--arity", "4")
    assert code == 2 and "cap" in err
    code, _, err = run(capsys, "mu", "-n", "5", "--degree", "6", "--basis-cap", "100")
    assert code == 2 and "basis-cap" in err


def test_mu_outputs(capsys):
    _, out, _ = run(capsys, "mu", "-n", "2", "--degree", "3")
    assert out.strip() == "1/2·[1] + 1/2·[2] − 1/48·[112] − 1/48·[122]"
    _, out, _ = run(capsys, "mu", "-n", "2", "--degree", "1")
    assert out.strip() == "1/2·[1] + 1/2·[2]"
    _, out, _ = run(capsys, "mu", "-n", "3", "--degree", "3", "--format", "json")
    s = LieSeries.from_json(out)
    assert s.coefficient((1, 1, 2)) == s.coefficient((2, 3, 3)) == -s.coefficient((1,)) / 36


def test_mu_iterate(capsys):
    code, out, _ = run(capsys, "mu", "-n", "3", "--degree", "3", "--method", "iterate", "--steps", "8", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["iterates"]) == 3 and len(data["errors"]) == 9
    assert all(abs(r - 0.5) < 0.05 for r in data["ratios"][3:])
    code, out, _ = run(capsys, "mu", "-n", "3", "--degree", "3", "--method", "iterate", "--steps", "3")
    assert code == 0 and "ratio" in out


def test_verify_pass_and_json(capsys):
    code, out, err = run(capsys, "verify", "--suite", "fixed-point", "-n", "3", "--degree", "5")
    assert code == 0 and json.loads(out)["passed"] is True and "PASS" in err
    code, out, _ = run(capsys, "verify", "--suite", "conjecture", "-n", "4", "-m", "2", "--degree", "3")
    assert code == 0
    code, out, _ = run(capsys, "verify", "--suite", "witt", "--quiet")
    assert code == 0


def test_verify_failure_exits_one(capsys, monkeypatch):
    from liemean import verify

    def broken(**_):
        return verify.SuiteResult("witt", "fail", {})

    monkeypatch.setitem(verify.SUITES, "witt", broken)
    code, out, _ = run(capsys, "verify", "--suite", "witt")
    assert code == 1 and json.loads(out)["passed"] is False


def test_verify_unknown_suite(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "bogus")
    assert code == 2


def test_sl2_demo(capsys):
    code, out, _ = run(capsys, "sl2-demo", "--t1", "0.2", "--t2", "0.3", "--max-degree", "8", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["checks"]["passed"] is True
    assert data["rows"][-1]["flow_defect"] < 1e-3
    code, out, _ = run(capsys, "sl2-demo", "--t1", "0.2", "--t2", "0.2")
    assert code == 0 and "PASS" in out


def test_sl2_demo_endpoints_and_curve(capsys, tmp_path):
    path = tmp_path / "w.csv"
    code, out, _ = run(capsys, "sl2-demo", "--endpoints", "--dump-curve", str(path), "--samples", "30")
    assert code == 0 and "TREND ONLY" in out
    assert path.read_text().startswith("branch,t,b,c,two_c,residual")


def test_dims(capsys):
    code, out, _ = run(capsys, "dims", "-n", "2", "--degree", "4", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["dimension"] for r in rows] == [2, 1, 2, 3]


def test_cache_dir_flag_and_env(capsys, tmp_path, monkeypatch):
    mean.clear_caches()
    code, _, _ = run(capsys, "--cache-dir", str(tmp_path / "a"), "mu", "-n", "3", "--degree", "3")
    assert code == 0 and list((tmp_path / "a").glob("mu-*.json"))
    env = dict(os.environ, LIEMEAN_CACHE_DIR=str(tmp_path / "b"))
    proc = subprocess.run([sys.executable, "-m", "liemean", "mu", "-n", "3", "--degree", "2"],
                          capture_output=True, text=True, env=env, encoding="utf-8")
    assert proc.returncode == 0
    assert list((tmp_path / "b").glob("mu-*.json"))


def test_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "mu", "-n", "3", "--degree", "5", "--format", "json")
    _, second, _ = run(capsys, "mu", "-n", "3", "--degree", "5", "--format", "json")
    assert first == second
