import json
import subprocess
import sys

import pytest

from scalefree.cli import run
from scalefree.dynamics import NU


def test_sieve_prints(capsys):
    assert run(["sieve", "--limit", "100"]) == 0
    assert capsys.readouterr().out == "pi(100) = 25\n"


def test_unknown_subcommand_is_usage_error(capsys):
    assert run(["frobnicate"]) == 2
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    [],
    ["sieve"],
    ["sieve", "--limit", "abc"],
    ["sieve", "--limit", "100", "--bogus"],
    ["tree", "--prime", "2", "--format", "svg", "1"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


@pytest.mark.parametrize("argv,needle", [
    (["sieve", "--limit", "1"], "--limit"),
    (["sieve", "--limit", "2e9"], "--limit"),
    (["pnt-scan", "--x-min", "1e6", "--x-max", "1e3"], "--x-min"),
    (["ode", "--eta", "1.5"], "--eta"),
    (["ode", "--alpha", "0.5"], "--alpha"),
    (["ode", "--alpha", "1", "--eps", "1.5"], "infeasible"),
    (["golden", "--iters", "0"], "--iters"),
    (["padic", "--prime", "4", "7"], "--prime"),
    (["padic", "--prime", "3", "x/y"], "rational"),
    (["norm", "0.5", "--delta", "2"], "--delta"),
    (["norm", "0.5", "--delta", "0.1", "--bound", "3"], "--bound"),
])
def test_domain_errors(argv, needle, capsys):
    assert run(argv) == 1
    err = capsys.readouterr().err
    assert "error" in err and needle in err


def test_padic_zero_has_no_monna_image(capsys):
    assert run(["padic", "--prime", "3", "0"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["r"] is None and d["abs"] == "0" and "monna" not in d


def test_pnt_scan_file(tmp_path):
    out = tmp_path / "scan.csv"
    assert run(["pnt-scan", "--x-min", "1e3", "--x-max", "1e6", "--points", "30",
                "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,pi,eps,relerr,li,li_err"
    assert len(lines) == 31
    assert lines[1].startswith("1000,168,")


def test_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["pnt-scan", "--x-min", "1e3", "--x-max", "3e6", "--points", "25"]
    assert run(base + ["--threads", "1", "--out", str(a)]) == 0
    assert run(base + ["--threads", "6", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_no_output_on_error(tmp_path):
    out = tmp_path / "never.csv"
    assert run(["pnt-scan", "--x-min", "1", "--x-max", "1e4", "--out", str(out)]) == 1
    assert not out.exists()
    assert list(tmp_path.iterdir()) == []


def test_fit_json(capsys):
    assert run(["fit", "--x-min", "1e3", "--x-max", "1e6", "--points", "40"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert set(d) == {"exponent", "intercept", "r2", "x_min", "x_max"}
    assert -0.12 < d["exponent"] < -0.06


def test_ode_and_trace(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    assert run(["ode", "--eta", "0.1", "--alpha", "1.05", "--eps", "0.002", "--levels", "5",
                "--trace", str(trace)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["parity_deviation"] > 1e-4
    assert d["second_derivative_jump"] > 10 * d["noise_floor"]
    lines = trace.read_text().splitlines()
    assert lines[0] == "level,eta,t_plus,partial_product" and len(lines) == 7
    assert lines[2].split(",")[1] == "0.0085"


def test_ode_trivial(capsys):
    assert run(["ode", "--eta", "0.3"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert abs(d["final_product"] - 0.7) < 1e-14 and d["parity_deviation"] < 1e-14


def test_golden_and_ladder(tmp_path, capsys):
    assert run(["golden", "--iters", "10"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(55 / 89)
    assert run(["ladder", "--limit", "30"]) == 0
    assert json.loads(capsys.readouterr().out)["inversion_count"] == 10
    out = tmp_path / "ladder.csv"
    assert run(["ladder", "--limit", "30", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "prime,inversion_count,cf_exponent"


def test_padic_and_norm(capsys):
    assert run(["padic", "--prime", "3", "--digits", "8", "21"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["r"] == 1 and d["abs"] == "1/3" and d["digits"] == [1, 2]
    assert d["monna"] == pytest.approx(11 / 27)
    assert run(["norm", "1000", "--delta", "0.01", "--bound", "100"]) == 0
    assert json.loads(capsys.readouterr().out) == {"regime": "infinite", "value": 0.5,
                                                   "delta": 0.01}


def test_tree_formats(capsys):
    assert run(["tree", "--prime", "2", "--digits", "3", "1", "3", "5", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert {"prefix", "radius_exp", "children"} <= set(d)
    assert run(["tree", "--prime", "2", "--digits", "3", "1", "3", "5"]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("digraph") and 'label="2^-2"' in dot


def test_report_states_gap(capsys):
    assert run(["report", "--x-max", "1e6", "--points", "61"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["claimed_exponent"] == pytest.approx(-NU)
    assert d["gap_to_claim"] == pytest.approx(d["fit"]["exponent"] + NU)
    assert d["claim_reproduced"] is False
    assert d["ladder"]["agree"] and d["rh_shape"]["holds"]
    assert "gap" in d["verdict"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "scalefree", "sieve", "--limit", "10"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "pi(10) = 4\n"
