import json
import subprocess
import sys

import pytest

from mixbound.cli import SCHEMA, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list_scenarios(capsys):
    code, out, _ = run(capsys, "list-scenarios")
    assert code == 0
    assert {line.split()[0] for line in out.splitlines()} == {
        "gauss-equal-cov", "gauss-subgauss", "gauss-variance", "uniform-gauss"}
    code, out, _ = run(capsys, "list-scenarios", "--json")
    doc = json.loads(out)
    assert doc["schema"] == SCHEMA
    assert {s["name"]: s["verifiable"] for s in doc["scenarios"]}["gauss-subgauss"] is False


def test_bound_equal_covariance(capsys):
    code, out, _ = run(capsys, "bound", "--scenario", "gauss-equal-cov", "--p", "0.5", "--param", "y=1")
    assert code == 0
    doc = json.loads(out)
    b = doc["bounds"]
    assert b["pi_theorem"]["inverse_constant"] == pytest.approx(1 + 0.25 * 1.718281828459045)
    assert b["pi_theorem"]["case"] == "interpolated"
    assert b["pi_cm_baseline"]["inverse_constant"] == pytest.approx(1.86119, abs=5e-6)
    assert doc["chi"]["method"] == "closed_form"
    assert doc["params"] == {"y": 1.0, "sigma": 1.0, "n": 1}


def test_bound_csv(capsys):
    code, out, _ = run(capsys, "bound", "--scenario", "uniform-gauss", "--p", "0.5", "--csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "bound,inverse_constant,case"
    rows = {l.split(",")[0]: l.split(",") for l in lines[1:]}
    assert float(rows["behs"][1]) == pytest.approx(3.0664, abs=5e-5)


def test_chi2_infinite_encoding(capsys):
    code, out, _ = run(capsys, "chi2", "--scenario", "gauss-variance", "--param", "sigma=2")
    doc = json.loads(out)
    assert code == 0 and doc["chi"]["chi0"] == "inf"
    code, out, _ = run(capsys, "chi2", "--scenario", "uniform-gauss", "--numeric")
    doc = json.loads(out)
    assert doc["numeric"]["chi0"] == pytest.approx(doc["chi"]["chi0"], abs=1e-6)
    assert doc["numeric"]["chi1"] == "inf"


def test_subgauss_bounds_only(capsys):
    code, out, _ = run(capsys, "bound", "--scenario", "gauss-subgauss", "--p", "0.3", "--param", "kappa=2")
    assert code == 0
    assert json.loads(out)["bounds"]["pi_nested"]["inverse_constant"] == pytest.approx(1.9)
    code, _, err = run(capsys, "verify", "--scenario", "gauss-subgauss", "--p", "0.3")
    assert code == 1 and "does not determine" in err


def test_verify_exit_ok(capsys):
    code, out, _ = run(capsys, "verify", "--scenario", "gauss-equal-cov", "--p", "0.3", "--param", "y=1.5")
    doc = json.loads(out)
    assert code == 0 == doc["exit_code"]
    assert doc["pi"]["relation"] == "BoundHolds" and doc["lsi"]["relation"] == "BoundHolds"


def test_verify_inconclusive_exit(capsys):
    code, out, _ = run(capsys, "verify", "--scenario", "gauss-equal-cov", "--p", "0.3", "--tol", "1e-30",
                       "--skip-lsi")
    assert code == 3
    assert json.loads(out)["pi"]["relation"] == "Inconclusive"


def test_verify_rejects_nd(capsys):
    code, _, err = run(capsys, "verify", "--scenario", "uniform-gauss", "--p", "0.3", "--param", "n=2")
    assert code == 1 and "one-dimensional" in err


def test_sweep_csv_and_output_file(capsys, tmp_path):
    target = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "sweep", "--scenario", "gauss-variance", "--grid", "0.1:0.9:3", "-o", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "p,bound_inv_const,oracle_gap,relation,margin"
    assert [l.split(",")[0] for l in lines[1:]] == ["0.1", "0.5", "0.9"]
    assert all(l.split(",")[3] == "BoundHolds" for l in lines[1:])


def test_sweep_is_deterministic_across_jobs(capsys):
    args = ["sweep", "--scenario", "gauss-equal-cov", "--grid", "0.2:0.8:4", "--which", "lsi"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args, "--jobs", "2")
    assert a == b


def test_outputs_byte_identical(capsys):
    args = ["bound", "--scenario", "gauss-variance", "--p", "0.2", "--param", "sigma=0.25", "--seed", "7"]
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


@pytest.mark.parametrize("argv", [
    ["bound", "--scenario", "gauss-equal-cov", "--p", "1.5"],
    ["bound", "--scenario", "nope", "--p", "0.5"],
    ["bound", "--scenario", "gauss-equal-cov"],
    ["sweep", "--scenario", "gauss-equal-cov", "--grid", "0:1:3"],
    ["sweep", "--scenario", "gauss-equal-cov", "--grid", "oops"],
    [],
])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_unknown_param_exit_1(capsys):
    code, _, err = run(capsys, "bound", "--scenario", "gauss-equal-cov", "--p", "0.5", "--param", "zeta=1")
    assert code == 1 and "zeta" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "mixbound", "bound", "--scenario", "gauss-equal-cov", "--p", "0.5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["schema"] == SCHEMA
