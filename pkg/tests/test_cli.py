import csv
import io
import json
import subprocess
import sys

import pytest

from stochastic_electron import cli
from stochastic_electron.report import build_report, dumps, format_float, Table, table_to_csv, check_below


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_zpf_json(capsys):
    code, out, err = run(capsys, "zpf", "--format", "json")
    assert code == 0 and err == ""
    report = json.loads(out)
    assert report["schema_version"] == "1.0"
    assert report["units"] == "atomic"
    assert report["results"]["e_kinetic"]["unit"] == "hartree"
    assert report["results"]["e_kinetic"]["value"] == pytest.approx(87.2398, abs=1e-4)
    assert report["results"]["rel_deviation"]["value"] < 1e-10
    assert report["checks"][0]["status"] == "pass"


def test_variational_example(capsys):
    code, out, _ = run(capsys, "variational", "--Z", "1", "--format", "json")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["r_opt"]["value"] == 1.0
    assert results["e_opt"]["value"] == -0.5


def test_variational_table_csv(capsys):
    code, out, _ = run(capsys, "variational", "--Z-max", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["r_opt_bohr"]) for r in rows] == [1.0, 0.5, 1 / 3, 0.25]


def test_angular_table(capsys):
    code, out, _ = run(capsys, "angular", "--l-max", "3")
    assert code == 0
    table = json.loads(out)["results"]["table"]
    assert [row["l_square_paper"]["value"] for row in table] == [0.75, 2.25, 6.25, 12.25]
    assert table[0]["l_square_closed"]["value"] == 0.25


def test_cloud(capsys):
    code, out, _ = run(capsys, "cloud", "--points", "30")
    assert code == 0
    report = json.loads(out)
    assert {c["name"] for c in report["checks"]} >= {"born_identity", "potential_dual_route", "far_field_charge"}
    assert all(c["status"] == "pass" for c in report["checks"])
    assert len(report["table"]["rows"]) == 30


def test_json_sorted_and_17_digits(capsys):
    _, out, _ = run(capsys, "zpf")
    report = json.loads(out)
    assert list(report) == sorted(report)
    assert format_float(report["results"]["e_kinetic"]["value"]) in out
    assert "87.2398265430202" in out


def test_csv_json_same_values(capsys):
    _, js, _ = run(capsys, "simulate", "--state", "harmonic", "--paths", "300", "--steps", "20", "--dt", "0.01",
                   "--bins", "6", "--seed", "5")
    _, cs, _ = run(capsys, "simulate", "--state", "harmonic", "--paths", "300", "--steps", "20", "--dt", "0.01",
                   "--bins", "6", "--seed", "5", "--format", "csv")
    rows = json.loads(js)["table"]["rows"]
    lines = cs.strip().splitlines()[1:]
    assert len(lines) == len(rows)
    for line, row in zip(lines, rows):
        cells = line.split(",")
        for cell, value in zip(cells, row):
            if isinstance(value, str):
                assert cell == value
            else:
                assert float(cell) == float(value) or (cell == "NaN" and value != value)


def test_seed_from_environment(capsys, monkeypatch):
    argv = ["simulate", "--state", "harmonic", "--paths", "50", "--steps", "3", "--dt", "0.01"]
    monkeypatch.setenv(cli.SEED_ENV, "99")
    _, env_out, _ = run(capsys, *argv)
    monkeypatch.delenv(cli.SEED_ENV)
    _, flag_out, _ = run(capsys, *argv, "--seed", "99")
    _, default_out, _ = run(capsys, *argv)
    assert env_out == flag_out != default_out
    assert json.loads(env_out)["config_echo"]["seed"] == 99


def test_workers_not_in_output(capsys):
    argv = ["simulate", "--paths", "64", "--steps", "5", "--seed", "3"]
    _, one, _ = run(capsys, *argv)
    _, four, _ = run(capsys, *argv, "--workers", "4")
    assert one == four


def test_timestamp_opt_in(capsys):
    _, plain, _ = run(capsys, "angular")
    _, stamped, _ = run(capsys, "angular", "--timestamp")
    assert "generated_at" not in json.loads(plain)
    assert "generated_at" in json.loads(stamped)
    _, again, _ = run(capsys, "angular", "--no-timestamp")
    assert again == plain


def test_out_file(tmp_path, capsys):
    target = tmp_path / "zpf.csv"
    code, out, _ = run(capsys, "zpf", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("omega_min_per_atomic_time,")


@pytest.mark.parametrize("argv", [
    ["simulate", "--paths", "0"],
    ["simulate", "--unknown"],
    ["variational", "--Z", "0.5"],
    ["angular", "--l", "-1"],
    ["zpf", "--format", "xml"],
    ["nonsense"],
    [],
])
def test_argument_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_step_size_is_argument_error(capsys):
    code, out, err = run(capsys, "simulate", "--dt", "1.0", "--paths", "10")
    assert code == 2 and out == "" and "dt" in err


def test_inverted_cutoffs_is_argument_error(capsys):
    code, out, err = run(capsys, "zpf", "--omega-min", "5", "--omega-max", "1")
    assert code == 2 and out == ""


def test_numerical_failure_exit_3(capsys):
    code, out, err = run(capsys, "cloud", "--abs-tol", "1e-300", "--rel-tol", "1e-300", "--max-depth", "1")
    assert code == 3 and out == ""
    assert "numerical failure" in err


def test_report_underpowered(capsys):
    code, out, _ = run(capsys, "report", "--paths", "100")
    report = json.loads(out)
    status = {c["name"]: c["status"] for c in report["checks"]}
    assert code == 0
    for name in ("born_identity", "self_energy_closed_form", "budget_ratio", "ou_variance", "hydrogen_ks",
                 "variational_Z1", "l_square_table"):
        assert name in status
    for name in ("ou_variance", "hydrogen_ks", "velocity_estimator"):
        assert status[name] == "skipped"
    skipped_details = {c["detail"] for c in report["checks"] if c["status"] == "skipped"}
    assert skipped_details == {"skipped: underpowered"}
    assert all(s == "pass" for n, s in status.items() if s != "skipped")


def test_failed_check_exit_code(capsys, monkeypatch):
    def failing(args):
        return {}, [check_below("always", 1.0, 0.5)], Table(["a"], [[1.0]])

    monkeypatch.setitem(cli.RUNNERS, "zpf", failing)
    code, out, _ = run(capsys, "zpf")
    assert code == 1
    assert json.loads(out)["checks"][0]["status"] == "fail"


def test_report_helpers():
    assert format_float(0.1) == "0.10000000000000001"
    assert dumps({"b": float("nan"), "a": [1, True]}) == '{"a": [1, true], "b": "NaN"}\n'
    table = Table(["x", "note"], [[1.5, "a,b"]])
    assert table_to_csv(table) == 'x,note\n1.5,"a,b"\n'
    report = build_report({"k": 1}, {}, [], None)
    assert "table" not in report and "generated_at" not in report


def test_console_script_entry():
    result = subprocess.run([sys.executable, "-m", "stochastic_electron.cli", "angular", "--l", "2"],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert json.loads(result.stdout)["results"]["l_square_paper"]["value"] == 6.25
