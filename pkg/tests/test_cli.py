import csv
import json

import pytest
from click.testing import CliRunner

from pointspec.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_analyze_tetrahedron(runner, tmp_path):
    out = tmp_path / "r.json"
    res = runner.invoke(main, ["analyze", "tetrahedron", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert "e = 3, r = 0" in res.output
    report = json.loads(out.read_text())
    assert set(report) == {"config", "bound_states", "zero_modes", "laurent", "diagnostics"}
    assert report["zero_modes"]["e"] == 3 and report["zero_modes"]["r"] == 0
    assert report["zero_modes"]["kind"] == "EigenvalueOnly"
    assert set(report["laurent"]) >= {"a_minus2", "a_minus1", "method", "discrepancy"}
    # complex entries are [re, im]
    assert len(report["laurent"]["a_minus2"][0][0]) == 2


def test_report_is_deterministic(runner, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert runner.invoke(main, ["analyze", "two_center:2", "--out", str(p)]).exit_code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_spectrum_single(runner):
    res = runner.invoke(main, ["spectrum", "single:-1"])
    assert res.exit_code == 0
    assert "12.566371" in res.output and "-157.9137" in res.output


def test_laurent_both(runner):
    res = runner.invoke(main, ["laurent", "two_center", "--method", "both"])
    assert res.exit_code == 0
    disc = float(res.output.strip().splitlines()[-1].split(":")[1])
    assert disc <= 1e-8


def test_kernel_and_grid(runner, tmp_path):
    grid = tmp_path / "k.csv"
    res = runner.invoke(
        main, ["kernel", "two_center", "--z", "0,1", "--x", "0.5,1,0", "--xp", "0,0,2",
               "--grid", str(grid), "--points", "11"],
    )
    assert res.exit_code == 0, res.output
    rows = list(csv.reader(grid.open()))
    assert rows[0] == ["t", "x1", "x2", "x3", "re", "im"] and len(rows) == 12


def test_kernel_at_center_is_an_error(runner):
    res = runner.invoke(main, ["kernel", "two_center", "--z", "0,1", "--x", "0,0,0", "--xp", "0,0,2"])
    assert res.exit_code == 1
    assert "CoincidentWithCenter" in res.output


def test_search(runner, tmp_path):
    out = tmp_path / "s.json"
    res = runner.invoke(main, ["search", "--n", "3", "--budget", "300", "--seed", "2", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert json.loads(out.read_text())["config"]["n"] == 3


def test_registry(runner):
    res = runner.invoke(main, ["registry", "list"])
    assert res.exit_code == 0 and "moser_spindle" in res.output
    res = runner.invoke(main, ["registry", "show", "tetrahedron"])
    assert res.exit_code == 0 and len(json.loads(res.output)["alphas"]) == 4
    assert runner.invoke(main, ["registry", "show", "nonagon"]).exit_code == 1


def test_scan(runner, tmp_path):
    path = tmp_path / "s.csv"
    res = runner.invoke(main, ["scan", "moser_spindle", "--range", "0.01,10", "--points", "50", "--csv", str(path)])
    assert res.exit_code == 0
    assert len(path.read_text().splitlines()) == 51


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["frobnicate"],
        ["spectrum"],
        ["kernel", "single", "--z", "1", "--x", "1,0,0", "--xp", "0,1,0"],
        ["scan", "single", "--range", "5,1"],
        ["search", "--n", "1"],
        ["laurent", "single", "--method", "series"],
    ],
)
def test_usage_errors_exit_2(runner, args):
    assert runner.invoke(main, args).exit_code == 2


def test_missing_file_is_exit_1(runner, tmp_path):
    res = runner.invoke(main, ["analyze", str(tmp_path / "nope.json")])
    assert res.exit_code == 1
