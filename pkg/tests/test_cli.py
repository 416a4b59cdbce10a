"""
Test the verify console script.
"""

import json

import pytest

from make_test_files import write_config

from operator_means import oracle
from operator_means.cli import build_parser, main


def test_default_command_is_run():
    args = build_parser().parse_args(["run", "--theorems", "T25", "--maps", "pinching:1,1", "--maps", "block_sum:2"])
    assert args.command == "run"
    assert args.maps == ["pinching:1,1", "block_sum:2"]


def test_run(tmp_path, capsys):
    out = tmp_path / "report.json"
    argv = ["--theorems", "T25", "--dims", "1", "--weights", "0.5", "--trials", "1", "--out", str(out)]
    assert main(argv) == 0
    data = json.loads(out.read_text())
    assert data["summary"]["total"] == 1
    assert "cells: 1" in capsys.readouterr().out


def test_run_csv(tmp_path):
    out = tmp_path / "report.csv"
    argv = ["run", "--theorems", "C27", "--dims", "2", "--trials", "1", "--out", str(out), "--format", "csv"]
    assert main(argv) == 0
    assert out.read_text().startswith("theorem_id,dim,alpha,trial")


def test_run_maps(tmp_path):
    out = tmp_path / "report.json"
    argv = [
        "--theorems",
        "T31",
        "--dims",
        "2",
        "--weights",
        "0.5",
        "--maps",
        "pinching:1,1;block_sum:2",
        "--trials",
        "1",
        "--out",
        str(out),
    ]
    assert main(argv) == 0
    data = json.loads(out.read_text())
    assert data["config"]["map_specs"] == ["pinching:1,1", "block_sum:2"]
    assert [c["cell"]["map"] for c in data["cells"]] == ["pinching:1,1", "block_sum:2"]


@pytest.mark.parametrize(
    "argv",
    [
        ["--theorems", "T21,X99"],
        ["--theorems", "T25", "--dims", "2,x"],
        ["--theorems", "T25", "--trials", "0"],
        ["--theorems", "T25", "--weights", "1.5"],
        ["--theorems", "T21", "--functions", "neg_power:abc"],
    ],
)
def test_configuration_errors(argv, capsys):
    assert main(argv) == 2
    assert "verify: error:" in capsys.readouterr().err


def test_config_file(tmp_path):
    config = write_config(tmp_path / "config.json", theorem_ids="T25", dims=[1], weight_grid=[0.5], trials_per_cell=5)
    out = tmp_path / "report.json"
    assert main(["--config", config, "--trials", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["config"]["trials_per_cell"] == 2
    assert data["summary"]["total"] == 2


def test_vacuous_run(capsys):
    assert main(["--theorems", ""]) == 0
    assert "cells: 0" in capsys.readouterr().out


def test_oracle(tmp_path):
    out = tmp_path / "derived.json"
    assert main(["oracle", "--out", str(out)]) == 0
    assert oracle.compare(json.loads(out.read_text()), oracle.load_fixtures()) == []


def test_sensitivity_output(tmp_path):
    out = tmp_path / "sensitivity.json"
    status = main(["sensitivity", "--seed", "7", "--trials", "2", "--out", str(out)])
    data = json.loads(out.read_text())
    assert data["trials_run"] <= 2
    assert status == (0 if data["found"] else 1)
