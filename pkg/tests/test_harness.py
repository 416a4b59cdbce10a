"""
Test the harness: configuration, runs, reports and the sensitivity search.
"""

import io
import json

import numpy as np
import pandas as pd
import pytest

from make_test_files import write_config

import operator_means as om

from operator_means import Harness, HarnessConfig
from operator_means.harness import LINK_COLUMNS, RunReport, run_sensitivity, summarize
from operator_means.loewner import check_chain
from operator_means.spectral import SymMatrix
from operator_means.suites import axioms
from operator_means.theorems import GapReport, TheoremInstance
from operator_means.utils import Cell


def test_unknown_keys():
    with pytest.raises(AssertionError):
        HarnessConfig.from_kwargs(theorem="T21")


@pytest.mark.parametrize(
    "kwargs",
    [
        {"trials_per_cell": 0},
        {"format": "xml"},
        {"dims": [0]},
        {"dims": [om.MAX_DIM + 1]},
        {"eig_range": (1.0, 0.5)},
        {"seed": -1},
        {"pairs_per_list": 0},
        {"weight_grid": []},
    ],
)
def test_validation(kwargs):
    with pytest.raises(AssertionError):
        HarnessConfig.from_kwargs(**kwargs)


def test_out_of_range_weights():
    with pytest.raises(ValueError):
        HarnessConfig.from_kwargs(weight_grid=[0.5, 1.5])
    with pytest.raises(ValueError):
        HarnessConfig.from_kwargs(upsilon_grid=[2.0])


def test_defaults_and_strings():
    config = HarnessConfig.from_kwargs(
        theorem_ids="t25,c27",
        dims="2,3",
        weight_grid="0,0.5",
        betas="0.25",
        map_specs="pinching:1,1;block_sum:2",
        eig_range="0.5,2",
    )
    assert config.theorem_ids == ("T25", "C27")
    assert config.dims == (2, 3)
    assert config.alphas == (0.0, 0.5)
    assert config.betas == (0.25,)
    assert config.gammas == config.weight_grid
    assert config.map_specs == ("pinching:1,1", "block_sum:2")
    assert config.eig_range == (0.5, 2.0)
    assert config.trials_per_cell == om.DEFAULTS["trials_per_cell"]
    assert config.seed == 42


def test_echo_and_replace():
    config = HarnessConfig.from_kwargs(theorem_ids="T25", output_path="report.json", parallel=True)
    echo = config.echo()
    for key in ["output_path", "parallel", "n_jobs"]:
        assert key not in echo
    assert echo["theorem_ids"] == ["T25"]
    json.dumps(echo)

    changed = config.replace(trials_per_cell=5)
    assert changed.trials_per_cell == 5
    assert changed.theorem_ids == config.theorem_ids


def test_from_file(tmp_path):
    fname = write_config(tmp_path / "config.json", theorem_ids="T25", dims=[2], trials_per_cell=3)
    config = HarnessConfig.from_file(fname, trials_per_cell=4)
    assert config.dims == (2,)
    assert config.trials_per_cell == 4


def test_vacuous_run():
    report = Harness().run()
    assert report.summary == {
        "cells": 0,
        "total": 0,
        "passed": 0,
        "failed": 0,
        "weakest_gap": None,
        "argmin": None,
        "weakest_gap_all": None,
    }
    assert report.exit_status == 0
    assert list(report.table.columns) == ["theorem_id", "dim"] + LINK_COLUMNS
    assert Harness().meta.empty


def test_run():
    harness = Harness(theorem_ids="T25,C27", dims=[2], weight_grid=[0.5], trials_per_cell=2)
    report = harness.run()
    summary = report.summary
    # T25 has one (alpha, beta) cell, C27 one cell per triangle alpha
    assert summary["cells"] == 1 + len(om.TRIANGLE_ALPHAS)
    assert summary["total"] == 2 * summary["cells"]
    assert summary["failed"] == 0
    assert report.exit_status == 0
    assert summary["argmin"]["trial"] in (0, 1)
    assert set(summary["argmin"]["cell"]) >= {"theorem_id", "dim"}

    cell = harness.cells[0]
    assert harness[cell] is report.results[0][1]
    assert len(harness.meta) == summary["cells"]

    lines = summarize(report)
    assert lines[0].startswith("cells: 8")
    assert "T25" in lines[-1]


def test_report_is_reproducible():
    kwargs = dict(theorem_ids="T21,SMA", dims=[2], weight_grid=[0.3], upsilon_grid=[0], trials_per_cell=2)
    assert Harness(**kwargs).run().to_json() == Harness(**kwargs).run().to_json()


def test_parallel_matches_serial():
    kwargs = dict(theorem_ids="T25,C27,IDS", dims=[2], weight_grid=[0.0, 0.5], trials_per_cell=2)
    serial = Harness(**kwargs).run()
    parallel = Harness(parallel=True, n_jobs=2, **kwargs).run()
    assert serial.to_json() == parallel.to_json()


def test_worker_count_does_not_change_output():
    kwargs = dict(theorem_ids="T21,T25,R27,AND", dims=[2, 3], weight_grid=[0.25, 0.5], trials_per_cell=3)
    one = Harness(parallel=True, n_jobs=1, **kwargs).run()
    four = Harness(parallel=True, n_jobs=4, **kwargs).run()
    assert one.to_json() == four.to_json()
    assert one.to_csv() == four.to_csv()


def test_weakest_gap_skips_links_outside_range():
    # alpha = 2 is outside [0, 1] so the second C27 link may fail without failing the report
    config = HarnessConfig.from_kwargs(theorem_ids="C27", dims=[1])
    cell = Cell("C27", 1, alpha=2.0)
    reports = [
        TheoremInstance("C27", {"a": SymMatrix(1.0), "b": SymMatrix(b), "alpha": 2.0}).evaluate()
        for b in [-1.0, 0.25]
    ]
    report = RunReport(config, [(cell, reports)])
    summary = report.summary
    assert summary["failed"] == 0
    assert summary["weakest_gap_all"] == reports[0].weakest_gap
    assert summary["weakest_gap_all"] < 0
    assert summary["weakest_gap"] >= 0
    assert summary["weakest_gap"] == min(r.weakest_expected_gap for r in reports)
    assert summary["argmin"]["cell"] == {"theorem_id": "C27", "dim": 1, "alpha": 2.0}
    assert any("outside their range" in line for line in summarize(report))


def test_weakest_gap_without_expected_links():
    config = HarnessConfig.from_kwargs(theorem_ids="C27", dims=[1])
    chain = check_chain([SymMatrix(2.0), SymMatrix(1.0)], expected=[False])
    report = RunReport(config, [(Cell("C27", 1, alpha=2.0), [GapReport("C27", {"alpha": 2.0}, chain)])])
    summary = report.summary
    assert summary["weakest_gap"] is None
    assert summary["argmin"] is None
    assert summary["weakest_gap_all"] < 0


def test_write_json(tmp_path):
    path = tmp_path / "report.json"
    report = Harness(theorem_ids="T25", dims=[1], weight_grid=[0.5], trials_per_cell=1, output_path=str(path)).run()
    data = json.loads(path.read_text())
    assert set(data) == {"config", "cells", "summary"}
    assert data["config"]["theorem_ids"] == ["T25"]
    assert data["cells"][0]["cell"] == {"theorem_id": "T25", "dim": 1, "alpha": 0.5, "beta": 0.5}
    assert len(data["cells"][0]["reports"]) == 1
    assert path.read_text() == report.to_json()


def test_write_csv(tmp_path):
    path = tmp_path / "report.csv"
    Harness(theorem_ids="C27", dims=[2], trials_per_cell=2, output_path=str(path), format="csv").run()
    table = pd.read_csv(path)
    assert list(table.columns) == ["theorem_id", "dim", "alpha"] + LINK_COLUMNS
    # two links per chain
    assert len(table) == len(om.TRIANGLE_ALPHAS) * 2 * 2
    assert set(table.theorem_id) == {"C27"}


def test_csv_gaps_read_back_exactly():
    report = Harness(theorem_ids="T25,R27", dims=[2, 3], weight_grid=[0.3, 0.7], trials_per_cell=3).run()
    table = report.table
    back = pd.read_csv(io.StringIO(report.to_csv()), float_precision="round_trip")
    assert len(back) == len(table)
    assert np.array_equal(back["gap"].to_numpy(), table["gap"].to_numpy())
    assert np.array_equal(back["scale"].to_numpy(), table["scale"].to_numpy())


def test_json_gaps_read_back_exactly():
    report = Harness(theorem_ids="T21,C27", dims=[2], weight_grid=[0.3], upsilon_grid=[0], trials_per_cell=3).run()
    data = json.loads(report.to_json())
    for stored, (_, reports) in zip(data["cells"], report.results):
        for stored_report, gap_report in zip(stored["reports"], reports):
            assert [link["gap"] for link in stored_report["links"]] == [link.gap for link in gap_report.links]
            assert stored_report["weakest_gap"] == gap_report.weakest_gap


def test_sensitivity_result():
    result = run_sensitivity(seed=7, trials=3)
    assert result.trials_run <= 3
    assert result.exit_status == (0 if result.found else 1)
    assert set(result.to_dict()) == {"seed", "trials_run", "threshold", "found", "report"}


@pytest.mark.slow
def test_sensitivity_finds_violation():
    result = run_sensitivity(trials=10000)
    assert result.found
    assert result.exit_status == 0
    assert result.report.weakest_gap <= -1e-4
    assert result.report.params["f"] == "exp_neg"


@pytest.mark.slow
def test_standard_grid():
    report = Harness(theorem_ids="all", trials_per_cell=100, parallel=True).run()
    assert report.summary["failed"] == 0
    assert report.exit_status == 0


@pytest.mark.slow
def test_axioms_along_the_power_path():
    report = Harness(theorem_ids="AXM", upsilon_grid=[-1, -0.5, 0, 0.5, 1], trials_per_cell=100).run()
    assert report.summary["cells"] == len(om.DEFAULTS["dims"]) * 5 * len(axioms.AXIOMS)
    assert report.summary["failed"] == 0
