"""
This controls and connects the individual suites.
"""

import json
import logging

from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
import pandas as pd

import operator_means as om

from operator_means.functions import ScalarFunctionSpec, parse_function_list
from operator_means.means import PathSpec, Weight
from operator_means.theorems import TheoremInstance, parse_theorem_ids
from operator_means.utils import (
    MASK64,
    cell_seed,
    gen_posdef,
    load_config,
    make_rng,
    parse_number_list,
)


logger = logging.getLogger(__name__)

# not part of the report: they do not change any result
RUNTIME_KEYS = ("output_path", "parallel", "n_jobs")

# cell coordinates, in the column order of the CSV report
COORDINATE_COLUMNS = [
    "theorem_id",
    "dim",
    "alpha",
    "beta",
    "gamma",
    "delta",
    "upsilon",
    "function",
    "map",
    "reading",
    "axiom",
    "identity",
    "pairs",
]
LINK_COLUMNS = ["trial", "link", "gap", "scale", "holds", "expected"]


def _numbers(value, cast=float):
    if isinstance(value, str):
        return tuple(parse_number_list(value, cast=cast))
    return tuple(cast(v) for v in value)


def _map_specs(value):
    # map specs contain commas ("pinching:1,1"), so a single string is split on ";"
    if isinstance(value, str):
        value = value.split(";")
    return tuple(text.strip() for text in value if text.strip())


@dataclass(frozen=True)
class HarnessConfig:
    """Grid, seed and output settings of a harness run.

    Build with `from_kwargs`, `from_file`, or the CLI. Strings are parsed the
    way the CLI parses them, so ``dims="2,3"`` and ``dims=[2, 3]`` are the
    same.

    Attributes
    ----------
    theorem_ids: tuple of str
    dims: tuple of int
    weight_grid: tuple of float
        Default for `alphas`, `betas`, `gammas` and `deltas`.
    alphas, betas, gammas, deltas: tuple of float
    upsilon_grid: tuple of float
    function_specs: tuple of str
        Catalog functions in their canonical text form.
    map_specs: tuple of str
    trials_per_cell: int
    seed: int
        64-bit unsigned.
    eig_range: tuple of float
        ``(lo, hi)``; bounds the condition number of generated matrices by
        ``hi / lo``.
    output_path: str or None
    format: str
        ``"json"`` or ``"csv"``.
    pairs_per_list: int
        Number of pairs in the lists of sum inequalities.
    parallel: bool
    n_jobs: int
        Number of joblib workers; values below 1 use every core.
    """

    theorem_ids: tuple
    dims: tuple
    weight_grid: tuple
    alphas: tuple
    betas: tuple
    gammas: tuple
    deltas: tuple
    upsilon_grid: tuple
    function_specs: tuple
    map_specs: tuple
    trials_per_cell: int
    seed: int
    eig_range: tuple
    output_path: str
    format: str
    pairs_per_list: int
    parallel: bool
    n_jobs: int

    @classmethod
    def from_kwargs(cls, **kwargs):
        """Fill in `DEFAULTS` and validate.

        Raises
        ------
        AssertionError
            For unknown keys and out-of-range settings.
        SpecSyntaxError
            For spec strings that do not parse.
        """
        # make sure only known keys are input in kwargs
        unknown_keys = set(kwargs) - set(om.keys_kwargs)
        assertion = f"keys into Harness {unknown_keys} are unknown."
        assert len(unknown_keys) == 0, assertion

        settings = {**om.DEFAULTS, **{k: v for k, v in kwargs.items() if v is not None}}
        weight_grid = _numbers(settings["weight_grid"])
        for key in ("alphas", "betas", "gammas", "deltas"):
            settings[key] = _numbers(settings[key]) if key in settings else weight_grid

        config = cls(
            theorem_ids=tuple(parse_theorem_ids(settings["theorem_ids"])),
            dims=_numbers(settings["dims"], cast=int),
            weight_grid=weight_grid,
            alphas=settings["alphas"],
            betas=settings["betas"],
            gammas=settings["gammas"],
            deltas=settings["deltas"],
            upsilon_grid=_numbers(settings["upsilon_grid"]),
            function_specs=tuple(
                str(f)
                for f in (
                    parse_function_list(settings["function_specs"])
                    if isinstance(settings["function_specs"], str)
                    else [ScalarFunctionSpec.parse(text) for text in settings["function_specs"]]
                )
            ),
            map_specs=_map_specs(settings["map_specs"]),
            trials_per_cell=int(settings["trials_per_cell"]),
            seed=int(settings["seed"]),
            eig_range=_numbers(settings["eig_range"]),
            output_path=settings["output_path"],
            format=settings["format"],
            pairs_per_list=int(settings["pairs_per_list"]),
            parallel=bool(settings["parallel"]),
            n_jobs=int(settings["n_jobs"]),
        )
        config.validate()
        return config

    @classmethod
    def from_file(cls, path, **overrides):
        """Load keyword arguments from a JSON file; `overrides` win."""
        return cls.from_kwargs(**{**load_config(path), **overrides})

    def validate(self):
        """Assert that every setting is in range."""
        assert self.trials_per_cell >= 1, "trials_per_cell must be at least 1"
        assert self.format in ("json", "csv"), '`format` has to be "json" or "csv"'
        assert 0 <= self.seed <= MASK64, "seed must be a 64-bit unsigned integer"
        assert self.pairs_per_list >= 1, "pairs_per_list must be at least 1"
        assert len(self.eig_range) == 2, "eig_range is (lo, hi)"
        lo, hi = self.eig_range
        assert 0 < lo < hi, f"eig_range must satisfy 0 < lo < hi, got {self.eig_range}"
        assert all(1 <= d <= om.MAX_DIM for d in self.dims), f"dims must lie in 1..{om.MAX_DIM}"
        for key in ("weight_grid", "alphas", "betas", "gammas", "deltas", "upsilon_grid"):
            assert len(getattr(self, key)) > 0, f"{key} must not be empty"
        # Weight and PathSpec raise ValueError out of range
        for key in ("alphas", "betas", "gammas", "deltas"):
            for w in getattr(self, key):
                Weight(w)
        for v in self.upsilon_grid:
            PathSpec(v)

    def echo(self):
        """Configuration as written into reports.

        Runtime-only settings (output path and parallelism) are left out so
        reports stay byte-identical across worker counts.
        """
        out = {}
        for f in fields(self):
            if f.name in RUNTIME_KEYS:
                continue
            value = getattr(self, f.name)
            out[f.name] = list(value) if isinstance(value, tuple) else value
        return out

    def replace(self, **changes):
        """New config with some settings changed (and validated)."""
        return HarnessConfig.from_kwargs(**{**asdict(self), **changes})


class RunReport:
    """
    Per-cell gap reports of a run and their summary.

    Attributes
    ----------
    config: HarnessConfig
    results: list of (Cell, list of GapReport)
        In canonical cell order.
    """

    def __init__(self, config, results):
        self.config = config
        self.results = results

    @property
    def reports(self):
        """All gap reports with their cell and trial index."""
        return [(cell, trial, report) for cell, reports in self.results for trial, report in enumerate(reports)]

    @property
    def summary(self):
        """Counts over all cells.

        Returns
        -------
        dict
            total, passed and failed count gap reports (a report passes when
            every link expected to hold does). weakest_gap is the minimum
            normalized gap over links expected to hold and argmin the cell
            and trial where it occurs; weakest_gap_all also takes the links
            outside their parameter range into account.
        """
        reports = self.reports
        passed = sum(report.expected_hold for _, _, report in reports)
        summary = {
            "cells": len(self.results),
            "total": len(reports),
            "passed": passed,
            "failed": len(reports) - passed,
            "weakest_gap": None,
            "argmin": None,
            "weakest_gap_all": None,
        }
        expected = [item for item in reports if item[2].weakest_expected_gap is not None]
        if expected:
            cell, trial, report = min(expected, key=lambda item: item[2].weakest_expected_gap)
            summary["weakest_gap"] = report.weakest_expected_gap
            summary["argmin"] = {"cell": cell.to_dict(), "trial": trial}
        if reports:
            summary["weakest_gap_all"] = min(report.weakest_gap for _, _, report in reports)
        return summary

    @property
    def exit_status(self):
        """0 iff every link expected to hold does."""
        return 0 if self.summary["failed"] == 0 else 1

    def to_dict(self):
        return {
            "config": self.config.echo(),
            "cells": [
                {"cell": cell.to_dict(), "reports": [report.to_dict() for report in reports]}
                for cell, reports in self.results
            ],
            "summary": self.summary,
        }

    def to_json(self):
        """Canonical JSON text, keys sorted."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @property
    def table(self):
        """One row per link.

        Returns
        -------
        pandas DataFrame with the cell coordinates and trial, link, gap,
        scale, holds and expected.
        """
        rows = []
        for cell, trial, report in self.reports:
            coordinates = cell.to_dict()
            for i, (link, expected) in enumerate(zip(report.links, report.chain.expected)):
                rows.append(
                    {
                        **coordinates,
                        "trial": trial,
                        "link": i,
                        "gap": link.gap,
                        "scale": link.scale,
                        "holds": link.holds,
                        "expected": expected,
                    }
                )
        table = pd.DataFrame(rows)
        columns = [c for c in COORDINATE_COLUMNS if c in table.columns] + LINK_COLUMNS
        return table.reindex(columns=columns if rows else COORDINATE_COLUMNS[:2] + LINK_COLUMNS)

    def to_csv(self):
        """CSV text of `table`, floats with 17 significant digits."""
        return self.table.to_csv(index=False, float_format="%.17g")

    def write(self, path=None, format=None):
        """Write the report.

        Parameters
        ----------
        path: str, optional
            Defaults to the configured `output_path`.
        format: str, optional
            Defaults to the configured `format`.

        Returns
        -------
        Path
        """
        path = Path(path or self.config.output_path).expanduser()
        format = format or self.config.format
        text = self.to_json() if format == "json" else self.to_csv()
        path.write_text(text)
        logger.info(f"wrote {format} report to {path}")
        return path


class Harness:
    """
    Wraps together the individual suites in order to have a single way to
    sweep the grid.

    Attributes
    ----------
    config: HarnessConfig
        Settings built from the keyword arguments.
    """

    def __init__(self, config=None, **kwargs):
        """
        Parameters
        ----------
        config: HarnessConfig, optional
            Use this configuration instead of building one from `kwargs`.
        theorem_ids: str, list, optional
            Theorem ids such as ``["T21", "T25"]``, or ``"all"``. Empty by
            default, which makes a vacuous run.
        dims, weight_grid, alphas, betas, gammas, deltas, upsilon_grid: list, optional
            The grid. `alphas` through `deltas` default to `weight_grid`.
        function_specs: list, optional
            Catalog functions, e.g. ``["neg_power:0.5", "log1p"]``.
        map_specs: list, optional
            Positive maps, e.g. ``["pinching", "block_sum:2"]``.
        trials_per_cell: int, optional
        seed: int, optional
        eig_range: tuple, optional
        output_path: str, optional
            If given, `run` writes the report there.
        format: str, optional
            ``"json"`` or ``"csv"``.
        pairs_per_list: int, optional
        parallel: boolean, optional
            If True, evaluate cells in parallel with `joblib`. Reports do not
            depend on this.
        n_jobs: int, optional
            Number of workers when `parallel` is True.

        Notes
        -----
        Every keyword must be one of `operator_means.keys_kwargs`.
        """
        if config is None:
            config = HarnessConfig.from_kwargs(**kwargs)
        else:
            assert not kwargs, "pass either a config or keyword arguments"
        self.config = config

    @property
    def suites(self):
        """Set up the suites that own at least one selected theorem id.

        Notes
        -----
        Suites follow the order of `operator_means._SUITES`.
        """
        if not hasattr(self, "_suites"):
            suites = []
            for source in om._SUITES:
                suite = source.SUITE(self.config)
                if suite.selected_ids:
                    suites.append(suite)
            self._suites = suites
        return self._suites

    @property
    def cells(self):
        """All grid cells, suite by suite."""
        cells = []
        for suite in self.suites:
            cells.extend(suite.cells)
        return cells

    def __getitem__(self, cell):
        """Gap reports of one cell."""
        for suite in self.suites:
            if cell.theorem_id in suite.theorem_ids:
                return suite[cell]
        raise KeyError(cell)

    @property
    def meta(self):
        """Per-cell summary of the evaluated cells of every suite.

        Returns
        -------
        pandas DataFrame
        """
        metas = [suite.meta for suite in self.suites]
        if not metas:
            return pd.DataFrame(
                columns=["theorem_id", "dim", "trials", "failed", "weakest_gap", "weakest_expected_gap"]
            )
        return pd.concat(metas, axis=0, join="outer")

    def run(self):
        """Evaluate every cell and write the report if `output_path` is set.

        Returns
        -------
        RunReport
        """
        results = []
        for suite in self.suites:
            logger.info(f"{suite.suite}: {len(suite.cells)} cells for {suite.selected_ids}")
            results.extend(suite.reports())

        report = RunReport(self.config, results)
        summary = report.summary
        logger.info(
            f"{summary['total']} reports, {summary['failed']} failed, weakest gap {summary['weakest_gap']}"
        )
        if self.config.output_path:
            report.write()
        return report


@dataclass(frozen=True)
class SensitivityResult:
    """Outcome of a search for violations with a function outside the class.

    Attributes
    ----------
    seed: int
    trials_run: int
    threshold: float
    report: GapReport or None
        The first report whose weakest normalized gap is at or below
        `threshold`.
    """

    seed: int
    trials_run: int
    threshold: float
    report: object = None

    @property
    def found(self):
        return self.report is not None

    @property
    def exit_status(self):
        """0 iff a violation was found."""
        return 0 if self.found else 1

    def to_dict(self):
        return {
            "seed": self.seed,
            "trials_run": self.trials_run,
            "threshold": self.threshold,
            "found": self.found,
            "report": self.report.to_dict() if self.found else None,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def run_sensitivity(
    seed=None,
    trials=10000,
    dim=2,
    eig_range=(0.1, 10.0),
    threshold=-1e-4,
    function="exp_neg",
):
    """Feed a function outside the om_decreasing class to ``T21``.

    The hypothesis is bypassed and random pairs are drawn until some chain
    link fails with a normalized gap at or below `threshold`. Finding one
    shows that the checker separates the theorem's content from numerical
    slack.

    Parameters
    ----------
    seed: int, optional
    trials: int, optional
        Maximum number of random instances.
    dim: int, optional
    eig_range: tuple, optional
    threshold: float, optional
    function: str, optional
        Catalog function spec.

    Returns
    -------
    SensitivityResult
    """
    if seed is None:
        seed = om.DEFAULTS["seed"]
    f = ScalarFunctionSpec.parse(function)
    coordinates = {"mode": "sensitivity", "theorem_id": "T21", "function": str(f), "dim": dim}
    rng = make_rng(cell_seed(seed, coordinates))
    for trial in range(trials):
        params = {
            "f": f,
            "a": gen_posdef(dim, eig_range, rng),
            "b": gen_posdef(dim, eig_range, rng),
            "alpha": float(rng.uniform(0.05, 0.95)),
            "beta": float(rng.uniform(0.0, 1.0)),
        }
        report = TheoremInstance("T21", params, bypass_hypothesis=True).evaluate()
        if report.weakest_gap <= threshold:
            logger.info(f"sensitivity: violation after {trial + 1} trials, gap {report.weakest_gap:.3e}")
            return SensitivityResult(seed, trial + 1, threshold, report)
    logger.warning(f"sensitivity: no violation of {f} in {trials} trials")
    return SensitivityResult(seed, trials, threshold, None)


def summarize(report):
    """Text lines for the console."""
    summary = report.summary
    lines = [
        f"cells: {summary['cells']}  reports: {summary['total']}  "
        f"passed: {summary['passed']}  failed: {summary['failed']}"
    ]
    if summary["weakest_gap"] is not None:
        lines.append(f"weakest normalized gap: {summary['weakest_gap']:.3e} at {summary['argmin']}")
    if summary["weakest_gap_all"] is not None and summary["weakest_gap_all"] != summary["weakest_gap"]:
        lines.append(f"weakest gap including links outside their range: {summary['weakest_gap_all']:.3e}")
    if len(report.results):
        meta = pd.DataFrame(
            [
                {
                    "theorem_id": cell.theorem_id,
                    "failed": sum(not r.expected_hold for r in reports),
                    "weakest_gap": min(
                        (r.weakest_expected_gap for r in reports if r.weakest_expected_gap is not None),
                        default=np.nan,
                    ),
                }
                for cell, reports in report.results
            ]
        )
        lines.append(meta.groupby("theorem_id").agg({"failed": "sum", "weakest_gap": "min"}).to_string())
    return lines
