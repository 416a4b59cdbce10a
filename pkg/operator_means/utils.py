"""
Utilities shared by the suites and the harness.

Suite base class, seeding, random matrix generation, spec-string parsing and
JSON loading.
"""

import hashlib
import json
import logging
import multiprocessing

# https://stackoverflow.com/questions/3387691/how-to-perfectly-override-a-dict
from collections.abc import MutableMapping
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from joblib import Parallel, delayed

from operator_means.spectral import PosDefMatrix, SymMatrix


logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1


class SpecSyntaxError(ValueError):
    """A spec string could not be parsed.

    Attributes
    ----------
    text: str
        The full string.
    position: int
        Character offset of the offending field.
    """

    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}:\n  {text}\n  {pointer}")


def parse_number_list(text, cast=float):
    """Parse ``"0,0.25,0.5"`` into numbers, reporting the position of a bad
    entry."""
    if isinstance(text, (list, tuple)):
        return [cast(v) for v in text]
    values = []
    position = 0
    for item in text.split(","):
        stripped = item.strip()
        try:
            values.append(cast(stripped))
        except ValueError:
            raise SpecSyntaxError(f"expected a number, got {stripped!r}", text, position) from None
        position += len(item) + 1
    return values


def make_rng(seed):
    """Counter-based generator (numpy Philox) keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & MASK64))


def cell_seed(seed, coordinates):
    """Derive a per-cell seed as ``seed XOR sha256(coordinates)[:8]``.

    Parameters
    ----------
    seed: int
        Run seed, 64-bit unsigned.
    coordinates: dict
        JSON-serializable cell coordinates.
    """
    canonical = json.dumps(coordinates, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode()).digest()
    return (int(seed) ^ int.from_bytes(digest[:8], "big")) & MASK64


def random_orthogonal(dim, rng):
    """Haar-distributed orthogonal matrix from the QR factorization of a
    standard normal matrix."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def gen_posdef(dim, eig_range, rng):
    """Random positive definite matrix ``Q diag(lambda) Q.T``.

    Parameters
    ----------
    dim: int
    eig_range: tuple
        ``(lo, hi)`` with ``0 < lo < hi``; eigenvalues are log-uniform in
        this range so the condition number is at most ``hi / lo``.
    rng: numpy Generator

    Returns
    -------
    PosDefMatrix
    """
    lo, hi = eig_range
    assert 0 < lo < hi, f"eig_range must satisfy 0 < lo < hi, got {eig_range}"
    lam = np.exp(rng.uniform(np.log(lo), np.log(hi), size=dim))
    q = random_orthogonal(dim, rng)
    return PosDefMatrix((q * lam) @ q.T)


def gen_psd(dim, rng, scale=1.0, rank=None):
    """Random positive semidefinite matrix ``G G.T`` with ``G`` of the given
    rank (random rank by default)."""
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    g = rng.standard_normal((dim, rank))
    return SymMatrix(scale * (g @ g.T) / rank)


def gen_symmetric(dim, rng):
    """Random symmetric matrix, not necessarily positive."""
    x = rng.standard_normal((dim, dim))
    return SymMatrix((x + x.T) / 2)


def gen_invertible(dim, rng, svd_range=(0.5, 2.0)):
    """Random invertible matrix with singular values in `svd_range`."""
    s = np.exp(rng.uniform(np.log(svd_range[0]), np.log(svd_range[1]), size=dim))
    return (random_orthogonal(dim, rng) * s) @ random_orthogonal(dim, rng)


def gen_isometry(dim, k, rng):
    """Random ``dim x k`` matrix with orthonormal columns."""
    q, r = np.linalg.qr(rng.standard_normal((dim, k)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def load_json(path):
    """Return the parsed JSON object stored at `path`."""
    with open(Path(path).expanduser()) as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"JSON file is in unknown format, expected an object: {path}")
    return data


def load_config(path):
    """Return the harness keyword arguments stored in a JSON file."""
    return load_json(path)


def load_matrix(path):
    """Return the array of a matrix literal file ``{"dim": n, "rows": [...]}``.

    Rectangular literals (for compressions) may omit ``dim``.
    """
    literal = load_json(path)
    if "rows" not in literal:
        raise ValueError(f"matrix literal in {path} has no 'rows'")
    return np.asarray(literal["rows"], dtype=float)


@dataclass(frozen=True)
class Cell:
    """Coordinates of one grid cell.

    Unused coordinates are None. `extra` is a tuple of ``(name, value)``
    pairs for suite-specific axes.
    """

    theorem_id: str
    dim: int
    alpha: float = None
    beta: float = None
    gamma: float = None
    delta: float = None
    upsilon: float = None
    function: str = None
    map: str = None
    extra: tuple = ()

    def to_dict(self):
        """Coordinates with the unused ones dropped."""
        out = {k: v for k, v in asdict(self).items() if v is not None and k != "extra"}
        out.update(dict(self.extra))
        return out

    @property
    def key(self):
        """Canonical string of the coordinates."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# dict-like structure for suites to inherit
class Suite(MutableMapping):
    """dict-like suite class.

    This is the base class for all of the theorem-family suites so they can
    enumerate their grid cells and store the evaluated reports in a dict-like
    manner, keyed by `Cell`.

    Subclasses set `suite` and `theorem_ids` and implement `cells_for` and
    `instances_for`.

    Attributes
    ----------
    config: HarnessConfig
        Grid, seed and generation settings.
    """

    suite = None
    theorem_ids = ()

    def __init__(self, config):
        """Initialize a suite from a harness configuration."""
        self.config = config
        self.store = dict()

    def __getitem__(self, cell):
        """Evaluate (once) and return the reports for a cell."""
        if cell not in self.store:
            self.store[cell] = self.reports_by_cell(cell)
        return self.store[cell]

    def __setitem__(self, key, value):
        """Regular dict-like way to store key/value pair."""
        self.store[key] = value

    def __delitem__(self, key):
        """Regular dict-like way to delete key."""
        del self.store[key]

    def __iter__(self):
        """Regular dict-like way to iter over object."""
        return iter(self.store)

    def __len__(self):
        """Regular dict-like way query length of object."""
        return len(self.store)

    @property
    def selected_ids(self):
        """Configured theorem ids that belong to this suite."""
        return [tid for tid in self.config.theorem_ids if tid in self.theorem_ids]

    @property
    def cells(self):
        """All grid cells of the selected theorem ids, in canonical order."""
        if not hasattr(self, "_cells"):
            cells = []
            for theorem_id in self.selected_ids:
                cells.extend(self.cells_for(theorem_id))
            self._cells = cells
        return self._cells

    def cells_for(self, theorem_id):
        """Grid cells for one theorem id."""
        raise NotImplementedError

    def instances_for(self, cell, rng):
        """TheoremInstances of one cell, all trials."""
        raise NotImplementedError

    def reports_by_cell(self, cell):
        """Evaluate every instance of a cell.

        Random matrices come from a generator seeded with `cell_seed`, so the
        result depends only on the run seed and the cell coordinates.
        """
        rng = make_rng(cell_seed(self.config.seed, cell.to_dict()))
        return [instance.evaluate() for instance in self.instances_for(cell, rng)]

    def reports(self, cells=None):
        """Evaluate some or all cells.

        Once a cell is evaluated, its reports are remembered.

        Parameters
        ----------
        cells: list of Cell, optional
            Defaults to all cells of the suite.

        Returns
        -------
        list of (Cell, list of GapReport), in the order of `cells`.

        Notes
        -----
        This is either done in parallel with `joblib` or in serial. The
        output does not depend on the number of workers.
        """
        if cells is None:
            cells = self.cells
        todo = [cell for cell in cells if cell not in self.store]

        if self.config.parallel and len(todo) > 1:
            n_jobs = self.config.n_jobs
            if n_jobs is None or n_jobs < 1:
                n_jobs = multiprocessing.cpu_count()
            results = Parallel(n_jobs=n_jobs)(delayed(self.reports_by_cell)(cell) for cell in todo)
            for cell, result in zip(todo, results):
                self.store[cell] = result
        else:
            for cell in todo:
                self.store[cell] = self.reports_by_cell(cell)

        return [(cell, self.store[cell]) for cell in cells]

    @property
    def meta(self):
        """Per-cell summary of the evaluated cells.

        Returns
        -------
        pandas DataFrame indexed by cell key with columns theorem_id, dim,
        trials, failed, weakest_gap and weakest_expected_gap.
        """
        rows = []
        for cell, reports in self.store.items():
            rows.append(
                {
                    "cell": cell.key,
                    "theorem_id": cell.theorem_id,
                    "dim": cell.dim,
                    "trials": len(reports),
                    "failed": sum(not r.expected_hold for r in reports),
                    "weakest_gap": min((r.weakest_gap for r in reports), default=np.nan),
                    "weakest_expected_gap": min(
                        (r.weakest_expected_gap for r in reports if r.weakest_expected_gap is not None),
                        default=np.nan,
                    ),
                }
            )
        columns = ["cell", "theorem_id", "dim", "trials", "failed", "weakest_gap", "weakest_expected_gap"]
        return pd.DataFrame(rows, columns=columns).set_index("cell")
