"""
Verify refinement inequalities for Kubo-Ando operator means on positive
definite matrices.
"""

import logging

from pathlib import Path


from .spectral import (  # isort:skip  # noqa: E402, F401
    EigenSystem,
    PosDefMatrix,
    SymMatrix,
    apply_scalar,
    congruence,
    eigh,
    frac_power,
)
from .loewner import (  # isort:skip  # noqa: E402, F401
    ChainReport,
    OrderVerdict,
    check_chain,
    loewner_leq,
    operator_norm,
)
from .means import (  # isort:skip  # noqa: E402, F401
    PathSpec,
    UnrestrictedWeight,
    Weight,
    arithmetic_mean,
    geometric_mean,
    harmonic_mean,
    power_mean,
)
from .functions import ScalarFunctionSpec  # isort:skip  # noqa: E402, F401
from .maps import PositiveLinearMapSpec, apply_map  # isort:skip  # noqa: E402, F401
from .utils import Suite  # isort:skip  # noqa: E402, F401
from .suites import amgm, ando, axioms, logconvex, triangle  # isort:skip  # noqa: E402
from .theorems import GapReport, TheoremInstance  # isort:skip  # noqa: E402, F401
from .harness import Harness, HarnessConfig, RunReport  # isort:skip  # noqa: E402, F401

try:
    from ._version import __version__
except ImportError:
    __version__ = "unknown"


base_path = Path.home() / ".operator_means"
base_path.mkdir(exist_ok=True)

logs_path = base_path / "logs"
logs_path.mkdir(exist_ok=True)

fixtures_path = base_path / "fixtures"
fixtures_path.mkdir(exist_ok=True)

logger = logging.getLogger(__name__)
formatter = logging.Formatter("%(asctime)s %(message)s", "%a %b %d %H:%M:%S %Z %Y")

root_log_path = logs_path / f"{__name__}.log"
file_handler = logging.FileHandler(root_log_path)
file_handler.setLevel(logging.WARNING)
file_handler.setFormatter(formatter)

logger.addHandler(file_handler)
# numpy/scipy warnings are captured and only output to file_handler
logging.captureWarnings(True)

# numerical tolerances
PD_FLOOR = 1e-10
RTOL_RECON = 1e-10
RTOL_CHAIN = 1e-9
ATOL_EXACT = 1e-12
TOL_ORDER = 1e-8
UPSILON_EPS = 1e-6
SYMMETRY_RTOL = 1e-8
MAX_DIM = 64
# matrices of chain terms are written into reports up to this dimension
TERMS_MAX_DIM = 8

# all available suites of theorem families
_SUITES = [axioms, logconvex, amgm, triangle, ando]

# the standard grid
DEFAULTS = {
    "theorem_ids": [],
    "dims": [1, 2, 3, 5, 8],
    "weight_grid": [0.0, 0.25, 0.5, 0.75, 1.0],
    "upsilon_grid": [-1.0, 0.0, 1.0],
    "function_specs": [
        "neg_power:0.25",
        "neg_power:0.5",
        "neg_power:1",
        "shifted_inverse:1:1",
        "power:0.5",
        "power:1",
        "log1p",
    ],
    "map_specs": ["pinching", "block_sum:2", "compression:unital", "weighted_trace:identity"],
    "trials_per_cell": 100,
    "seed": 42,
    "eig_range": (0.1, 10.0),
    "output_path": None,
    "format": "json",
    "pairs_per_list": 3,
    "parallel": False,
    "n_jobs": -1,
}

# Available keys for Harness
keys_kwargs = [
    "theorem_ids",
    "dims",
    "weight_grid",
    "alphas",
    "betas",
    "gammas",
    "deltas",
    "upsilon_grid",
    "function_specs",
    "map_specs",
    "trials_per_cell",
    "seed",
    "eig_range",
    "output_path",
    "format",
    "pairs_per_list",
    "parallel",
    "n_jobs",
]

# alpha values outside [0, 1] used by the triangle suite
TRIANGLE_ALPHAS = [-2.0, -0.5, 0.0, 0.3, 0.5, 1.0, 2.0]
