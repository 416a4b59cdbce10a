"""
Closed-form scalar and 2x2 values that the numerical core must reproduce.

`derive_fixtures` recomputes every value with the package itself; the stored
copy in ``operator_means/fixtures/derived.json`` is what it is compared to.
"""

import json
import logging

from pathlib import Path

import numpy as np

from importlib_resources import files

import operator_means as om

from operator_means.functions import ScalarFunctionSpec, evaluate, lift
from operator_means.loewner import loewner_leq, operator_norm
from operator_means.maps import PositiveLinearMapSpec, apply_map
from operator_means.means import (
    arithmetic_mean,
    geometric_mean,
    harmonic_mean,
    interpolation_deviation,
    nabla_identity_deviation,
    power_mean,
    sharp_identity_deviation,
)
from operator_means.spectral import PosDefMatrix, SymMatrix, congruence, eigh, frac_power
from operator_means.suites.amgm import t25_amgh_chain
from operator_means.suites.ando import e18_sums, t31_ando
from operator_means.suites.logconvex import c22_chain, c24_chain, r25_harmonic_chain, t21_chain
from operator_means.suites.triangle import c27_triangle, r27_reverse_triangle


logger = logging.getLogger(__name__)

FIXTURES_FILE = "derived.json"

# fixtures agree with a fresh derivation to this absolute tolerance
ATOL_FIXTURES = 1e-4

M2 = [[2.0, 1.0], [1.0, 2.0]]


def _flat(x):
    if isinstance(x, SymMatrix):
        return [float(v) for v in x.entries.ravel()]
    return [float(v) for v in np.ravel(x)]


def _chain_values(chain):
    # scalar chains: the single entry of every 1x1 term
    return [float(t.entries[0, 0]) for t in chain.terms]


def derive_fixtures():
    """Recompute every fixture value.

    Returns
    -------
    dict
        ``{name: [values...]}``; matrices are flattened row by row.
    """
    m2 = PosDefMatrix(M2)
    four, one = PosDefMatrix(4.0), PosDefMatrix(1.0)
    system = eigh(m2)

    fixtures = {
        "eigh_2x2_eigenvalues": _flat(system.eigenvalues),
        "eigh_2x2_basis": _flat(system.basis),
        "sqrt_2x2": _flat(frac_power(m2, 0.5)),
        "inverse_2x2": _flat(frac_power(m2, -1.0)),
        "lift_neg_power_2x2": _flat(lift("neg_power:0.5", m2)),
        "congruence_rotation": _flat(congruence([[0.0, -1.0], [1.0, 0.0]], SymMatrix.diag(1.0, 3.0))),
        "operator_norm_2x2": [operator_norm(m2)],
        "loewner_incomparable_gap": [loewner_leq(SymMatrix.diag(0.0, 2.0), SymMatrix.identity(2)).gap],
        "arithmetic_scalar": [
            float(arithmetic_mean(four, one, 0.5).entries[0, 0]),
            float(arithmetic_mean(four, one, 0.25).entries[0, 0]),
        ],
        "geometric_scalar": [float(geometric_mean(four, one, 0.5).entries[0, 0])],
        "geometric_2x2_identity": _flat(geometric_mean(m2, PosDefMatrix.identity(2), 0.5)),
        "harmonic_scalar": [float(harmonic_mean(four, one, 0.5).entries[0, 0])],
        "harmonic_diagonal": _flat(
            harmonic_mean(PosDefMatrix.diag(4.0, 2.0), PosDefMatrix.diag(1.0, 2.0), 0.5)
        ),
        "power_mean_scalar": [
            float(power_mean(four, one, 0.5, 0.5).entries[0, 0]),
            # inside the geometric band around upsilon = 0
            float(power_mean(four, one, 1e-7, 0.5).entries[0, 0]),
        ],
        "identity_deviations": [
            nabla_identity_deviation(four, one, 0.5, 0.5),
            sharp_identity_deviation(four, one, 0.5, 0.5),
        ],
        "interpolation_deviation_scalar": [interpolation_deviation(0.0, four, one, 0.2, 0.8, 0.5)],
        "catalog_scalar": [
            evaluate(ScalarFunctionSpec.parse("neg_power:0.5"), 4.0),
            evaluate(ScalarFunctionSpec.parse("shifted_inverse:0:1"), 2.5),
        ],
        "pinching_singletons": _flat(apply_map(PositiveLinearMapSpec.pinching([1, 1]), M2)),
        "block_sum_diag": _flat(apply_map(PositiveLinearMapSpec.block_sum(2, 1), SymMatrix.diag(4.0, 1.0))),
        "t21_shifted_inverse": _chain_values(t21_chain("shifted_inverse:0:1", four, one, 0.5, 0.5)),
        "c22_shifted_inverse": _chain_values(c22_chain("shifted_inverse:0:1", PosDefMatrix(2.0), one)),
        "c22_equal": _chain_values(c22_chain("neg_power:1", one, one)),
        "c24_power_half": _chain_values(c24_chain("power:0.5", four, one, 0.5, 0.5)),
        "r25_harmonic": _chain_values(r25_harmonic_chain("neg_power:1", four, one, 0.5, 0.5, 0.0)),
        "t25_amgh": _chain_values(t25_amgh_chain(four, one, 0.5, 0.5)),
        "c27_equal": _chain_values(c27_triangle(SymMatrix(1.0), SymMatrix(1.0), 0.5)),
        "c27_orthogonal": _chain_values(c27_triangle(SymMatrix.diag(2.0, 0.0), SymMatrix.diag(0.0, 2.0), 0.0)),
        "c27_mixed_sign": _chain_values(c27_triangle(SymMatrix(3.0), SymMatrix(-1.0), 0.0)),
        "r27_reverse": _chain_values(r27_reverse_triangle(SymMatrix(3.0), SymMatrix(1.0), 0.5)),
        "t31_block_sum": _chain_values(
            t31_ando(
                PositiveLinearMapSpec.block_sum(2, 1),
                PosDefMatrix.diag(4.0, 1.0),
                PosDefMatrix.diag(1.0, 4.0),
                0.5,
                0.5,
            )
        ),
        "e18_sums": _chain_values(e18_sums([4.0, 1.0], [1.0, 4.0], 0.5, 0.5)),
    }
    return {name: [float(v) for v in values] for name, values in fixtures.items()}


def load_fixtures():
    """Read the stored fixtures.

    The packaged file is used when present, otherwise the copy written by
    `write_fixtures` under ``~/.operator_means/fixtures``.
    """
    path = files("operator_means.fixtures").joinpath(FIXTURES_FILE)
    if not path.is_file():
        path = om.fixtures_path / FIXTURES_FILE
    return json.loads(path.read_text())


def compare(derived, stored, atol=ATOL_FIXTURES):
    """Names whose values are missing or differ by more than `atol`.

    Returns
    -------
    list of str
        Empty when everything agrees.
    """
    mismatches = []
    for name in sorted(set(derived) | set(stored)):
        if name not in derived or name not in stored:
            mismatches.append(name)
            continue
        d, s = np.asarray(derived[name]), np.asarray(stored[name])
        if d.shape != s.shape or not np.allclose(d, s, rtol=0.0, atol=atol):
            mismatches.append(name)
    if mismatches:
        logger.warning(f"oracle fixtures differ: {mismatches}")
    return mismatches


def write_fixtures(fixtures, path=None):
    """Write `fixtures` as sorted JSON; defaults to the user fixtures directory."""
    path = Path(path).expanduser() if path else om.fixtures_path / FIXTURES_FILE
    path.write_text(json.dumps(fixtures, sort_keys=True, indent=2) + "\n")
    logger.info(f"wrote oracle fixtures to {path}")
    return path
