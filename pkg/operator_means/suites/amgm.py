"""
Refinements of the weighted harmonic-geometric-arithmetic mean inequality.
"""

import logging

from itertools import product

from operator_means import Suite
from operator_means.loewner import check_chain
from operator_means.means import (
    arithmetic_mean,
    as_path,
    geometric_mean,
    harmonic_mean,
    path_mean,
    posdef_pair,
    refinement_terms,
    weight,
)
from operator_means.theorems import TheoremInstance
from operator_means.utils import Cell, gen_posdef


logger = logging.getLogger(__name__)

# this can be queried with
# amgm.AmGmSuite.suite
suite = "amgm"


def t25_amgh_chain(a, b, alpha, beta):
    """Five-term refinement of ``A !_alpha B <= A #_alpha B <= A nabla_alpha B``.

    With ``L = (A #_alpha B) #_beta A`` and ``R = (A #_alpha B) #_beta B``:
    ``A !_alpha B <= L !_alpha R <= A #_alpha B <= L nabla_alpha R <= A nabla_alpha B``.

    Parameters
    ----------
    a, b: PosDefMatrix
    alpha, beta: Weight or float in [0, 1]

    Returns
    -------
    ChainReport
        All four links are expected to hold.

    Examples
    --------
    >>> from operator_means import PosDefMatrix
    >>> chain = t25_amgh_chain(PosDefMatrix(4), PosDefMatrix(1), 0.5, 0.5)
    >>> [round(float(t.entries[0, 0]), 4) for t in chain.terms]
    [1.6, 1.8856, 2.0, 2.1213, 2.5]
    """
    alpha, beta = weight(alpha), weight(beta)
    a, b = posdef_pair(a, b)
    left, right = refinement_terms(geometric_mean, a, b, alpha, beta)
    terms = [
        harmonic_mean(a, b, alpha),
        harmonic_mean(left, right, alpha),
        geometric_mean(a, b, alpha),
        arithmetic_mean(left, right, alpha),
        arithmetic_mean(a, b, alpha),
    ]
    return check_chain(terms)


def sma_chain(a, b, alpha, beta, path):
    """Refinement of ``A sigma_alpha B <= A nabla_alpha B`` for a power path sigma.

    ``A sigma_alpha B <= L nabla_alpha R <= A nabla_alpha B`` with
    ``L = (A sigma_alpha B) sigma_beta A`` and ``R = (A sigma_alpha B) sigma_beta B``.
    """
    alpha, beta = weight(alpha), weight(beta)
    path = as_path(path)
    a, b = posdef_pair(a, b)
    mean = path_mean(path)
    left, right = refinement_terms(mean, a, b, alpha, beta)
    terms = [mean(a, b, alpha), arithmetic_mean(left, right, alpha), arithmetic_mean(a, b, alpha)]
    return check_chain(terms)


# theorem id: parameter names
SIGNATURES = {
    "T25": ("a", "b", "alpha", "beta"),
    "SMA": ("a", "b", "alpha", "beta", "path"),
}

PREDICATES = {
    "T25": t25_amgh_chain,
    "SMA": sma_chain,
}


class AmGmSuite(Suite):
    """
    Mean-inequality refinements on random positive definite pairs.

    Attributes
    ----------
    config: HarnessConfig
    suite: string
        Suite name: amgm
    """

    suite = suite
    theorem_ids = tuple(SIGNATURES)

    def cells_for(self, theorem_id):
        config = self.config
        if theorem_id == "T25":
            return [
                Cell(theorem_id, dim, alpha=alpha, beta=beta)
                for dim, alpha, beta in product(config.dims, config.alphas, config.betas)
            ]
        return [
            Cell(theorem_id, dim, alpha=alpha, beta=beta, upsilon=upsilon)
            for dim, alpha, beta, upsilon in product(
                config.dims, config.alphas, config.betas, config.upsilon_grid
            )
        ]

    def instances_for(self, cell, rng):
        instances = []
        for _ in range(self.config.trials_per_cell):
            params = {
                "a": gen_posdef(cell.dim, self.config.eig_range, rng),
                "b": gen_posdef(cell.dim, self.config.eig_range, rng),
                "alpha": cell.alpha,
                "beta": cell.beta,
            }
            if cell.theorem_id == "SMA":
                params["path"] = as_path(cell.upsilon)
            instances.append(TheoremInstance(cell.theorem_id, params))
        return instances


# used by Harness.suites
SUITE = AmGmSuite
