"""
Mean axioms and exact identities of the interpolational paths.

Deviation checks report ``||lhs - rhs||_2 <= tolerance * scale`` as a
one-link chain so that they flow through the same reports as the inequality
chains.
"""

import logging

from itertools import product

import numpy as np

import operator_means as om

from operator_means import Suite
from operator_means.loewner import ChainReport, check_chain, within
from operator_means.means import (
    as_path,
    congruence_deviation,
    identity_normalization_deviation,
    interpolation_deviation,
    mean_scale,
    midpoint_deviation,
    nabla_identity_deviation,
    posdef_pair,
    power_mean,
    sharp_identity_deviation,
    weight,
)
from operator_means.spectral import PosDefMatrix, congruence
from operator_means.theorems import TheoremInstance
from operator_means.utils import Cell, gen_invertible, gen_posdef, gen_psd


logger = logging.getLogger(__name__)

# this can be queried with
# axioms.AxiomSuite.suite
suite = "axioms"

AXIOMS = (
    "endpoint",
    "midpoint",
    "composition",
    "order",
    "monotonicity",
    "congruence",
    "normalization",
)

IDENTITIES = ("nabla", "sharp")


def _tolerance(path):
    # the arithmetic path only adds and scales
    return om.ATOL_EXACT if as_path(path).upsilon == 1.0 else om.RTOL_CHAIN


def endpoint_check(path, a, b):
    """``A s_0 B = A`` and ``A s_1 B = B``, as two deviation links."""
    a, b = posdef_pair(a, b)
    bound = _tolerance(path) * mean_scale(a, b)
    links = tuple(
        within(np.linalg.norm(power_mean(a, b, path, alpha).entries - end.entries, ord=2), bound)
        for alpha, end in ((0.0, a), (1.0, b))
    )
    return ChainReport(links=links)


def midpoint_check(path, a, b, alpha, beta):
    """``(A s_alpha B) s_{1/2} (A s_beta B) = A s_{(alpha + beta)/2} B``."""
    bound = om.RTOL_CHAIN * mean_scale(a, b)
    return ChainReport(links=(within(midpoint_deviation(path, a, b, alpha, beta), bound),))


def composition_check(path, a, b, alpha, beta, gamma):
    """``(A s_alpha B) s_gamma (A s_beta B) = A s_{(1 - gamma) alpha + gamma beta} B``."""
    bound = om.RTOL_CHAIN * mean_scale(a, b)
    deviation = interpolation_deviation(path, a, b, alpha, beta, gamma)
    return ChainReport(links=(within(deviation, bound),))


def normalization_check(path, dim, alpha):
    """``I s_alpha I = I``."""
    deviation = identity_normalization_deviation(dim, path, alpha)
    return ChainReport(links=(within(deviation, om.RTOL_CHAIN),))


def congruence_check(path, a, b, alpha, c):
    """``C^T (A s_alpha B) C = (C^T A C) s_alpha (C^T B C)`` for invertible C."""
    a, b = posdef_pair(a, b)
    bound = om.RTOL_CHAIN * mean_scale(congruence(c, a), congruence(c, b))
    return ChainReport(links=(within(congruence_deviation(path, a, b, alpha, c), bound),))


def monotonicity_check(path, a, b, alpha, p, q):
    """``A s_alpha B <= (A + P) s_alpha (B + Q)`` for positive semidefinite P, Q."""
    a, b = posdef_pair(a, b)
    a2 = PosDefMatrix(a.entries + p.entries)
    b2 = PosDefMatrix(b.entries + q.entries)
    return check_chain([power_mean(a, b, path, alpha), power_mean(a2, b2, path, alpha)])


def mean_order_chain(a, b, alpha, paths=(-1.0, 0.0, 1.0)):
    """Power means of one pair along several paths, ordered by upsilon.

    ``m_{v,alpha}`` increases with v, so the default paths give
    ``A !_alpha B <= A #_alpha B <= A nabla_alpha B``.

    Parameters
    ----------
    a, b: PosDefMatrix
    alpha: Weight or float in [0, 1]
    paths: sequence of PathSpec or float, optional
        At least two distinct paths.

    Returns
    -------
    ChainReport
    """
    upsilons = sorted({as_path(path).upsilon for path in paths})
    return check_chain([power_mean(a, b, upsilon, alpha) for upsilon in upsilons])


def axiom_check(axiom, path, a, b, alpha, beta, gamma, c, p, q):
    """Dispatch to the check of one mean axiom.

    Every trial carries the operands of all checks; each check uses the
    ones it needs.
    """
    assert axiom in AXIOMS, f"axiom must be one of {AXIOMS}"
    path = as_path(path)
    alpha, beta, gamma = weight(alpha), weight(beta), weight(gamma)
    if axiom == "endpoint":
        return endpoint_check(path, a, b)
    if axiom == "midpoint":
        return midpoint_check(path, a, b, alpha, beta)
    if axiom == "composition":
        return composition_check(path, a, b, alpha, beta, gamma)
    if axiom == "order":
        return mean_order_chain(a, b, alpha, paths=(-1.0, 0.0, 1.0, path.upsilon))
    if axiom == "monotonicity":
        return monotonicity_check(path, a, b, alpha, p, q)
    if axiom == "congruence":
        return congruence_check(path, a, b, alpha, c)
    return normalization_check(path, a.dim, alpha)


def identity_check(identity, a, b, alpha, beta):
    """Deviation of the nabla or sharp refinement identity.

    The nabla identity is a finite linear combination and gets
    ``ATOL_EXACT``; the sharp identity gets ``RTOL_CHAIN``.
    """
    assert identity in IDENTITIES, f"identity must be one of {IDENTITIES}"
    a, b = posdef_pair(a, b)
    if identity == "nabla":
        deviation = nabla_identity_deviation(a, b, alpha, beta)
        bound = om.ATOL_EXACT * mean_scale(a, b)
    else:
        deviation = sharp_identity_deviation(a, b, alpha, beta)
        bound = om.RTOL_CHAIN * mean_scale(a, b)
    return ChainReport(links=(within(deviation, bound),))


# theorem id: parameter names
SIGNATURES = {
    "AXM": ("axiom", "path", "a", "b", "alpha", "beta", "gamma", "c", "p", "q"),
    "IDS": ("identity", "a", "b", "alpha", "beta"),
}

PREDICATES = {
    "AXM": axiom_check,
    "IDS": identity_check,
}


class AxiomSuite(Suite):
    """
    Axioms of the power-mean paths and the refinement identities.

    For ``AXM`` the weights of each trial are drawn from the configured
    grids, so a cell covers one (dim, path, axiom) triple.

    Attributes
    ----------
    config: HarnessConfig
    suite: string
        Suite name: axioms
    """

    suite = suite
    theorem_ids = tuple(SIGNATURES)

    def cells_for(self, theorem_id):
        config = self.config
        if theorem_id == "AXM":
            return [
                Cell(theorem_id, dim, upsilon=upsilon, extra=(("axiom", axiom),))
                for dim, upsilon, axiom in product(config.dims, config.upsilon_grid, AXIOMS)
            ]
        return [
            Cell(theorem_id, dim, alpha=alpha, beta=beta, extra=(("identity", identity),))
            for dim, identity, alpha, beta in product(config.dims, IDENTITIES, config.alphas, config.betas)
        ]

    def instances_for(self, cell, rng):
        config = self.config
        extra = dict(cell.extra)

        def posdef():
            return gen_posdef(cell.dim, config.eig_range, rng)

        instances = []
        for _ in range(config.trials_per_cell):
            if cell.theorem_id == "IDS":
                params = {
                    "identity": extra["identity"],
                    "a": posdef(),
                    "b": posdef(),
                    "alpha": cell.alpha,
                    "beta": cell.beta,
                }
            else:
                params = {
                    "axiom": extra["axiom"],
                    "path": as_path(cell.upsilon),
                    "a": posdef(),
                    "b": posdef(),
                    "alpha": float(rng.choice(config.alphas)),
                    "beta": float(rng.choice(config.betas)),
                    "gamma": float(rng.choice(config.gammas)),
                    "c": gen_invertible(cell.dim, rng),
                    "p": gen_psd(cell.dim, rng),
                    "q": gen_psd(cell.dim, rng),
                }
            instances.append(TheoremInstance(cell.theorem_id, params))
        return instances


# used by Harness.suites
SUITE = AxiomSuite
