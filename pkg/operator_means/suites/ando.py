"""
Ando-type inequalities under positive linear maps.

Every chain here starts from ``Phi(A sigma B) <= Phi(A) sigma Phi(B)`` and
inserts a refinement term in between. Map images of positive definite
operands must stay positive definite.
"""

import logging

from itertools import product

import numpy as np

import operator_means as om

from operator_means import Suite
from operator_means.loewner import ChainReport, check_chain, within
from operator_means.maps import (
    PositiveLinearMapSpec,
    apply_map_posdef,
    block_diag,
    fitting_maps,
)
from operator_means.means import (
    as_path,
    clip_weight,
    geometric_mean,
    mean_scale,
    path_mean,
    posdef_pair,
    refinement_terms,
    weight,
)
from operator_means.spectral import DimensionError, PosDefMatrix
from operator_means.theorems import TheoremInstance
from operator_means.utils import Cell, gen_posdef, make_rng


logger = logging.getLogger(__name__)

# this can be queried with
# ando.AndoSuite.suite
suite = "ando"


def _images(phi, *matrices):
    return [apply_map_posdef(phi, m) for m in matrices]


def t31_ando(phi, a, b, alpha, beta):
    """Refined Ando inequality for the weighted geometric mean.

    ``Phi(A #_alpha B) <= Phi(L) #_alpha Phi(R) <= Phi(A) #_alpha Phi(B)`` with
    ``L = (A #_alpha B) #_beta A`` and ``R = (A #_alpha B) #_beta B``.

    Parameters
    ----------
    phi: PositiveLinearMapSpec
    a, b: PosDefMatrix
    alpha, beta: Weight or float in [0, 1]

    Returns
    -------
    ChainReport

    Raises
    ------
    NotPositiveDefiniteError
        Naming the map, if an image is not positive definite.
    """
    alpha, beta = weight(alpha), weight(beta)
    a, b = posdef_pair(a, b)
    left, right = refinement_terms(geometric_mean, a, b, alpha, beta)
    center, fl, fr, fa, fb = _images(phi, geometric_mean(a, b, alpha), left, right, a, b)
    terms = [center, geometric_mean(fl, fr, alpha), geometric_mean(fa, fb, alpha)]
    return check_chain(terms)


def _pair_lists(a_list, b_list):
    if not a_list or not b_list:
        raise ValueError("sums need non-empty lists of operands")
    if len(a_list) != len(b_list):
        raise DimensionError(f"operand lists differ in length: {len(a_list)} vs {len(b_list)}")
    pairs = [posdef_pair(a, b) for a, b in zip(a_list, b_list)]
    if len({a.dim for a, _ in pairs}) != 1:
        raise DimensionError("all operands of a sum must share one dimension")
    return [a for a, _ in pairs], [b for _, b in pairs]


def _sum(matrices):
    return PosDefMatrix(sum(m.entries for m in matrices))


def e18_sums(a_list, b_list, alpha, beta):
    """Refined Ando inequality for sums of pairs.

    ``sum A_j #_alpha B_j <= (sum L_j) #_alpha (sum R_j) <= (sum A_j) #_alpha (sum B_j)``
    with ``L_j = (A_j #_alpha B_j) #_beta A_j`` and
    ``R_j = (A_j #_alpha B_j) #_beta B_j``.

    Raises
    ------
    ValueError
        For empty lists.
    DimensionError
        For lists of different length or mixed dimensions.
    """
    alpha, beta = weight(alpha), weight(beta)
    a_list, b_list = _pair_lists(a_list, b_list)
    refined = [refinement_terms(geometric_mean, a, b, alpha, beta) for a, b in zip(a_list, b_list)]
    terms = [
        _sum(geometric_mean(a, b, alpha) for a, b in zip(a_list, b_list)),
        geometric_mean(_sum(left for left, _ in refined), _sum(right for _, right in refined), alpha),
        geometric_mean(_sum(a_list), _sum(b_list), alpha),
    ]
    return check_chain(terms)


def e18_block_route(a_list, b_list, alpha, beta):
    """`e18_sums` computed as `t31_ando` of the block sum map on
    ``diag(A_1, ..., A_m)`` and ``diag(B_1, ..., B_m)``."""
    a_list, b_list = _pair_lists(a_list, b_list)
    phi = PositiveLinearMapSpec.block_sum(len(a_list), a_list[0].dim)
    return t31_ando(phi, block_diag(a_list), block_diag(b_list), alpha, beta)


def e18_checked(a_list, b_list, alpha, beta):
    """`e18_sums` with a third link comparing it to `e18_block_route`.

    The extra link holds iff the two routes agree termwise within
    ``RTOL_CHAIN`` relative to the largest term.
    """
    direct = e18_sums(a_list, b_list, alpha, beta)
    routed = e18_block_route(a_list, b_list, alpha, beta)
    deviation = max(
        float(np.linalg.norm(x.entries - y.entries, ord=2)) for x, y in zip(direct.terms, routed.terms)
    )
    # the block route diagonalizes diag(A_1, ..., A_m) as one matrix, so the
    # two routes agree to eigensolver round-off, not to ATOL_EXACT
    agreement = within(deviation, om.RTOL_CHAIN * mean_scale(*direct.terms))
    return ChainReport(links=direct.links + (agreement,), terms=direct.terms)


def r33_general(phi, a, b, path, alpha, beta, gamma, delta):
    """Ando-type chain along an interpolational path.

    With ``p = alpha (1 - beta) + beta ((1 - alpha) gamma + alpha delta)``:
    ``Phi(A s_p B) <= Phi((A s_alpha B) s_beta (A s_gamma B)) s_alpha
    Phi((A s_alpha B) s_beta (A s_delta B)) <= Phi(A) s_p Phi(B)``.

    Parameters
    ----------
    phi: PositiveLinearMapSpec
    a, b: PosDefMatrix
    path: PathSpec or float
        The power path s.
    alpha, beta, gamma, delta: Weight or float in [0, 1]

    Returns
    -------
    ChainReport
    """
    path = as_path(path)
    alpha, beta, gamma, delta = weight(alpha), weight(beta), weight(gamma), weight(delta)
    a, b = posdef_pair(a, b)
    mean = path_mean(path)
    p = clip_weight(alpha * (1 - beta) + beta * ((1 - alpha) * gamma + alpha * delta))

    center = mean(a, b, alpha)
    left = mean(center, mean(a, b, gamma), beta)
    right = mean(center, mean(a, b, delta), beta)
    fp, fl, fr, fa, fb = _images(phi, mean(a, b, p), left, right, a, b)
    terms = [fp, mean(fl, fr, alpha), mean(fa, fb, p)]
    return check_chain(terms)


def t32_uhlmann(phi, a, b, path, alpha, beta):
    """`r33_general` at ``gamma = 0``, ``delta = 1``.

    The outer weight is then ``p = alpha``:
    ``Phi(A s_alpha B) <= Phi((A s_alpha B) s_beta A) s_alpha Phi((A s_alpha B) s_beta B)
    <= Phi(A) s_alpha Phi(B)``.
    """
    return r33_general(phi, a, b, path, alpha, beta, 0.0, 1.0)


def ando_chain(phi, a, b, path, alpha):
    """Ando's inequality ``Phi(A s_alpha B) <= Phi(A) s_alpha Phi(B)``."""
    path = as_path(path)
    alpha = weight(alpha)
    a, b = posdef_pair(a, b)
    mean = path_mean(path)
    fm, fa, fb = _images(phi, mean(a, b, alpha), a, b)
    return check_chain([fm, mean(fa, fb, alpha)])


# theorem id: parameter names
SIGNATURES = {
    "T31": ("phi", "a", "b", "alpha", "beta"),
    "E18": ("a_list", "b_list", "alpha", "beta"),
    "T32": ("phi", "a", "b", "path", "alpha", "beta"),
    "R33": ("phi", "a", "b", "path", "alpha", "beta", "gamma", "delta"),
    "AND": ("phi", "a", "b", "path", "alpha"),
}

PREDICATES = {
    "T31": t31_ando,
    "E18": e18_checked,
    "T32": t32_uhlmann,
    "R33": r33_general,
    "AND": ando_chain,
}


class AndoSuite(Suite):
    """
    Positive-map inequalities over the configured map set.

    Random compressions are drawn once per cell from the cell's generator.

    Attributes
    ----------
    config: HarnessConfig
    suite: string
        Suite name: ando
    """

    suite = suite
    theorem_ids = tuple(SIGNATURES)

    def maps_for(self, dim):
        """Spec texts of the configured maps that fit `dim`."""
        # random compressions are drawn again per cell
        rng = make_rng(0)
        return [text for text, _ in fitting_maps(dim, self.config.map_specs, rng)]

    def cells_for(self, theorem_id):
        config = self.config
        if theorem_id == "E18":
            return [
                Cell(theorem_id, dim, alpha=alpha, beta=beta, extra=(("pairs", config.pairs_per_list),))
                for dim, alpha, beta in product(config.dims, config.alphas, config.betas)
            ]

        cells = []
        for dim in config.dims:
            for text in self.maps_for(dim):
                if theorem_id == "T31":
                    grid = product(config.alphas, config.betas)
                    cells.extend(Cell(theorem_id, dim, alpha=al, beta=be, map=text) for al, be in grid)
                elif theorem_id in ("T32", "R33"):
                    # R33 draws gamma and delta per trial
                    grid = product(config.upsilon_grid, config.alphas, config.betas)
                    cells.extend(
                        Cell(theorem_id, dim, alpha=al, beta=be, upsilon=up, map=text) for up, al, be in grid
                    )
                elif theorem_id == "AND":
                    grid = product(config.upsilon_grid, config.alphas)
                    cells.extend(Cell(theorem_id, dim, alpha=al, upsilon=up, map=text) for up, al in grid)
        return cells

    def instances_for(self, cell, rng):
        config = self.config

        def posdef():
            return gen_posdef(cell.dim, config.eig_range, rng)

        if cell.theorem_id == "E18":
            n_pairs = dict(cell.extra)["pairs"]
            return [
                TheoremInstance(
                    "E18",
                    {
                        "a_list": [posdef() for _ in range(n_pairs)],
                        "b_list": [posdef() for _ in range(n_pairs)],
                        "alpha": cell.alpha,
                        "beta": cell.beta,
                    },
                )
                for _ in range(config.trials_per_cell)
            ]

        phi = PositiveLinearMapSpec.parse(cell.map, dim=cell.dim, rng=rng)
        instances = []
        for _ in range(config.trials_per_cell):
            params = {"phi": phi, "a": posdef(), "b": posdef(), "alpha": cell.alpha}
            if cell.theorem_id != "AND":
                params["beta"] = cell.beta
            if cell.theorem_id != "T31":
                params["path"] = as_path(cell.upsilon)
            if cell.theorem_id == "R33":
                params["gamma"] = float(rng.choice(config.gammas))
                params["delta"] = float(rng.choice(config.deltas))
            instances.append(TheoremInstance(cell.theorem_id, params))
        return instances


# used by Harness.suites
SUITE = AndoSuite
