"""
Refined triangle and reverse triangle inequalities for the operator norm.

The operands are symmetric but not necessarily positive, and the weight may be
any real number.
"""

import logging

from itertools import product

import operator_means as om

from operator_means import Suite
from operator_means.loewner import ChainReport, check_chain, operator_norm
from operator_means.means import unrestricted
from operator_means.spectral import SymMatrix, check_same_dim
from operator_means.theorems import TheoremInstance
from operator_means.utils import Cell, gen_symmetric


logger = logging.getLogger(__name__)

# this can be queried with
# triangle.TriangleSuite.suite
suite = "triangle"


def _sym_pair(a, b):
    a, b = SymMatrix(a), SymMatrix(b)
    check_same_dim(a, b)
    return a, b


def c27_triangle(a, b, alpha):
    """Refined triangle inequality.

    ``||A + B|| <= ||alpha A + (1 - alpha) M|| + ||alpha B + (1 - alpha) M|| <= ||A|| + ||B||``
    with ``M = (A + B) / 2``.

    Parameters
    ----------
    a, b: SymMatrix
    alpha: UnrestrictedWeight or float
        The first link holds for every real alpha, the second one is only
        expected to hold for alpha in [0, 1].

    Returns
    -------
    ChainReport
        Chain of three 1x1 terms.
    """
    alpha = unrestricted(alpha)
    a, b = _sym_pair(a, b)
    middle = (a + b) / 2
    terms = [
        operator_norm(a + b),
        operator_norm(alpha * a + (1 - alpha) * middle) + operator_norm(alpha * b + (1 - alpha) * middle),
        operator_norm(a) + operator_norm(b),
    ]
    return check_chain(terms, expected=[True, 0.0 <= alpha <= 1.0])


def _reverse_terms(a, b, alpha):
    # (1 - t) A + t (2B) for t = -alpha and t = alpha
    minus = (1 + alpha) * a - 2 * alpha * b
    plus = (1 - alpha) * a + 2 * alpha * b
    return [
        operator_norm(a) - operator_norm(b),
        (operator_norm(minus) + operator_norm(plus)) / 2 - operator_norm(b),
        operator_norm(a - b),
    ]


def r27_reverse_triangle(a, b, alpha):
    """Refined reverse triangle inequality, in both orders of the operands.

    ``||A|| - ||B|| <= (||A nabla_{-alpha} 2B|| + ||A nabla_alpha 2B||) / 2 - ||B|| <= ||A - B||``
    and the same with A and B swapped.

    Returns
    -------
    ChainReport
        Four links: two for ``(A, B)`` followed by two for ``(B, A)``. The
        six terms are stored in the same order. The second link of each
        chain is only expected to hold for ``|alpha| <= 1``.
    """
    alpha = unrestricted(alpha)
    a, b = _sym_pair(a, b)
    first = check_chain(_reverse_terms(a, b, alpha))
    second = check_chain(_reverse_terms(b, a, alpha))
    justified = abs(alpha) <= 1.0
    return ChainReport(
        links=first.links + second.links,
        expected=(True, justified, True, justified),
        terms=first.terms + second.terms,
    )


# theorem id: parameter names
SIGNATURES = {
    "C27": ("a", "b", "alpha"),
    "R27": ("a", "b", "alpha"),
}

PREDICATES = {
    "C27": c27_triangle,
    "R27": r27_reverse_triangle,
}


class TriangleSuite(Suite):
    """
    Norm inequalities on random symmetric pairs, over `TRIANGLE_ALPHAS`.

    Attributes
    ----------
    config: HarnessConfig
    suite: string
        Suite name: triangle
    """

    suite = suite
    theorem_ids = tuple(SIGNATURES)

    def cells_for(self, theorem_id):
        return [
            Cell(theorem_id, dim, alpha=alpha)
            for dim, alpha in product(self.config.dims, om.TRIANGLE_ALPHAS)
        ]

    def instances_for(self, cell, rng):
        return [
            TheoremInstance(
                cell.theorem_id,
                {
                    "a": gen_symmetric(cell.dim, rng),
                    "b": gen_symmetric(cell.dim, rng),
                    "alpha": cell.alpha,
                },
            )
            for _ in range(self.config.trials_per_cell)
        ]


# used by Harness.suites
SUITE = TriangleSuite
