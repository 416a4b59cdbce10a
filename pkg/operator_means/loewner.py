"""
Loewner order comparisons and inequality chains.
"""

import logging

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

import operator_means as om

from operator_means.spectral import DimensionError, SymMatrix, check_same_dim


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of one comparison ``X <= Y``.

    Attributes
    ----------
    holds: bool
        True iff ``gap >= -TOL_ORDER * scale``.
    gap: float
        Smallest eigenvalue of ``Y - X``.
    scale: float
        ``max(||X||_2, ||Y||_2, 1)``.
    """

    holds: bool
    gap: float
    scale: float

    @property
    def normalized_gap(self):
        """Gap divided by scale."""
        return self.gap / self.scale

    def to_dict(self):
        """Dict with gap, scale and holds."""
        return {"gap": self.gap, "scale": self.scale, "holds": self.holds}


@dataclass(frozen=True)
class ChainReport:
    """Verdicts for the links of a chain ``T_0 <= T_1 <= ... <= T_k``.

    Attributes
    ----------
    links: tuple of OrderVerdict
        Link i compares ``terms[i] <= terms[i+1]``.
    expected: tuple of bool
        Whether link i is claimed to hold for the parameters used. Links
        outside the parameter range where the inequality is justified are
        still evaluated but flagged False.
    terms: tuple of SymMatrix
        The materialized chain.
    """

    links: tuple
    expected: tuple = ()
    terms: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not self.expected:
            object.__setattr__(self, "expected", (True,) * len(self.links))
        assert len(self.expected) == len(self.links), "one expectation flag per link"

    @property
    def all_hold(self):
        """True iff every link holds."""
        return all(link.holds for link in self.links)

    @property
    def expected_hold(self):
        """True iff every link that is expected to hold does."""
        return all(link.holds for link, exp in zip(self.links, self.expected) if exp)

    @property
    def weakest_gap(self):
        """Minimum over links of gap / scale."""
        return min(link.normalized_gap for link in self.links)

    @property
    def weakest_expected_gap(self):
        """Minimum of gap / scale over the links expected to hold, None if there are none."""
        return min(
            (link.normalized_gap for link, exp in zip(self.links, self.expected) if exp),
            default=None,
        )

    def unexpected_failures(self):
        """Indices of expected links that fail."""
        return [
            i for i, (link, exp) in enumerate(zip(self.links, self.expected)) if exp and not link.holds
        ]

    def reversed(self):
        """The same chain read in the opposite direction (``>=`` links)."""
        return check_chain(list(self.terms[::-1]), expected=self.expected[::-1])


def loewner_leq(x, y, tol=None):
    """Compare ``x <= y`` in the Loewner order.

    Parameters
    ----------
    x, y: SymMatrix
        Matrices of equal dimension.
    tol: float, optional
        Relative tolerance; defaults to `TOL_ORDER`.

    Returns
    -------
    OrderVerdict
        gap is the smallest eigenvalue of ``y - x``.

    Examples
    --------
    >>> loewner_leq(SymMatrix.diag(0, 2), SymMatrix.diag(1, 1)).gap
    -1.0
    """
    if tol is None:
        tol = om.TOL_ORDER
    x, y = SymMatrix(x), SymMatrix(y)
    check_same_dim(x, y)
    diff = y.entries - x.entries
    gap = float(scipy.linalg.eigvalsh(diff)[0])
    scale = max(operator_norm(x), operator_norm(y), 1.0)
    return OrderVerdict(holds=bool(gap >= -tol * scale), gap=gap, scale=float(scale))


def check_chain(terms, expected=None, tol=None):
    """Evaluate a chain of Loewner inequalities between consecutive terms.

    Parameters
    ----------
    terms: list of SymMatrix or float
        At least two terms of equal dimension. Plain numbers are read as
        1x1 matrices (used for chains of norms).
    expected: list of bool, optional
        Per-link flags of whether the link is claimed to hold.
    tol: float, optional
        Passed on to `loewner_leq`.

    Returns
    -------
    ChainReport
    """
    if len(terms) < 2:
        raise ValueError(f"a chain needs at least 2 terms, got {len(terms)}")
    terms = tuple(SymMatrix(t) for t in terms)
    dims = {t.dim for t in terms}
    if len(dims) != 1:
        raise DimensionError(f"chain terms have different dimensions {sorted(dims)}")
    links = tuple(loewner_leq(lo, hi, tol=tol) for lo, hi in zip(terms[:-1], terms[1:]))
    return ChainReport(links=links, expected=tuple(expected or ()), terms=terms)


def operator_norm(x):
    """Spectral norm of a symmetric matrix, the largest absolute eigenvalue."""
    x = SymMatrix(x)
    return float(np.max(np.abs(scipy.linalg.eigvalsh(x.entries))))


def is_psd(x, tol=None):
    """True iff ``0 <= x`` at the Loewner tolerance."""
    x = SymMatrix(x)
    return loewner_leq(np.zeros_like(x.entries), x, tol=tol).holds


def within(deviation, bound):
    """Verdict for ``deviation <= bound`` between two non-negative numbers.

    Identity checks (composition, congruence, normalization) report their
    operator-norm deviation this way so they share the chain format.
    """
    return loewner_leq(float(deviation), float(bound), tol=0.0)
