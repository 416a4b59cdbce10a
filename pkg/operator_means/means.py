"""
Weighted operator means and their interpolational paths.

All means of two positive definite matrices here have the form
``A^{1/2} g(A^{-1/2} B A^{-1/2}) A^{1/2}`` for a representing function g. The
power path ``m_{v,alpha}`` uses ``g(x) = ((1 - alpha) + alpha x^v)^{1/v}`` and
joins the harmonic (v = -1), geometric (v -> 0) and arithmetic (v = 1) means.
"""

import logging

from dataclasses import dataclass

import numpy as np

import operator_means as om

from operator_means.spectral import (
    PosDefMatrix,
    SymMatrix,
    apply_scalar,
    check_same_dim,
    congruence,
    frac_power,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Weight:
    """Interpolation weight in [0, 1]."""

    value: float

    def __post_init__(self):
        value = float(self.value)
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"weight must lie in [0, 1], got {value}")
        object.__setattr__(self, "value", value)

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class UnrestrictedWeight:
    """Any real weight; only the triangle-inequality chains take these."""

    value: float

    def __post_init__(self):
        value = float(self.value)
        if not np.isfinite(value):
            raise ValueError(f"weight must be finite, got {value}")
        object.__setattr__(self, "value", value)

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class PathSpec:
    """Power path parameter ``upsilon`` in [-1, 1].

    ``PathSpec(1)`` is the arithmetic path, ``PathSpec(0)`` the geometric path
    and ``PathSpec(-1)`` the harmonic path.
    """

    upsilon: float

    def __post_init__(self):
        upsilon = float(self.upsilon)
        if not -1.0 <= upsilon <= 1.0:
            raise ValueError(f"upsilon must lie in [-1, 1], got {upsilon}")
        object.__setattr__(self, "upsilon", upsilon)

    @classmethod
    def arithmetic(cls):
        return cls(1.0)

    @classmethod
    def geometric(cls):
        return cls(0.0)

    @classmethod
    def harmonic(cls):
        return cls(-1.0)

    @property
    def name(self):
        """Readable name used in reports."""
        if self.upsilon == 1.0:
            return "arithmetic"
        if abs(self.upsilon) < om.UPSILON_EPS:
            return "geometric"
        if self.upsilon == -1.0:
            return "harmonic"
        return f"power({self.upsilon:g})"

    def mean(self, a, b, alpha):
        """Shortcut for `power_mean` along this path."""
        return power_mean(a, b, self, alpha)


def weight(alpha):
    """Validate a weight in [0, 1] and return it as float."""
    if isinstance(alpha, Weight):
        return alpha.value
    return Weight(alpha).value


def unrestricted(alpha):
    """Validate any finite real weight and return it as float."""
    return UnrestrictedWeight(float(alpha)).value


def clip_weight(value):
    """Clamp a computed weight into [0, 1] against round-off."""
    return min(max(float(value), 0.0), 1.0)


def as_path(path):
    """Accept a PathSpec or a number."""
    if isinstance(path, PathSpec):
        return path
    return PathSpec(path)


def posdef_pair(a, b):
    """Coerce two operands to PosDefMatrix of one dimension."""
    a = a if isinstance(a, PosDefMatrix) else PosDefMatrix(a)
    b = b if isinstance(b, PosDefMatrix) else PosDefMatrix(b)
    check_same_dim(a, b)
    return a, b


def _finish(m):
    # kill round-off asymmetry before the result goes into another eigh
    m = np.asarray(m, dtype=float)
    return PosDefMatrix((m + m.T) / 2)


def _relative_form(a, b, g):
    """``A^{1/2} g(A^{-1/2} B A^{-1/2}) A^{1/2}``."""
    a_half = frac_power(a, 0.5)
    a_neg_half = frac_power(a, -0.5)
    x = b.sandwich(a_neg_half)
    inner = apply_scalar(x, g)
    return _finish(a_half.entries @ inner.entries @ a_half.entries)


def arithmetic_mean(a, b, alpha):
    """Weighted arithmetic mean ``(1 - alpha) A + alpha B``.

    Parameters
    ----------
    a, b: PosDefMatrix
    alpha: Weight or float in [0, 1]

    Examples
    --------
    >>> arithmetic_mean(PosDefMatrix(4), PosDefMatrix(1), 0.25).entries
    array([[3.25]])
    """
    alpha = weight(alpha)
    a, b = posdef_pair(a, b)
    if alpha == 0.0:
        return a
    if alpha == 1.0:
        return b
    return _finish((1 - alpha) * a.entries + alpha * b.entries)


def geometric_mean(a, b, alpha):
    """Weighted geometric mean ``A^{1/2} (A^{-1/2} B A^{-1/2})^alpha A^{1/2}``.

    Parameters
    ----------
    a, b: PosDefMatrix
    alpha: Weight or float in [0, 1]
    """
    alpha = weight(alpha)
    a, b = posdef_pair(a, b)
    if alpha == 0.0:
        return a
    if alpha == 1.0:
        return b
    return _relative_form(a, b, lambda x: np.power(x, alpha))


def harmonic_mean(a, b, alpha):
    """Weighted harmonic mean ``((1 - alpha) A^{-1} + alpha B^{-1})^{-1}``."""
    alpha = weight(alpha)
    a, b = posdef_pair(a, b)
    if alpha == 0.0:
        return a
    if alpha == 1.0:
        return b
    a_inv = frac_power(a, -1)
    b_inv = frac_power(b, -1)
    return frac_power(_finish((1 - alpha) * a_inv.entries + alpha * b_inv.entries), -1)


def power_mean(a, b, path, alpha):
    """Power mean ``m_{v,alpha}`` of two positive definite matrices.

    Parameters
    ----------
    a, b: PosDefMatrix
    path: PathSpec or float
        ``v = 1`` is computed as the arithmetic mean exactly, ``|v| <
        UPSILON_EPS`` routes to the geometric formula, everything else uses
        ``A^{1/2} ((1 - alpha) I + alpha X^v)^{1/v} A^{1/2}`` with
        ``X = A^{-1/2} B A^{-1/2}``.
    alpha: Weight or float in [0, 1]

    Returns
    -------
    PosDefMatrix
    """
    path = as_path(path)
    alpha = weight(alpha)
    v = path.upsilon
    if v == 1.0:
        return arithmetic_mean(a, b, alpha)
    if abs(v) < om.UPSILON_EPS:
        return geometric_mean(a, b, alpha)
    a, b = posdef_pair(a, b)
    if alpha == 0.0:
        return a
    if alpha == 1.0:
        return b
    return _relative_form(a, b, lambda x: np.power((1 - alpha) + alpha * np.power(x, v), 1 / v))


def _deviation(lhs, rhs):
    return float(np.linalg.norm(np.asarray(lhs) - np.asarray(rhs), ord=2))


def interpolation_deviation(path, a, b, alpha, beta, gamma):
    """Deviation from the composition identity of an interpolational path.

    Computes ``||(A s_alpha B) s_gamma (A s_beta B) - A s_p B||_2`` with
    ``p = (1 - gamma) alpha + gamma beta``.
    """
    path = as_path(path)
    alpha, beta, gamma = weight(alpha), weight(beta), weight(gamma)
    left = power_mean(power_mean(a, b, path, alpha), power_mean(a, b, path, beta), path, gamma)
    right = power_mean(a, b, path, clip_weight((1 - gamma) * alpha + gamma * beta))
    return _deviation(left, right)


def _refinement_identity(mean, a, b, alpha, beta):
    left, right = refinement_terms(mean, a, b, alpha, beta)
    return mean(a, b, alpha), mean(left, right, alpha)


def nabla_identity_deviation(a, b, alpha, beta):
    """Deviation of ``A nabla_alpha B`` from
    ``((A nabla_alpha B) nabla_beta A) nabla_alpha ((A nabla_alpha B) nabla_beta B)``.

    Both sides are finite linear combinations of A and B, so the deviation is
    at round-off level.
    """
    alpha, beta = weight(alpha), weight(beta)
    return _deviation(*_refinement_identity(arithmetic_mean, a, b, alpha, beta))


def sharp_identity_deviation(a, b, alpha, beta):
    """Deviation of ``A #_alpha B`` from
    ``((A #_alpha B) #_beta A) #_alpha ((A #_alpha B) #_beta B)``."""
    alpha, beta = weight(alpha), weight(beta)
    return _deviation(*_refinement_identity(geometric_mean, a, b, alpha, beta))


def refinement_terms(mean, a, b, alpha, beta):
    """The pair ``((A s_alpha B) s_beta A, (A s_alpha B) s_beta B)``.

    This is the pair whose s_alpha-mean reproduces ``A s_alpha B`` and whose
    other means give the refinement terms of the chains.
    """
    center = mean(a, b, alpha)
    return mean(center, a, beta), mean(center, b, beta)


def path_mean(path):
    """Return ``mean(a, b, alpha)`` for a path."""
    path = as_path(path)
    return lambda a, b, alpha: power_mean(a, b, path, alpha)


def identity_normalization_deviation(dim, path, alpha):
    """``||I s_alpha I - I||_2`` for the given path."""
    eye = PosDefMatrix(np.eye(dim))
    return _deviation(power_mean(eye, eye, path, alpha), eye)


def midpoint_deviation(path, a, b, alpha, beta):
    """``||(A s_alpha B) s_{1/2} (A s_beta B) - A s_{(alpha + beta)/2} B||_2``."""
    return interpolation_deviation(path, a, b, alpha, beta, 0.5)


def congruence_deviation(path, a, b, alpha, c):
    """``||C^T (A s_alpha B) C - (C^T A C) s_alpha (C^T B C)||_2`` for invertible C."""
    a, b = posdef_pair(a, b)
    left = congruence(c, power_mean(a, b, path, alpha))
    right = power_mean(congruence(c, a), congruence(c, b), path, alpha)
    return _deviation(left, right)


def mean_scale(*matrices):
    """Largest operator norm among the matrices (and 1)."""
    return max([1.0] + [float(np.linalg.norm(SymMatrix(m).entries, ord=2)) for m in matrices])
