"""
Symmetric eigendecomposition and spectral calculus.

Every mean and every lifted function f(A) in the package goes through
`eigh` and `apply_scalar` here.
"""

import logging

from dataclasses import dataclass

import numpy as np
import scipy.linalg

import operator_means as om


logger = logging.getLogger(__name__)


class DimensionError(ValueError):
    """Operands have incompatible or unsupported dimensions."""


class AsymmetryError(ValueError):
    """A matrix literal is further from symmetric than `SYMMETRY_RTOL` allows."""


class NotPositiveDefiniteError(ValueError):
    """A matrix falls below the positive definite floor."""


class SingularMatrixError(ValueError):
    """A congruence factor is not invertible."""


class DomainError(ValueError):
    """A scalar function is undefined at (some) eigenvalue."""


class SpectralError(ValueError):
    """The symmetric eigen-solver failed.

    Attributes
    ----------
    matrix: ndarray
        The matrix the solver was called on.
    """

    def __init__(self, message, matrix):
        super().__init__(message)
        self.matrix = matrix


class SymMatrix:
    """Real symmetric matrix.

    The entries are symmetrized on construction, ``(X + X.T) / 2``, and the
    underlying array is read-only so instances can be shared freely.

    Parameters
    ----------
    entries: array_like
        Square array of real numbers. A scalar is read as a 1x1 matrix.

    Raises
    ------
    DimensionError
        If the array is not square or its size is outside ``1..MAX_DIM``.
    AsymmetryError
        If ``||X - X.T||_F > SYMMETRY_RTOL * ||X||_F``.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        if isinstance(entries, SymMatrix):
            entries = entries.entries
        arr = np.array(entries, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if not 1 <= arr.shape[0] <= om.MAX_DIM:
            raise DimensionError(
                f"dimension {arr.shape[0]} is outside the supported range 1..{om.MAX_DIM}"
            )
        if not np.isfinite(arr).all():
            raise ValueError("matrix entries must be finite")

        asym = np.linalg.norm(arr - arr.T)
        if asym > om.SYMMETRY_RTOL * np.linalg.norm(arr):
            raise AsymmetryError(
                f"matrix is not symmetric: ||X - X.T|| = {asym:.3e} relative to ||X|| = {np.linalg.norm(arr):.3e}"
            )
        arr = (arr + arr.T) / 2
        arr.flags.writeable = False
        self.entries = arr

    @property
    def dim(self):
        """Number of rows (and columns)."""
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        """Let numpy functions consume the matrix directly."""
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __repr__(self):
        rows = np.array2string(self.entries, precision=6, separator=", ")
        return f"{type(self).__name__}(dim={self.dim}, {rows})"

    def __add__(self, other):
        return SymMatrix(self.entries + _entries(other))

    __radd__ = __add__

    def __sub__(self, other):
        return SymMatrix(self.entries - _entries(other))

    def __rsub__(self, other):
        return SymMatrix(_entries(other) - self.entries)

    def __neg__(self):
        return SymMatrix(-self.entries)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return SymMatrix(float(scalar) * self.entries)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return SymMatrix(self.entries / float(scalar))

    def sandwich(self, other):
        """Return ``other @ self @ other`` for a symmetric `other`."""
        y = _entries(other)
        return SymMatrix(y @ self.entries @ y)

    def allclose(self, other, rtol=None, atol=0.0):
        """Compare in operator norm relative to the larger operand.

        Parameters
        ----------
        other: SymMatrix, array_like
            Matrix of the same dimension.
        rtol: float, optional
            Relative tolerance. Defaults to `RTOL_RECON`.
        atol: float, optional
            Absolute tolerance added to the relative one.
        """
        if rtol is None:
            rtol = om.RTOL_RECON
        y = _entries(other)
        _check_same_dim(self.entries, y)
        diff = np.linalg.norm(self.entries - y, ord=2)
        scale = max(np.linalg.norm(self.entries, ord=2), np.linalg.norm(y, ord=2))
        return diff <= rtol * scale + atol

    @classmethod
    def identity(cls, dim):
        """Identity matrix of dimension `dim`."""
        return cls(np.eye(dim))

    @classmethod
    def diag(cls, *values):
        """Diagonal matrix with the given diagonal."""
        return cls(np.diag(np.asarray(values, dtype=float).ravel()))

    def to_dict(self):
        """Matrix literal ``{"dim": n, "rows": [[...], ...]}``."""
        return {"dim": self.dim, "rows": self.entries.tolist()}

    @classmethod
    def from_dict(cls, literal):
        """Build from a matrix literal, checking the declared dimension.

        Parameters
        ----------
        literal: dict
            ``{"dim": n, "rows": [[...], ...]}``.
        """
        if not isinstance(literal, dict) or "rows" not in literal:
            raise ValueError(f"matrix literal must be a dict with 'rows', got {literal!r}")
        matrix = cls(literal["rows"])
        if "dim" in literal and int(literal["dim"]) != matrix.dim:
            raise DimensionError(
                f"declared dim {literal['dim']} does not match {matrix.dim} rows"
            )
        return matrix


class PosDefMatrix(SymMatrix):
    """Real symmetric positive definite matrix.

    Construction requires ``lambda_min > PD_FLOOR * lambda_max``.

    Raises
    ------
    NotPositiveDefiniteError
        If the smallest eigenvalue falls below the floor.
    """

    __slots__ = ()

    def __init__(self, entries):
        super().__init__(entries)
        try:
            lam = scipy.linalg.eigvalsh(self.entries)
        except (scipy.linalg.LinAlgError, ValueError) as e:
            raise SpectralError(f"eigenvalue computation failed: {e}", self.entries) from e
        if lam[-1] <= 0 or lam[0] <= om.PD_FLOOR * lam[-1]:
            raise NotPositiveDefiniteError(
                f"matrix is not positive definite: eigenvalues in [{lam[0]:.3e}, {lam[-1]:.3e}]"
            )


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order and the orthogonal basis of eigenvectors
    (as columns)."""

    eigenvalues: np.ndarray
    basis: np.ndarray

    def reconstruct(self):
        """Return ``basis @ diag(eigenvalues) @ basis.T``."""
        return SymMatrix((self.basis * self.eigenvalues) @ self.basis.T)


def _entries(x):
    if isinstance(x, SymMatrix):
        return x.entries
    return np.asarray(x, dtype=float)


def _check_same_dim(x, y):
    if np.shape(x) != np.shape(y):
        raise DimensionError(f"dimension mismatch: {np.shape(x)} vs {np.shape(y)}")


def check_same_dim(*matrices):
    """Raise `DimensionError` unless all matrices share one dimension."""
    first = _entries(matrices[0])
    for other in matrices[1:]:
        _check_same_dim(first, _entries(other))


def eigh(m):
    """Symmetric eigendecomposition with a deterministic basis.

    Eigenvalues are ascending and every eigenvector is signed so that its
    largest-magnitude component is positive.

    Parameters
    ----------
    m: SymMatrix

    Returns
    -------
    EigenSystem

    Raises
    ------
    SpectralError
        If the solver does not converge. The matrix is attached to the error.
    """
    m = m if isinstance(m, SymMatrix) else SymMatrix(m)
    try:
        eigenvalues, basis = scipy.linalg.eigh(m.entries)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        logger.exception(e)
        raise SpectralError(f"symmetric eigen-solver failed: {e}", m.entries) from e

    # sign convention: largest-magnitude component of each column positive,
    # ties (up to round-off) go to the first index
    mags = np.abs(basis)
    pivots = np.argmax(mags >= mags.max(axis=0) * (1 - 1e-10), axis=0)
    signs = np.sign(basis[pivots, np.arange(basis.shape[1])])
    signs[signs == 0] = 1.0
    basis = basis * signs

    eigenvalues.flags.writeable = False
    basis.flags.writeable = False
    return EigenSystem(eigenvalues=eigenvalues, basis=basis)


def _on_spectrum(f, eigenvalues):
    try:
        values = np.asarray(f(eigenvalues), dtype=float)
    except TypeError:
        # scalar-only function
        values = None
    if values is None or values.shape != eigenvalues.shape:
        values = np.array([f(lam) for lam in eigenvalues], dtype=float)
    return values


def apply_scalar(m, f):
    """Apply a scalar function through the spectral calculus.

    Parameters
    ----------
    m: SymMatrix
        Usually a PosDefMatrix.
    f: callable
        Real function, applied elementwise to the eigenvalues. Vectorized
        numpy functions are called once on the whole spectrum.

    Returns
    -------
    SymMatrix
        ``U diag(f(lambda_i)) U.T`` where ``m = U diag(lambda) U.T``.

    Raises
    ------
    DomainError
        If f is undefined (non-finite or raising) at some eigenvalue.
    """
    es = eigh(m)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        try:
            values = _on_spectrum(f, es.eigenvalues)
        except (ValueError, ArithmeticError, TypeError) as e:
            raise DomainError(f"function is undefined on the spectrum {es.eigenvalues}: {e}") from e
    if not np.isfinite(values).all():
        raise DomainError(
            f"function is undefined on the spectrum {es.eigenvalues} (values {values})"
        )
    return SymMatrix((es.basis * values) @ es.basis.T)


def congruence(c, x):
    """Return ``c.T @ x @ c`` for an invertible `c`.

    A positive definite `x` stays positive definite.

    Raises
    ------
    SingularMatrixError
        If `c` is numerically singular.
    DimensionError
        If `c` is not square or does not match `x`.
    """
    c = np.asarray(c, dtype=float)
    x_arr = _entries(x)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] != x_arr.shape[0]:
        raise DimensionError(f"congruence factor {c.shape} does not match matrix {x_arr.shape}")
    s = np.linalg.svd(c, compute_uv=False)
    if s[0] == 0 or s[-1] <= s[0] * c.shape[0] * np.finfo(float).eps:
        raise SingularMatrixError(f"congruence factor is singular (singular values {s})")

    out = c.T @ x_arr @ c
    if isinstance(x, PosDefMatrix):
        return PosDefMatrix(out)
    return SymMatrix(out)


def frac_power(m, t):
    """Real power ``m**t`` of a positive definite matrix.

    ``t == 0`` gives the identity and ``t == 1`` returns `m` unchanged.

    Parameters
    ----------
    m: PosDefMatrix
    t: float

    Returns
    -------
    PosDefMatrix
    """
    if not isinstance(m, PosDefMatrix):
        m = PosDefMatrix(m)
    t = float(t)
    if t == 0.0:
        return PosDefMatrix(np.eye(m.dim))
    if t == 1.0:
        return m
    return PosDefMatrix(apply_scalar(m, lambda s: np.power(s, t)))
