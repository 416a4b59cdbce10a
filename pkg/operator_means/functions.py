"""
Catalog of scalar functions with a declared operator monotonicity class.

The class is declared, not inferred: the catalog trusts its own labels and the
tests check their consequences (log-convexity of the scalar function,
monotonicity of the lifted function on ordered pairs).
"""

import logging
import re

from dataclasses import dataclass

import numpy as np

from operator_means.loewner import loewner_leq
from operator_means.spectral import DomainError, PosDefMatrix, apply_scalar
from operator_means.utils import SpecSyntaxError, gen_posdef, gen_psd


logger = logging.getLogger(__name__)


OM_DECREASING = "om_decreasing"
OM_INCREASING = "om_increasing"
NO_CLASS = "none"

# kind: (parameter names, class)
KINDS = {
    "neg_power": (("p",), OM_DECREASING),
    "shifted_inverse": (("s", "c"), OM_DECREASING),
    "power": (("p",), OM_INCREASING),
    "log1p": ((), OM_INCREASING),
    "scaled_identity": (("c",), OM_INCREASING),
    "exp_neg": ((), NO_CLASS),
}

# A <= B (B - A = 0.5 [[1, 1], [1, 1]]) while exp(-B) <= exp(-A) fails:
# the (2, 2) entry of exp(-A) - exp(-B) is about -1.4e-3.
EXP_NEG_MONOTONICITY_WITNESS = (
    [[0.1, 0.0], [0.0, 10.0]],
    [[0.6, 0.5], [0.5, 10.5]],
)


class HypothesisError(ValueError):
    """A predicate was called with a function outside its hypothesis class."""


@dataclass(frozen=True)
class ScalarFunctionSpec:
    """A catalog function and its declared operator monotonicity class.

    Parameters
    ----------
    kind: str
        One of `KINDS`.
    params: tuple of float
        Parameters in the order of `KINDS[kind]`.

    Attributes
    ----------
    klass: str
        ``"om_decreasing"``, ``"om_increasing"`` or ``"none"``.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown function kind {self.kind!r}; choose from {sorted(KINDS)}")
        names, _ = KINDS[self.kind]
        params = tuple(float(p) for p in self.params)
        if len(params) != len(names):
            raise ValueError(
                f"{self.kind} takes {len(names)} parameter(s) {names}, got {len(params)}"
            )
        object.__setattr__(self, "params", params)

        if self.kind in ("neg_power", "power") and not 0.0 <= params[0] <= 1.0:
            raise ValueError(f"{self.kind} requires 0 <= p <= 1, got p={params[0]}")
        if self.kind == "shifted_inverse" and not (params[0] >= 0.0 and params[1] > 0.0):
            raise ValueError(f"shifted_inverse requires s >= 0 and c > 0, got {params}")
        if self.kind == "scaled_identity" and not params[0] > 0.0:
            raise ValueError(f"scaled_identity requires c > 0, got c={params[0]}")

    @property
    def klass(self):
        """Declared monotonicity class."""
        return KINDS[self.kind][1]

    @classmethod
    def parse(cls, text):
        """Parse the textual syntax, e.g. ``"neg_power:0.5"``,
        ``"shifted_inverse:1:2"`` or ``"exp_neg"``.

        Raises
        ------
        SpecSyntaxError
            With the character offset of the offending field.
        """
        if isinstance(text, ScalarFunctionSpec):
            return text
        fields = text.strip().split(":")
        kind = fields[0]
        if kind not in KINDS:
            raise SpecSyntaxError(f"unknown function kind {kind!r}", text, 0)
        params = []
        position = len(kind) + 1
        for field_text in fields[1:]:
            try:
                params.append(float(field_text))
            except ValueError:
                raise SpecSyntaxError(f"expected a number, got {field_text!r}", text, position) from None
            position += len(field_text) + 1
        try:
            return cls(kind, tuple(params))
        except ValueError as e:
            raise SpecSyntaxError(str(e), text, len(kind) + 1 if params else 0) from e

    def __str__(self):
        return ":".join([self.kind] + [f"{p:g}" for p in self.params])

    def evaluate(self, t):
        """Value of the function at ``t > 0`` (scalar or array)."""
        return evaluate(self, t)

    def __call__(self, t):
        return evaluate(self, t)


def evaluate(spec, t):
    """Evaluate a catalog function.

    Parameters
    ----------
    spec: ScalarFunctionSpec
    t: float or ndarray
        Strictly positive argument(s).

    Returns
    -------
    float or ndarray
        Strictly positive value(s).

    Raises
    ------
    DomainError
        If some argument is not strictly positive.
    """
    arr = np.asarray(t, dtype=float)
    if not (arr > 0).all():
        raise DomainError(f"{spec} is only defined for t > 0, got {t}")
    if spec.kind == "neg_power":
        out = np.power(arr, -spec.params[0])
    elif spec.kind == "shifted_inverse":
        s, c = spec.params
        out = c / (arr + s)
    elif spec.kind == "power":
        out = np.power(arr, spec.params[0])
    elif spec.kind == "log1p":
        out = np.log1p(arr)
    elif spec.kind == "scaled_identity":
        out = spec.params[0] * arr
    elif spec.kind == "exp_neg":
        out = np.exp(-arr)
    if out.ndim == 0:
        return float(out)
    return out


def lift(spec, a):
    """Apply a catalog function to a positive definite matrix.

    Returns
    -------
    PosDefMatrix
        Catalog functions are positive on (0, inf), so the result is positive
        definite.
    """
    spec = ScalarFunctionSpec.parse(spec)
    return PosDefMatrix(apply_scalar(a, spec.evaluate))


def require_class(spec, klass, bypass=False):
    """Check that `spec` belongs to `klass`.

    Parameters
    ----------
    spec: ScalarFunctionSpec
    klass: str
    bypass: bool, optional
        Test-only escape hatch used to feed functions outside the class to a
        predicate (sensitivity runs). The bypass is logged.

    Raises
    ------
    HypothesisError
        If the class does not match and `bypass` is False.
    """
    spec = ScalarFunctionSpec.parse(spec)
    if spec.klass == klass:
        return spec
    if bypass:
        logger.info(f"hypothesis bypass: {spec} ({spec.klass}) used where {klass} is required")
        return spec
    raise HypothesisError(f"{spec} is declared {spec.klass}, but {klass} is required")


def scalar_log_convexity_gaps(spec, grid=None):
    """Gaps ``sqrt(f(x) f(y)) - f((x + y) / 2)`` over a grid of pairs.

    Non-negative entries everywhere is the scalar shadow of operator
    log-convexity.

    Parameters
    ----------
    spec: ScalarFunctionSpec
    grid: array_like, optional
        Points; defaults to 100 points from 0.1 to 10.

    Returns
    -------
    ndarray of shape (len(grid), len(grid))
    """
    spec = ScalarFunctionSpec.parse(spec)
    if grid is None:
        grid = np.linspace(0.1, 10.0, 100)
    grid = np.asarray(grid, dtype=float)
    x, y = np.meshgrid(grid, grid)
    return np.sqrt(spec(x) * spec(y)) - spec((x + y) / 2)


def monotonicity_verdict(spec, a, b):
    """Check the monotonicity the class predicts on a pair ``a <= b``.

    om_increasing functions are checked for ``f(a) <= f(b)``, all others
    (om_decreasing and classless decreasing functions such as exp_neg) for
    ``f(b) <= f(a)``.

    Returns
    -------
    OrderVerdict
    """
    spec = ScalarFunctionSpec.parse(spec)
    fa, fb = lift(spec, a), lift(spec, b)
    if spec.klass == OM_INCREASING:
        return loewner_leq(fa, fb)
    return loewner_leq(fb, fa)


def find_monotonicity_violation(spec, rng, trials=10000, dim=2, eig_range=(0.1, 10.0), threshold=-1e-4):
    """Random search for an ordered pair ``A <= B`` that the lifted function
    does not respect.

    B is built as ``A + P`` for a random positive semidefinite P, so the
    order holds by construction.

    Parameters
    ----------
    spec: ScalarFunctionSpec
    rng: numpy Generator
    trials: int, optional
    dim: int, optional
    eig_range: tuple, optional
    threshold: float, optional
        A violation needs a normalized gap at or below this value.

    Returns
    -------
    tuple or None
        ``(a, b, verdict)`` for the first violation found, else None.
    """
    spec = ScalarFunctionSpec.parse(spec)
    for trial in range(trials):
        a = gen_posdef(dim, eig_range, rng)
        b = PosDefMatrix(a.entries + gen_psd(dim, rng, scale=eig_range[1]).entries)
        verdict = monotonicity_verdict(spec, a, b)
        if verdict.normalized_gap <= threshold:
            logger.info(f"{spec}: monotonicity violation after {trial + 1} trials, gap {verdict.gap:.3e}")
            return a, b, verdict
    return None


def parse_function_list(text):
    """Parse a comma separated list; ``shifted_inverse:1:2,neg_power:0.5``."""
    return [ScalarFunctionSpec.parse(item) for item in re.split(r",\s*", text.strip()) if item]
