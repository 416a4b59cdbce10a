"""
Refinements of operator log-convexity.

Chains for operator monotone decreasing f (and their increasing duals)
obtained by inserting the refinement pair ``(A nabla_alpha B) nabla_beta A``,
``(A nabla_alpha B) nabla_beta B`` between ``f(A nabla_alpha B)`` and
``f(A) #_alpha f(B)``.
"""

import logging

from itertools import product

from operator_means import Suite
from operator_means.functions import (
    NO_CLASS,
    OM_DECREASING,
    OM_INCREASING,
    ScalarFunctionSpec,
    lift,
    require_class,
)
from operator_means.loewner import check_chain, loewner_leq
from operator_means.means import (
    arithmetic_mean,
    as_path,
    geometric_mean,
    harmonic_mean,
    posdef_pair,
    power_mean,
    refinement_terms,
    weight,
)
from operator_means.spectral import PosDefMatrix
from operator_means.theorems import TheoremInstance
from operator_means.utils import Cell, gen_posdef, gen_psd


logger = logging.getLogger(__name__)

# this can be queried with
# logconvex.LogConvexSuite.suite
suite = "logconvex"

READINGS = ("weighted", "symmetric")


def _refined_chain(f, a, b, alpha, beta, outer):
    """``[f(C), outer(f(L), f(R)), outer(f(A), f(B))]`` with ``C = A nabla_alpha B``
    and ``(L, R)`` its refinement pair."""
    a, b = posdef_pair(a, b)
    center = arithmetic_mean(a, b, alpha)
    left, right = refinement_terms(arithmetic_mean, a, b, alpha, beta)
    return [
        lift(f, center),
        outer(lift(f, left), lift(f, right)),
        outer(lift(f, a), lift(f, b)),
    ]


def t21_chain(f, a, b, alpha, beta, bypass=False):
    """Refined operator log-convexity of an operator monotone decreasing f.

    ``f(A nabla_alpha B) <= f(L) #_alpha f(R) <= f(A) #_alpha f(B)`` with
    ``L = (A nabla_alpha B) nabla_beta A`` and ``R = (A nabla_alpha B) nabla_beta B``.

    Parameters
    ----------
    f: ScalarFunctionSpec
        Must be declared om_decreasing unless `bypass` is set.
    a, b: PosDefMatrix
    alpha, beta: Weight or float in [0, 1]
    bypass: bool, optional
        Sensitivity runs only.

    Returns
    -------
    ChainReport
        Three terms; both links are expected to hold.

    Raises
    ------
    HypothesisError
        For a function outside the class.
    """
    f = require_class(f, OM_DECREASING, bypass)
    alpha, beta = weight(alpha), weight(beta)
    terms = _refined_chain(f, a, b, alpha, beta, lambda x, y: geometric_mean(x, y, alpha))
    return check_chain(terms)


def r23_converse(f, a, b, alpha, bypass=False):
    """The two-term log-convexity chain ``f(A nabla_alpha B) <= f(A) #_alpha f(B)``.

    This is `t21_chain` at ``beta = 1`` with the tight first link dropped. It
    takes any catalog function: the link is expected to hold exactly for the
    om_decreasing ones.
    """
    f = ScalarFunctionSpec.parse(f)
    alpha = weight(alpha)
    a, b = posdef_pair(a, b)
    terms = [lift(f, arithmetic_mean(a, b, alpha)), geometric_mean(lift(f, a), lift(f, b), alpha)]
    return check_chain(terms, expected=[f.klass == OM_DECREASING])


def c22_chain(f, a, b, bypass=False):
    """Refinement of the subadditivity of an operator monotone decreasing f.

    ``f(A + B) <= f((3A + B)/2) # f((A + 3B)/2) <= f(2A) # f(2B)
    <= f(2A) nabla f(2B) <= f(A) nabla f(B)``, all means unweighted.
    """
    f = require_class(f, OM_DECREASING, bypass)
    a, b = posdef_pair(a, b)
    a2, b2 = PosDefMatrix(2 * a.entries), PosDefMatrix(2 * b.entries)
    left = PosDefMatrix((3 * a.entries + b.entries) / 2)
    right = PosDefMatrix((a.entries + 3 * b.entries) / 2)
    fa2, fb2 = lift(f, a2), lift(f, b2)
    terms = [
        lift(f, PosDefMatrix(a.entries + b.entries)),
        geometric_mean(lift(f, left), lift(f, right), 0.5),
        geometric_mean(fa2, fb2, 0.5),
        arithmetic_mean(fa2, fb2, 0.5),
        arithmetic_mean(lift(f, a), lift(f, b), 0.5),
    ]
    return check_chain(terms)


def c24_chain(g, a, b, alpha, beta, bypass=False):
    """Dual chain for an operator monotone increasing g.

    ``g(A nabla_alpha B) >= g(L) #_alpha g(R) >= g(A) #_alpha g(B)``. The
    chain is checked in ascending order, so ``terms[0]`` is
    ``g(A) #_alpha g(B)``.
    """
    g = require_class(g, OM_INCREASING, bypass)
    alpha, beta = weight(alpha), weight(beta)
    terms = _refined_chain(g, a, b, alpha, beta, lambda x, y: geometric_mean(x, y, alpha))
    return check_chain(terms[::-1])


def r25_harmonic_chain(f, a, b, alpha, beta, sigma, reading="weighted", bypass=False):
    """Harmonic-mean refinement, closed by a comparison with a power mean.

    ``f(A nabla_alpha B) <= f(L) !_alpha f(R) <= f(A) !_alpha f(B) <= f(A) sigma f(B)``

    Parameters
    ----------
    f: ScalarFunctionSpec
        om_decreasing.
    a, b: PosDefMatrix
    alpha, beta: Weight or float in [0, 1]
    sigma: PathSpec or float
        Power path of the last term.
    reading: str, optional
        ``"weighted"`` closes with ``sigma_alpha``; ``"symmetric"`` closes
        with ``sigma_{1/2}``, whose last link is only expected to hold at
        ``alpha = 1/2``.

    Returns
    -------
    ChainReport
        Four terms.
    """
    f = require_class(f, OM_DECREASING, bypass)
    assert reading in READINGS, f"reading must be one of {READINGS}"
    alpha, beta = weight(alpha), weight(beta)
    sigma = as_path(sigma)
    a, b = posdef_pair(a, b)
    terms = _refined_chain(f, a, b, alpha, beta, lambda x, y: harmonic_mean(x, y, alpha))
    closing_weight = alpha if reading == "weighted" else 0.5
    terms.append(power_mean(lift(f, a), lift(f, b), sigma, closing_weight))
    expected = [True, True, reading == "weighted" or alpha == 0.5]
    return check_chain(terms, expected=expected)


def smf_chain(f, a, b, alpha, beta, path, bypass=False):
    """Log-convexity refinement with an arbitrary power path as outer mean.

    ``f(A nabla_alpha B) <= f(L) sigma_alpha f(R) <= f(A) sigma_alpha f(B)``
    for operator monotone decreasing f.
    """
    f = require_class(f, OM_DECREASING, bypass)
    alpha, beta = weight(alpha), weight(beta)
    path = as_path(path)
    terms = _refined_chain(f, a, b, alpha, beta, lambda x, y: power_mean(x, y, path, alpha))
    return check_chain(terms)


def mon_chain(f, a, b, bypass=False):
    """Matrix monotonicity spot check on an ordered pair ``A <= B``.

    Checks ``f(A) <= f(B)`` for om_increasing f and ``f(B) <= f(A)``
    otherwise. The link is expected to hold unless f has no class.

    Raises
    ------
    ValueError
        If ``A <= B`` does not hold.
    """
    f = ScalarFunctionSpec.parse(f)
    a, b = posdef_pair(a, b)
    if not loewner_leq(a, b).holds:
        raise ValueError("monotonicity check needs an ordered pair A <= B")
    fa, fb = lift(f, a), lift(f, b)
    terms = [fa, fb] if f.klass == OM_INCREASING else [fb, fa]
    return check_chain(terms, expected=[f.klass != NO_CLASS])


# theorem id: parameter names
SIGNATURES = {
    "T21": ("f", "a", "b", "alpha", "beta"),
    "R23": ("f", "a", "b", "alpha"),
    "C22": ("f", "a", "b"),
    "C24": ("g", "a", "b", "alpha", "beta"),
    "R25": ("f", "a", "b", "alpha", "beta", "sigma", "reading"),
    "SMF": ("f", "a", "b", "alpha", "beta", "path"),
    "MON": ("f", "a", "b"),
}

PREDICATES = {
    "T21": t21_chain,
    "R23": r23_converse,
    "C22": c22_chain,
    "C24": c24_chain,
    "R25": r25_harmonic_chain,
    "SMF": smf_chain,
    "MON": mon_chain,
}

# theorem id: hypothesis class of its function (None takes all)
CLASSES = {
    "T21": OM_DECREASING,
    "R23": None,
    "C22": OM_DECREASING,
    "C24": OM_INCREASING,
    "R25": OM_DECREASING,
    "SMF": OM_DECREASING,
    "MON": None,
}


class LogConvexSuite(Suite):
    """
    Log-convexity refinements over the function catalog.

    Attributes
    ----------
    config: HarnessConfig
    suite: string
        Suite name: logconvex
    """

    suite = suite
    theorem_ids = tuple(SIGNATURES)

    def functions(self, klass):
        """Configured catalog functions of the given class (all for None)."""
        specs = [ScalarFunctionSpec.parse(text) for text in self.config.function_specs]
        return [str(f) for f in specs if klass is None or f.klass == klass]

    def cells_for(self, theorem_id):
        config = self.config
        functions = self.functions(CLASSES[theorem_id])
        if not functions:
            logger.debug(f"no configured function fits {theorem_id}")

        cells = []
        for dim, f in product(config.dims, functions):
            if theorem_id in ("C22", "MON"):
                cells.append(Cell(theorem_id, dim, function=f))
            elif theorem_id == "R23":
                cells.extend(Cell(theorem_id, dim, alpha=alpha, function=f) for alpha in config.alphas)
            elif theorem_id in ("T21", "C24"):
                for alpha, beta in product(config.alphas, config.betas):
                    cells.append(Cell(theorem_id, dim, alpha=alpha, beta=beta, function=f))
            elif theorem_id == "SMF":
                for alpha, beta, upsilon in product(config.alphas, config.betas, config.upsilon_grid):
                    cells.append(Cell(theorem_id, dim, alpha=alpha, beta=beta, upsilon=upsilon, function=f))
            elif theorem_id == "R25":
                for alpha, beta, upsilon, reading in product(
                    config.alphas, config.betas, config.upsilon_grid, READINGS
                ):
                    cells.append(
                        Cell(
                            theorem_id,
                            dim,
                            alpha=alpha,
                            beta=beta,
                            upsilon=upsilon,
                            function=f,
                            extra=(("reading", reading),),
                        )
                    )
        return cells

    def instances_for(self, cell, rng):
        config = self.config
        f = ScalarFunctionSpec.parse(cell.function)
        name = "g" if cell.theorem_id == "C24" else "f"
        extra = dict(cell.extra)

        instances = []
        for _ in range(config.trials_per_cell):
            a = gen_posdef(cell.dim, config.eig_range, rng)
            if cell.theorem_id == "MON":
                b = PosDefMatrix(a.entries + gen_psd(cell.dim, rng, scale=config.eig_range[1]).entries)
            else:
                b = gen_posdef(cell.dim, config.eig_range, rng)
            params = {name: f, "a": a, "b": b}
            if cell.alpha is not None:
                params["alpha"] = cell.alpha
            if cell.beta is not None:
                params["beta"] = cell.beta
            if cell.theorem_id == "SMF":
                params["path"] = as_path(cell.upsilon)
            if cell.theorem_id == "R25":
                params["sigma"] = as_path(cell.upsilon)
                params["reading"] = extra["reading"]
            instances.append(TheoremInstance(cell.theorem_id, params))
        return instances



# used by Harness.suites
SUITE = LogConvexSuite
