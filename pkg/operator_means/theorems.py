"""
Theorem instances and their gap reports.

A `TheoremInstance` binds a theorem id to concrete parameters. Evaluating it
runs the predicate registered by the suite that owns the id and wraps the
resulting chain in a `GapReport`.
"""

import logging

from dataclasses import dataclass, field

import numpy as np

import operator_means as om

from operator_means.functions import ScalarFunctionSpec
from operator_means.loewner import ChainReport
from operator_means.maps import PositiveLinearMapSpec
from operator_means.means import PathSpec
from operator_means.spectral import SymMatrix
from operator_means.utils import SpecSyntaxError


logger = logging.getLogger(__name__)

# parameters that take a catalog function and so a hypothesis class
HYPOTHESIS_PARAMS = ("f", "g")


def registry():
    """Map every known theorem id to the suite module that owns it."""
    owners = {}
    for suite in om._SUITES:
        for theorem_id in suite.SIGNATURES:
            owners[theorem_id] = suite
    return owners


def known_ids():
    """Theorem ids in canonical order (suite order, then declaration order)."""
    return list(registry())


def parse_theorem_ids(text):
    """Parse ``"T21,T25"`` or ``"all"`` into a list of theorem ids.

    Raises
    ------
    SpecSyntaxError
        Pointing at the first unknown id.
    """
    if isinstance(text, (list, tuple)):
        text = ",".join(text)
    text = text.strip()
    if not text:
        return []
    if text == "all":
        return known_ids()
    ids = []
    position = 0
    known = registry()
    for item in text.split(","):
        theorem_id = item.strip().upper()
        if theorem_id not in known:
            raise SpecSyntaxError(f"unknown theorem id {item.strip()!r}", text, position)
        if theorem_id not in ids:
            ids.append(theorem_id)
        position += len(item) + 1
    return ids


def _describe(value):
    """JSON-friendly form of a scalar parameter, None for matrix inputs."""
    if isinstance(value, (ScalarFunctionSpec, PositiveLinearMapSpec)):
        return str(value)
    if isinstance(value, PathSpec):
        return value.upsilon
    if isinstance(value, (SymMatrix, np.ndarray, list, tuple)):
        return None
    if isinstance(value, (bool, str)):
        return value
    return float(value)


def _literal(value):
    if isinstance(value, SymMatrix):
        return value.to_dict()
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], SymMatrix):
        return [v.to_dict() for v in value]
    return None


def _max_dim(value):
    if isinstance(value, SymMatrix):
        return value.dim
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], SymMatrix):
        return max(v.dim for v in value)
    return 0


@dataclass(frozen=True)
class GapReport:
    """Loewner gaps of one evaluated theorem instance.

    Attributes
    ----------
    theorem_id: str
    params: dict
        Scalar parameters (weights, path, function, map, reading).
    chain: ChainReport
    inputs: dict
        The matrix operands, kept so that failures can be reproduced.
    """

    theorem_id: str
    params: dict
    chain: ChainReport
    inputs: dict = field(default_factory=dict, repr=False)

    @property
    def links(self):
        return self.chain.links

    @property
    def all_hold(self):
        return self.chain.all_hold

    @property
    def expected_hold(self):
        return self.chain.expected_hold

    @property
    def weakest_gap(self):
        return self.chain.weakest_gap

    @property
    def weakest_expected_gap(self):
        return self.chain.weakest_expected_gap

    @property
    def dim(self):
        """Largest dimension among inputs and chain terms."""
        dims = [_max_dim(v) for v in self.inputs.values()] + [t.dim for t in self.chain.terms]
        return max(dims, default=0)

    def to_dict(self, include_terms=None):
        """Report dict.

        Parameters
        ----------
        include_terms: bool, optional
            Write the inputs and chain terms as matrix literals. By default
            they are written when `dim` is at most `TERMS_MAX_DIM`.
        """
        if include_terms is None:
            include_terms = self.dim <= om.TERMS_MAX_DIM
        out = {
            "theorem_id": self.theorem_id,
            "params": self.params,
            "links": [
                dict(link.to_dict(), expected=exp)
                for link, exp in zip(self.chain.links, self.chain.expected)
            ],
            "all_hold": self.all_hold,
            "expected_hold": self.expected_hold,
            "weakest_gap": self.weakest_gap,
            "weakest_expected_gap": self.weakest_expected_gap,
        }
        if include_terms:
            out["inputs"] = {k: _literal(v) for k, v in self.inputs.items()}
            if self.chain.terms:
                out["terms"] = [t.to_dict() for t in self.chain.terms]
        return out


@dataclass(frozen=True, eq=False)
class TheoremInstance:
    """A theorem id with the parameters of one evaluation.

    Parameters
    ----------
    theorem_id: str
        One of `known_ids()`.
    params: dict
        Exactly the parameter names in the owning suite's signature for this
        id, e.g. ``f, a, b, alpha, beta`` for ``T21``.
    bypass_hypothesis: bool, optional
        Let functions outside the declared class through. Only sensitivity
        runs set this.

    Raises
    ------
    ValueError
        If the id is unknown or the parameter names do not match.
    """

    theorem_id: str
    params: dict
    bypass_hypothesis: bool = False

    def __post_init__(self):
        owners = registry()
        if self.theorem_id not in owners:
            raise ValueError(f"unknown theorem id {self.theorem_id!r}; choose from {list(owners)}")
        signature = owners[self.theorem_id].SIGNATURES[self.theorem_id]
        missing = set(signature) - set(self.params)
        unknown = set(self.params) - set(signature)
        if missing or unknown:
            raise ValueError(
                f"{self.theorem_id} takes parameters {signature}; "
                f"missing {sorted(missing)}, unknown {sorted(unknown)}"
            )

    @property
    def predicate(self):
        """The suite function evaluating this theorem."""
        return registry()[self.theorem_id].PREDICATES[self.theorem_id]

    def describe(self):
        """Scalar parameters for the report."""
        out = {}
        for name, value in self.params.items():
            described = _describe(value)
            if described is not None:
                out[name] = described
        return out

    def evaluate(self):
        """Run the predicate.

        Returns
        -------
        GapReport
        """
        kwargs = dict(self.params)
        if any(name in kwargs for name in HYPOTHESIS_PARAMS):
            kwargs["bypass"] = self.bypass_hypothesis
        chain = self.predicate(**kwargs)

        report = GapReport(
            theorem_id=self.theorem_id,
            params=self.describe(),
            chain=chain,
            inputs={k: v for k, v in self.params.items() if _literal(v) is not None},
        )
        failures = chain.unexpected_failures()
        if failures:
            logger.warning(
                f"{self.theorem_id} {report.params}: links {failures} fail, weakest gap {report.weakest_gap:.3e}"
            )
        outside = [i for i, (link, exp) in enumerate(zip(chain.links, chain.expected)) if not exp and not link.holds]
        if outside:
            logger.warning(
                f"{self.theorem_id} {report.params}: links {outside} outside their justified range are violated"
            )
        return report
