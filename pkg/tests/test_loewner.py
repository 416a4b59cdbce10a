"""
Test Loewner order comparisons and chains.
"""

import numpy as np
import pytest

import operator_means as om

from operator_means.loewner import (
    ChainReport,
    check_chain,
    is_psd,
    loewner_leq,
    operator_norm,
    within,
)
from operator_means.spectral import DimensionError, SymMatrix, congruence
from operator_means.utils import gen_invertible, gen_posdef, gen_psd, gen_symmetric, make_rng


def test_leq_identity():
    verdict = loewner_leq(SymMatrix.identity(2), SymMatrix.identity(2))
    assert verdict.holds
    assert verdict.gap == pytest.approx(0.0)


def test_leq_incomparable():
    verdict = loewner_leq(SymMatrix.diag(0.0, 2.0), SymMatrix.diag(1.0, 1.0))
    assert not verdict.holds
    assert verdict.gap == pytest.approx(-1.0)
    assert verdict.scale == pytest.approx(2.0)
    assert verdict.normalized_gap == pytest.approx(-0.5)


def test_leq_tolerance_is_relative():
    big = SymMatrix.diag(1e6, 1e6)
    slightly_less = big - SymMatrix.diag(1e-3, 0.0)
    # gap -1e-3 against a scale of 1e6 is inside TOL_ORDER
    assert loewner_leq(big, slightly_less).holds
    assert not loewner_leq(big, slightly_less, tol=0.0).holds


def test_leq_dimension_mismatch():
    with pytest.raises(DimensionError):
        loewner_leq(SymMatrix.identity(2), SymMatrix.identity(3))


def test_chain_scalars():
    chain = check_chain([1.6, 1.8856, 2.0, 2.1213, 2.5])
    assert isinstance(chain, ChainReport)
    assert len(chain.links) == 4
    assert chain.all_hold
    assert chain.expected_hold
    assert chain.weakest_gap > 0


def test_chain_failure_and_expectation():
    chain = check_chain([1.0, 3.0, 2.0], expected=[True, False])
    assert not chain.all_hold
    # the failing link is not claimed
    assert chain.expected_hold
    assert chain.unexpected_failures() == []
    assert chain.weakest_gap == pytest.approx(-1.0 / 3.0)

    claimed = check_chain([1.0, 3.0, 2.0])
    assert claimed.unexpected_failures() == [1]


def test_chain_reversed():
    chain = check_chain([3.0, 2.0, 1.0])
    assert not chain.all_hold
    assert chain.reversed().all_hold


def test_chain_needs_two_terms():
    with pytest.raises(ValueError):
        check_chain([1.0])
    with pytest.raises(DimensionError):
        check_chain([1.0, SymMatrix.identity(2)])


def test_operator_norm():
    assert operator_norm(SymMatrix([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(3.0)
    assert operator_norm(SymMatrix.diag(-4.0, 1.0)) == pytest.approx(4.0)


def test_is_psd():
    assert is_psd(SymMatrix([[1.0, 1.0], [1.0, 1.0]]))
    assert not is_psd(SymMatrix.diag(1.0, -1.0))


def test_within():
    assert within(1e-13, om.ATOL_EXACT).holds
    assert not within(2e-12, om.ATOL_EXACT).holds
    assert within(0.0, 0.0).holds


def test_to_dict():
    verdict = loewner_leq(SymMatrix(1.0), SymMatrix(2.0))
    assert verdict.to_dict() == {"gap": 1.0, "scale": 2.0, "holds": True}
    assert np.isfinite(verdict.normalized_gap)


def test_transitivity():
    rng = make_rng(70)
    for dim in [1, 2, 3, 5, 8]:
        for _ in range(20):
            x = gen_posdef(dim, (0.1, 10.0), rng)
            y = x + gen_psd(dim, rng)
            z = y + gen_psd(dim, rng)
            assert loewner_leq(x, y).holds
            assert loewner_leq(y, z).holds
            assert loewner_leq(x, z).holds


def test_congruence_preserves_order():
    rng = make_rng(71)
    for dim in [1, 2, 3, 5, 8]:
        for _ in range(20):
            x = gen_posdef(dim, (0.1, 10.0), rng)
            y = x + gen_psd(dim, rng)
            c = gen_invertible(dim, rng)
            assert loewner_leq(congruence(c, x), congruence(c, y)).holds


def test_antisymmetry():
    rng = make_rng(72)
    for dim in [1, 2, 3, 5, 8]:
        for _ in range(20):
            x = gen_posdef(dim, (0.1, 10.0), rng)
            # both directions hold only up to the tolerance
            y = x + gen_symmetric(dim, rng) * 1e-12
            forward, backward = loewner_leq(x, y), loewner_leq(y, x)
            assert forward.holds and backward.holds
            assert operator_norm(x - y) <= om.TOL_ORDER * forward.scale

            bigger = x + gen_psd(dim, rng) + SymMatrix.identity(dim) * 0.1
            assert loewner_leq(x, bigger).holds
            assert not loewner_leq(bigger, x).holds
