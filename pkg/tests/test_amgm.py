"""
Test the harmonic-geometric-arithmetic refinement chains.
"""

import numpy as np

from operator_means import HarnessConfig
from operator_means.spectral import PosDefMatrix
from operator_means.suites import amgm
from operator_means.utils import gen_posdef, make_rng


def test_t25_scalar():
    chain = amgm.t25_amgh_chain(PosDefMatrix(4.0), PosDefMatrix(1.0), 0.5, 0.5)
    values = [float(t.entries[0, 0]) for t in chain.terms]
    assert np.allclose(values, [1.6, 1.8856181, 2.0, 2.1213203, 2.5], atol=1e-6)
    assert chain.all_hold


def test_t25_matrix_with_identity():
    a = PosDefMatrix([[2.0, 1.0], [1.0, 2.0]])
    chain = amgm.t25_amgh_chain(a, PosDefMatrix.identity(2), 0.5, 0.25)
    assert len(chain.links) == 4
    assert chain.all_hold


def test_t25_random_grid():
    rng = make_rng(21)
    for dim in [2, 3, 5]:
        a, b = gen_posdef(dim, (0.1, 10.0), rng), gen_posdef(dim, (0.1, 10.0), rng)
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0]:
            for beta in [0.0, 0.5, 1.0]:
                assert amgm.t25_amgh_chain(a, b, alpha, beta).all_hold


def test_t25_endpoint_weights_collapse():
    rng = make_rng(22)
    a, b = gen_posdef(3, (0.1, 10.0), rng), gen_posdef(3, (0.1, 10.0), rng)
    chain = amgm.t25_amgh_chain(a, b, 0.0, 0.5)
    # every term is A
    assert all(term.allclose(a, rtol=1e-9) for term in chain.terms)


def test_sma_paths():
    rng = make_rng(23)
    a, b = gen_posdef(3, (0.1, 10.0), rng), gen_posdef(3, (0.1, 10.0), rng)
    for path in [-1.0, -0.5, 0.0, 0.5, 1.0]:
        chain = amgm.sma_chain(a, b, 0.3, 0.7, path)
        assert len(chain.terms) == 3
        assert chain.all_hold


def test_sma_arithmetic_is_tight():
    rng = make_rng(24)
    a, b = gen_posdef(2, (0.1, 10.0), rng), gen_posdef(2, (0.1, 10.0), rng)
    chain = amgm.sma_chain(a, b, 0.4, 0.6, 1.0)
    assert all(abs(link.gap) < 1e-12 for link in chain.links)


def test_suite():
    config = HarnessConfig.from_kwargs(
        theorem_ids="T25,SMA", dims=[1, 2], weight_grid=[0.5], upsilon_grid=[-1, 0], trials_per_cell=2
    )
    suite = amgm.AmGmSuite(config)
    assert len(suite.cells) == 2 + 4
    results = suite.reports()
    assert all(r.expected_hold for _, rs in results for r in rs)
    assert len(suite.meta) == 6
    assert (suite.meta.failed == 0).all()
