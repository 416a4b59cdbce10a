"""
Test the symmetric matrix types and the spectral calculus.
"""

import numpy as np
import pytest

import operator_means as om

from operator_means.spectral import (
    AsymmetryError,
    DimensionError,
    DomainError,
    NotPositiveDefiniteError,
    PosDefMatrix,
    SingularMatrixError,
    SymMatrix,
    apply_scalar,
    congruence,
    eigh,
    frac_power,
)
from operator_means.utils import gen_posdef, make_rng


M2 = [[2.0, 1.0], [1.0, 2.0]]


def test_symmatrix_symmetrizes_roundoff():
    m = SymMatrix([[1.0, 2.0], [2.0 + 1e-12, 3.0]])
    assert (m.entries == m.entries.T).all()


def test_symmatrix_rejects_asymmetric():
    with pytest.raises(AsymmetryError):
        SymMatrix([[1.0, 2.0], [0.0, 1.0]])


def test_symmatrix_dimensions():
    assert SymMatrix(4.0).dim == 1
    with pytest.raises(DimensionError):
        SymMatrix(np.ones((2, 3)))
    with pytest.raises(DimensionError):
        SymMatrix(np.eye(om.MAX_DIM + 1))


def test_symmatrix_is_read_only():
    m = SymMatrix(M2)
    with pytest.raises(ValueError):
        m.entries[0, 0] = 5.0


def test_posdef_floor():
    PosDefMatrix(M2)
    with pytest.raises(NotPositiveDefiniteError):
        PosDefMatrix([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(NotPositiveDefiniteError):
        PosDefMatrix(np.diag([1.0, 1e-12]))


def test_literal():
    m = SymMatrix.from_dict({"dim": 2, "rows": M2})
    assert m.to_dict() == {"dim": 2, "rows": M2}
    with pytest.raises(DimensionError):
        SymMatrix.from_dict({"dim": 3, "rows": M2})


def test_eigh_2x2():
    system = eigh(SymMatrix(M2))
    assert np.allclose(system.eigenvalues, [1.0, 3.0])
    s = 1 / np.sqrt(2)
    # columns (1, -1)/sqrt(2) and (1, 1)/sqrt(2)
    assert np.allclose(system.basis, [[s, s], [-s, s]])


def test_eigh_reconstructs():
    rng = make_rng(3)
    for dim in [1, 2, 5, 8]:
        m = gen_posdef(dim, (0.1, 10.0), rng)
        system = eigh(m)
        assert m.allclose(system.reconstruct())
        assert np.allclose(system.basis.T @ system.basis, np.eye(dim), atol=1e-12)
        assert (np.diff(system.eigenvalues) >= 0).all()


def test_eigh_sign_convention():
    rng = make_rng(4)
    system = eigh(gen_posdef(4, (0.1, 10.0), rng))
    for column in system.basis.T:
        assert column[np.argmax(np.abs(column))] > 0


def test_apply_scalar_sqrt():
    root = apply_scalar(SymMatrix(M2), np.sqrt)
    expected = np.array([[np.sqrt(3) + 1, np.sqrt(3) - 1], [np.sqrt(3) - 1, np.sqrt(3) + 1]]) / 2
    assert np.allclose(root.entries, expected, atol=1e-12)
    assert np.allclose(root.entries @ root.entries, M2)


def test_apply_scalar_scalar_function():
    # a function that only takes scalars is applied eigenvalue by eigenvalue
    out = apply_scalar(SymMatrix.diag(1.0, 4.0), lambda t: float(np.sqrt(t)))
    assert np.allclose(out.entries, np.diag([1.0, 2.0]))


def test_apply_scalar_domain():
    with pytest.raises(DomainError):
        apply_scalar(SymMatrix.diag(-1.0, 1.0), np.log)


def test_congruence_rotation():
    c = [[0.0, -1.0], [1.0, 0.0]]
    out = congruence(c, SymMatrix.diag(1.0, 3.0))
    assert np.allclose(out.entries, np.diag([3.0, 1.0]))


def test_congruence_errors():
    with pytest.raises(SingularMatrixError):
        congruence([[1.0, 1.0], [1.0, 1.0]], SymMatrix(M2))
    with pytest.raises(DimensionError):
        congruence(np.eye(3), SymMatrix(M2))


def test_congruence_keeps_posdef():
    assert isinstance(congruence(np.eye(2), PosDefMatrix(M2)), PosDefMatrix)


def test_frac_power():
    m = PosDefMatrix(M2)
    inverse = frac_power(m, -1)
    assert np.allclose(inverse.entries, np.array([[2.0, -1.0], [-1.0, 2.0]]) / 3)
    assert frac_power(m, 1) is m
    assert np.allclose(frac_power(m, 0).entries, np.eye(2))
    half = frac_power(m, 0.5)
    assert np.allclose(half.entries @ half.entries, M2)


def test_powers_commute():
    rng = make_rng(80)
    exponents = [-1.0, -0.5, 0.0, 0.5, 1.0]
    for dim in range(2, 7):
        m = gen_posdef(dim, (0.1, 10.0), rng)
        for s in exponents:
            for t in exponents:
                lhs = frac_power(m, s + t).entries
                rhs = frac_power(m, s).entries @ frac_power(m, t).entries
                assert np.linalg.norm(lhs - rhs, ord=2) <= 1e-10 * np.linalg.norm(lhs, ord=2)


def test_apply_scalar_maps_eigenvalues():
    rng = make_rng(81)
    functions = [np.sqrt, np.log, lambda t: t ** 2 + 1]
    for dim in range(1, 7):
        m = gen_posdef(dim, (0.1, 10.0), rng)
        eigenvalues = np.linalg.eigvalsh(m.entries)
        for f in functions:
            expected = np.sort(f(eigenvalues))
            got = np.linalg.eigvalsh(apply_scalar(m, f).entries)
            assert np.allclose(got, expected, rtol=0, atol=1e-10 * max(1.0, np.abs(expected).max()))
