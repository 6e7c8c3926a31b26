import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mincorr.algebra import (
    eig_hermitian,
    entropy_of_spectrum,
    group_values,
    haar_unitary,
    hs_inner,
    hs_norm_sq,
    is_orthonormal,
    partial_trace,
    partial_transpose,
    schmidt_decompose,
    von_neumann_entropy,
)
from mincorr.errors import DimensionError, HermiticityError
from mincorr.states import bell_state, random_density, random_pure

dims_st = st.tuples(st.integers(2, 3), st.integers(2, 4))


def test_partial_trace_of_product():
    a = np.diag([0.3, 0.7])
    b = np.diag([0.1, 0.2, 0.7])
    M = np.kron(a, b)
    np.testing.assert_allclose(partial_trace(M, (2, 3), "B"), a)
    np.testing.assert_allclose(partial_trace(M, (2, 3), "A"), b)


def test_partial_trace_bell_is_maximally_mixed():
    rho = bell_state().matrix
    np.testing.assert_allclose(partial_trace(rho, (2, 2), "A"), np.eye(2) / 2)
    np.testing.assert_allclose(partial_trace(rho, (2, 2), "B"), np.eye(2) / 2)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(6) / 6, (2, 2), "A")


@settings(max_examples=30, deadline=None)
@given(dims_st, st.integers(0, 10_000))
def test_partial_transpose_is_involution(dims, seed):
    rho = random_density(dims, seed=seed).matrix
    for side in "AB":
        twice = partial_transpose(partial_transpose(rho, dims, side), dims, side)
        assert np.array_equal(twice, rho)


def test_partial_transpose_bell_has_negative_eigenvalue():
    w = np.linalg.eigvalsh(partial_transpose(bell_state().matrix, (2, 2), "B"))
    assert w[0] == pytest.approx(-0.5)


@settings(max_examples=30, deadline=None)
@given(dims_st, st.integers(0, 10_000))
def test_schmidt_reconstructs_vector(dims, seed):
    psi = random_pure(dims, seed=seed).vector
    lam, left, right = schmidt_decompose(psi, dims)
    rebuilt = np.einsum("k,ik,jk->ij", lam, left, right).ravel()
    np.testing.assert_allclose(rebuilt, psi, atol=1e-12)
    assert np.sum(lam**2) == pytest.approx(1.0)
    assert np.all(np.diff(lam) <= 1e-15)


def test_schmidt_product_has_one_coefficient():
    psi = np.kron([1, 0], [0, 1, 0])
    lam, _, _ = schmidt_decompose(psi, (2, 3))
    np.testing.assert_allclose(lam, [1.0])


def test_eig_hermitian_groups_degenerate_values():
    H = np.diag([0.25, 0.5, 0.25, 0.0])
    es = eig_hermitian(H, 1e-8)
    np.testing.assert_allclose(es.eigenvalues, [0.5, 0.25, 0.25, 0.0])
    assert [len(g) for g in es.groups] == [1, 2, 1]
    np.testing.assert_allclose(es.reconstruct(), H, atol=1e-14)


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(HermiticityError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_group_values_chains_within_tolerance():
    assert group_values([1.0, 1.0 + 5e-9, 0.5], 1e-8) == ((0, 1), (2,))


def test_hs_helpers():
    X = np.array([[1, 1j], [0, 2]])
    assert hs_norm_sq(X) == pytest.approx(6.0)
    assert hs_inner(X, X) == pytest.approx(6.0)


def test_entropy():
    assert entropy_of_spectrum([0.5, 0.5]) == pytest.approx(1.0)
    assert entropy_of_spectrum([1.0, 0.0]) == 0.0
    assert von_neumann_entropy(bell_state()) == pytest.approx(0.0, abs=1e-12)


def test_haar_unitary_is_unitary_and_seeded():
    U1 = haar_unitary(4, np.random.default_rng(3))
    U2 = haar_unitary(4, np.random.default_rng(3))
    assert is_orthonormal(U1)
    assert np.array_equal(U1, U2)
