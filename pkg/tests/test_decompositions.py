import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mincorr.algebra import haar_unitary, hs_inner
from mincorr.decompositions import (
    block_decomposition,
    correlation_matrix,
    gell_mann_basis,
    gmqd_lower_bound,
    measurement_matrices,
    pinch_objective_from_matrices,
)
from mincorr.errors import DimensionError
from mincorr.measurements import ProjectiveMeasurement
from mincorr.measures import disturbance
from mincorr.states import bell_state, maximally_mixed, random_density


@pytest.mark.parametrize("d", [2, 3, 4])
def test_gell_mann_is_orthonormal_hermitian(d):
    G = gell_mann_basis(d)
    assert G.shape == (d * d, d, d)
    gram = np.array([[hs_inner(a, b) for b in G] for a in G])
    np.testing.assert_allclose(gram, np.eye(d * d), atol=1e-14)
    for g in G:
        np.testing.assert_allclose(g, g.conj().T)


def test_gell_mann_qubit_is_scaled_pauli():
    G = gell_mann_basis(2) * np.sqrt(2)
    np.testing.assert_allclose(G[1], [[0, 1], [1, 0]])
    np.testing.assert_allclose(G[2], [[0, -1j], [1j, 0]])
    np.testing.assert_allclose(G[3], [[1, 0], [0, -1]])


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 3), st.integers(2, 3), st.integers(0, 10_000))
def test_correlation_matrix_round_trip(m, n, seed):
    rho = random_density((m, n), seed=seed)
    dec = correlation_matrix(rho)
    np.testing.assert_allclose(dec.reconstruct(), rho.matrix, atol=1e-13)
    assert dec.total_correlation() == pytest.approx(rho.purity())


def test_product_state_correlation_matrix_is_rank_one():
    C = correlation_matrix(maximally_mixed(2, 3)).C
    assert np.linalg.matrix_rank(C, tol=1e-12) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(2, 3), st.integers(0, 10_000))
def test_matrix_formulas_match_explicit_disturbance(m, n, seed):
    rng = np.random.default_rng(seed)
    rho = random_density((m, n), seed=seed)
    dec = correlation_matrix(rho)
    UA, UB = haar_unitary(m, rng), haar_unitary(n, rng)
    for mode, meas in (("one_sided_A", ProjectiveMeasurement.one_sided("A", UA)),
                       ("one_sided_B", ProjectiveMeasurement.one_sided("B", UB)),
                       ("two_sided", ProjectiveMeasurement.two_sided(UA, UB))):
        mm = measurement_matrices(meas, dec)
        got = pinch_objective_from_matrices(dec.C, mm.A, mm.B, mode)
        assert got == pytest.approx(disturbance(rho, meas), abs=1e-12)


def test_measurement_matrices_are_row_orthonormal():
    dec = correlation_matrix(random_density((3, 2), seed=0))
    mm = measurement_matrices(ProjectiveMeasurement.one_sided("A", haar_unitary(3, np.random.default_rng(1))), dec)
    np.testing.assert_allclose(mm.A @ mm.A.T, np.eye(3), atol=1e-13)


def test_objective_dimension_checks():
    with pytest.raises(DimensionError):
        pinch_objective_from_matrices(np.zeros((4, 4)), np.zeros((2, 9)), None, "one_sided_A")


def test_lower_bound_for_bell_state():
    lb = gmqd_lower_bound(bell_state(), "two_sided")
    assert lb.total == pytest.approx(1.0)
    assert lb.value == pytest.approx(0.5)
    assert not lb.vacuous


def test_lower_bound_is_exactly_zero_for_product():
    lb = gmqd_lower_bound(maximally_mixed(2, 2), "two_sided")
    assert lb.value == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("direction", ["by_A", "by_B"])
def test_block_decomposition_reassembles(direction):
    rho = random_density((2, 3), seed=3)
    bd = block_decomposition(rho, direction)
    np.testing.assert_array_equal(bd.reassemble(), rho.matrix)


def test_block_shapes():
    rho = random_density((2, 3), seed=3)
    assert block_decomposition(rho, "by_A").blocks.shape == (2, 2, 3, 3)
    assert block_decomposition(rho, "by_B").blocks.shape == (3, 3, 2, 2)
    with pytest.raises(ValueError):
        block_decomposition(rho, "sideways")
