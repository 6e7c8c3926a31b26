import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mincorr.algebra import haar_unitary, hs_inner
from mincorr.errors import DimensionError, ValidationError
from mincorr.measurements import (
    ProjectiveMeasurement,
    apply_measurement,
    apply_one_sided,
    feasible_family,
    hermitian_from_params,
    leaves_marginal_invariant,
    realize_measurement,
    unconstrained_family,
    unitary_from_params,
)
from mincorr.states import bell_state, cq_state, random_density


def _rng(seed):
    return np.random.default_rng(seed)


def _explicit_one_sided(rho, U):
    m, n = rho.dims
    out = np.zeros_like(rho.matrix)
    for k in range(m):
        P = np.kron(np.outer(U[:, k], U[:, k].conj()), np.eye(n))
        out += P @ rho.matrix @ P
    return out


def test_one_sided_matches_projector_sum():
    rho = random_density((3, 2), seed=2)
    U = haar_unitary(3, _rng(0))
    got = apply_one_sided(rho, ProjectiveMeasurement.one_sided("A", U)).matrix
    np.testing.assert_allclose(got, _explicit_one_sided(rho, U), atol=1e-13)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_pinching_is_idempotent_and_hs_orthogonal(seed):
    rng = _rng(seed)
    rho = random_density((2, 3), seed=seed)
    meas = ProjectiveMeasurement.two_sided(haar_unitary(2, rng), haar_unitary(3, rng))
    once = apply_measurement(rho, meas)
    twice = apply_measurement(once, meas)
    np.testing.assert_allclose(twice.matrix, once.matrix, atol=1e-13)
    resid = rho.matrix - once.matrix
    assert abs(hs_inner(resid, once.matrix)) < 1e-12


def test_two_sided_result_is_classical_in_product_basis():
    rng = _rng(4)
    UA, UB = haar_unitary(2, rng), haar_unitary(2, rng)
    out = apply_measurement(bell_state(), ProjectiveMeasurement.two_sided(UA, UB)).matrix
    W = np.kron(UA, UB)
    D = W.conj().T @ out @ W
    np.testing.assert_allclose(D - np.diag(np.diag(D)), 0, atol=1e-14)


def test_measurement_rejects_non_orthonormal_and_wrong_dims():
    with pytest.raises(ValidationError):
        ProjectiveMeasurement.one_sided("A", np.array([[1, 1], [0, 1]]))
    meas = ProjectiveMeasurement.one_sided("A", np.eye(3))
    with pytest.raises(DimensionError):
        apply_measurement(bell_state(), meas)


def test_feasible_family_groups_and_parameter_count():
    fam = feasible_family(np.diag([0.4, 0.4, 0.2]), 1e-8, "A")
    assert fam.group_dims() == [2, 1]
    assert fam.free_parameter_count == 4
    assert not fam.is_singleton
    assert feasible_family(np.diag([0.5, 0.3, 0.2])).is_singleton


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_every_realized_basis_is_feasible(seed):
    rng = _rng(seed)
    # conditional states differ, but the A marginal is diag(0.4, 0.4, 0.2)
    rho_B = [random_density((1, 2), seed=seed + k).matrix for k in range(3)]
    rho = cq_state([0.4, 0.4, 0.2], rho_B, haar_unitary(3, rng))
    fam = feasible_family(rho.reduced("A"), 1e-8, "A")
    assert fam.group_dims() == [2, 1]
    U = realize_measurement(fam, rng.uniform(-np.pi, np.pi, fam.free_parameter_count))
    assert leaves_marginal_invariant(rho, ProjectiveMeasurement.one_sided("A", U))


def test_infeasible_basis_is_detected():
    rho = random_density((2, 2), seed=1)
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert not leaves_marginal_invariant(rho, ProjectiveMeasurement.one_sided("A", H))


def test_parameterization():
    G = hermitian_from_params(np.arange(9.0), 3)
    np.testing.assert_allclose(G, G.conj().T)
    np.testing.assert_allclose(np.diag(G).real, [0, 1, 2])
    assert G[0, 1] == 3 + 4j
    U = unitary_from_params(np.arange(9.0), 3)
    np.testing.assert_allclose(U @ U.conj().T, np.eye(3), atol=1e-13)
    np.testing.assert_allclose(unitary_from_params(np.zeros(4), 2), np.eye(2))


def test_unconstrained_family_reaches_base_at_zero():
    base = haar_unitary(3, _rng(7))
    fam = unconstrained_family(3, base)
    assert fam.free_parameter_count == 9
    np.testing.assert_allclose(realize_measurement(fam, np.zeros(9)), base, atol=1e-14)
    with pytest.raises(ValueError):
        realize_measurement(fam, np.zeros(4))


@pytest.mark.parametrize("d", [2, 3])
def test_unitary_matches_matrix_exponential(d):
    from scipy.linalg import expm
    rng = _rng(d)
    for _ in range(20):
        p = 2 * rng.standard_normal(d * d)
        np.testing.assert_allclose(unitary_from_params(p, d), expm(1j * hermitian_from_params(p, d)),
                                   atol=1e-12)
