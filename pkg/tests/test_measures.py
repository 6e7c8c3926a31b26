import numpy as np
import pytest

from mincorr.measurements import leaves_marginal_invariant
from mincorr.measures import (
    disturbance,
    entropic_discord_two_sided,
    gmqd_one_sided,
    gmqd_two_sided,
    min_one_sided,
    min_pure_closed_form,
    min_two_sided,
    mutual_information,
)
from mincorr.optimize import OptimizerOptions
from mincorr.states import (
    ClassicalSpectrum,
    DensityMatrix,
    bell_diagonal,
    bell_state,
    classical_state,
    cq_state,
    isotropic,
    max_entangled_mixed,
    max_entangled_vector,
    pure_state,
    random_density,
    random_pure,
    werner,
)

FAST = OptimizerOptions(starts=8)


def werner_n_ab(m, x):
    return (m * x - 1) ** 2 / (m**2 * (m**2 - 1))


def isotropic_n_ab(m, x):
    c = (m**2 * x - 1) / (m**2 - 1)
    return c**2 * (1 - 1 / m**2)


def test_bell_values():
    rho = bell_state()
    assert min_one_sided(rho, "A", FAST).value == pytest.approx(0.5, abs=1e-9)
    assert min_one_sided(rho, "B", FAST).value == pytest.approx(0.5, abs=1e-9)
    # mutually unbiased local bases dephase the Bell state completely
    assert min_two_sided(rho, FAST).value == pytest.approx(0.75, abs=1e-8)
    assert gmqd_one_sided(rho, "A", FAST).value == pytest.approx(0.5, abs=1e-8)
    assert gmqd_two_sided(rho, FAST).value == pytest.approx(0.5, abs=1e-8)


def test_bell_entropic_discord_is_one_bit():
    res = entropic_discord_two_sided(bell_state(), FAST)
    assert res.value == pytest.approx(1.0, abs=1e-6)
    assert res.diagnostics["mutual_information"] == pytest.approx(2.0)


@pytest.mark.parametrize("dims,seed", [((2, 2), 0), ((2, 3), 1), ((3, 3), 2)])
def test_nondegenerate_pure_states_hit_closed_form(dims, seed):
    psi = random_pure(dims, seed=seed)
    ref = min_pure_closed_form(psi)
    for res in (min_one_sided(psi, "A"), min_one_sided(psi, "B"), min_two_sided(psi)):
        assert res.method == "closed_form" and res.bound == "exact"
        assert res.value == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize("m", [2, 3])
def test_max_entangled_two_sided_value(m):
    psi = pure_state(max_entangled_vector(m), (m, m))
    assert min_one_sided(psi, "A", FAST).value == pytest.approx((m - 1) / m, abs=1e-8)
    assert min_two_sided(psi, FAST).value == pytest.approx(1 - 1 / m**2, abs=1e-6)


def test_max_entangled_mixed_one_sided_value():
    p = np.array([0.6, 0.4])
    rho = max_entangled_mixed(2, 4, p)
    assert min_one_sided(rho, "A", FAST).value == pytest.approx(0.5 * np.sum(p**2), abs=1e-9)


@pytest.mark.parametrize("m,x", [(2, 0.0), (2, 0.9), (3, 0.2), (3, 0.36)])
def test_werner_matches_derived_formula(m, x):
    assert min_two_sided(werner(m, x), FAST).value == pytest.approx(werner_n_ab(m, x), abs=1e-9)


@pytest.mark.parametrize("m,x", [(2, 0.6), (3, 0.05), (3, 0.5)])
def test_isotropic_matches_derived_formula(m, x):
    assert min_two_sided(isotropic(m, x), FAST).value == pytest.approx(isotropic_n_ab(m, x), abs=1e-8)


@pytest.mark.parametrize("c", [(0.5, 0.3, 0.1), (-0.2, 0.6, 0.4), (0.0, 0.0, 0.7)])
def test_bell_diagonal_closed_forms(c):
    rho = bell_diagonal(c)
    c2 = np.square(c)
    assert min_two_sided(rho, FAST).value == pytest.approx(c2.sum() / 4, abs=1e-8)
    assert gmqd_two_sided(rho, FAST).value == pytest.approx((c2.sum() - c2.max()) / 4, abs=1e-8)
    assert gmqd_one_sided(rho, "A", FAST).value == pytest.approx((c2.sum() - c2.max()) / 4, abs=1e-8)


def test_consistent_classical_state_is_zero_everywhere():
    rho = classical_state(ClassicalSpectrum(np.array([[0.4, 0.2], [0.3, 0.1]])))
    for res in (min_one_sided(rho, "A"), min_two_sided(rho), gmqd_two_sided(rho, FAST),
                entropic_discord_two_sided(rho, FAST)):
        assert res.value < 1e-10


def test_orderings_on_random_states():
    for seed in range(5):
        rho = random_density((2, 3), seed=seed)
        n_a, n_ab = min_one_sided(rho, "A").value, min_two_sided(rho).value
        d_a, d_ab = gmqd_one_sided(rho, "A", FAST).value, gmqd_two_sided(rho, FAST).value
        assert n_ab >= n_a - 1e-12
        assert d_ab >= d_a - 1e-8
        assert n_ab >= d_ab - 1e-8
        assert n_a >= d_a - 1e-8


def test_argmeasure_is_feasible_and_reproduces_value():
    rho = max_entangled_mixed(2, 4, [0.7, 0.3])
    res = min_two_sided(rho, FAST)
    assert leaves_marginal_invariant(rho, res.argmeasure)
    assert disturbance(rho, res.argmeasure) == res.value
    assert res.bound == "lower"


def test_results_are_deterministic():
    rho = werner(3, 0.7)
    a, b = min_two_sided(rho, FAST), min_two_sided(rho, FAST)
    assert a.value == b.value
    assert a.to_dict() == b.to_dict()


def test_mutual_information_of_product_is_zero():
    rho = DensityMatrix(np.kron(np.diag([0.3, 0.7]), np.diag([0.5, 0.5])), (2, 2))
    assert mutual_information(rho) == pytest.approx(0.0, abs=1e-12)


def test_cq_state_has_zero_one_sided_gmqd():
    rho = cq_state([0.5, 0.5], [np.diag([0.8, 0.2]), np.array([[0.5, 0.3], [0.3, 0.5]])])
    assert gmqd_one_sided(rho, "A", FAST).value < 1e-10
