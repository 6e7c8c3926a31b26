import numpy as np
import pytest

from mincorr.errors import ValidationError
from mincorr.optimize import OptimizerOptions, multistart


def test_finds_maximum_of_smooth_function():
    out = multistart(lambda x: -np.sum((x - 0.3) ** 2), 3, OptimizerOptions(starts=4))
    np.testing.assert_allclose(out.params, 0.3, atol=1e-4)
    assert out.value == pytest.approx(0.0, abs=1e-8)


def test_minimize_mode():
    out = multistart(lambda x: np.sum(np.cos(x)), 2, OptimizerOptions(starts=6), maximize=False)
    assert out.value == pytest.approx(-2.0, abs=1e-8)


def test_zero_parameters_evaluates_once():
    calls = []
    out = multistart(lambda x: calls.append(1) or 1.5, 0, OptimizerOptions())
    assert out.value == 1.5 and len(calls) == 1 and out.evaluations == 1


def test_deterministic_per_seed():
    f = lambda x: np.sin(3 * x[0]) * np.cos(2 * x[1])
    a = multistart(f, 2, OptimizerOptions(starts=5, seed=11))
    b = multistart(f, 2, OptimizerOptions(starts=5, seed=11))
    assert a.value == b.value and np.array_equal(a.params, b.params)
    assert a.start_values == b.start_values


def test_ties_resolve_to_lowest_start():
    out = multistart(lambda x: 1.0, 2, OptimizerOptions(starts=5))
    assert out.best_start == 0


def test_trace_is_monotone():
    out = multistart(lambda x: np.sin(x[0]) + np.sin(2 * x[1]), 2, OptimizerOptions(starts=8))
    assert all(b >= a for a, b in zip(out.trace, out.trace[1:]))
    assert out.diagnostics()["starts"] == 8


@pytest.mark.parametrize("kwargs", [{"starts": 0}, {"max_iterations": 0},
                                    {"convergence_tol": 0.0}, {"seed": -1}])
def test_option_validation(kwargs):
    with pytest.raises(ValidationError):
        OptimizerOptions(**kwargs)
