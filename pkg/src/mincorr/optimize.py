"""Seeded multi-start derivative-free search over a real parameter vector."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import ValidationError


@dataclass(frozen=True)
class OptimizerOptions:
    starts: int = 32
    max_iterations: int = 400
    convergence_tol: float = 1e-9
    seed: int = 0
    degeneracy_tol: float = 1e-8

    def __post_init__(self):
        if self.starts < 1 or self.max_iterations < 1:
            raise ValidationError("starts and max_iterations must be positive")
        if self.convergence_tol <= 0 or self.degeneracy_tol <= 0:
            raise ValidationError("tolerances must be positive")
        if self.seed < 0:
            raise ValidationError("seed must be nonnegative")


@dataclass
class SearchOutcome:
    params: np.ndarray
    value: float
    best_start: int
    start_values: list[float] = field(default_factory=list)
    trace: list[float] = field(default_factory=list)
    iterations: int = 0
    evaluations: int = 0

    def diagnostics(self) -> dict:
        return {
            "starts": len(self.start_values),
            "best_start": self.best_start,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "start_values": [float(v) for v in self.start_values],
            "trace": [float(v) for v in self.trace],
        }


def multistart(objective, n_params: int, opts: OptimizerOptions, *,
               maximize: bool = True, scale: float = np.pi,
               simplex_step: float = 0.5) -> SearchOutcome:
    """Nelder-Mead from ``opts.starts`` starting points.

    Start 0 is the zero vector; the others are uniform in ``[-scale, scale]``
    drawn from ``default_rng(opts.seed)``. The best value wins; among values
    within ``convergence_tol`` of each other the lowest start index wins.
    """
    sign = -1.0 if maximize else 1.0
    if n_params == 0:
        x = np.zeros(0)
        v = float(objective(x))
        return SearchOutcome(x, v, 0, [v], [v], 0, 1)

    rng = np.random.default_rng(opts.seed)
    starts = [np.zeros(n_params)]
    starts += [rng.uniform(-scale, scale, n_params) for _ in range(opts.starts - 1)]

    def f(x):
        return sign * objective(x)

    results = []
    iterations = evaluations = 0
    for x0 in starts:
        simplex = np.vstack([x0, x0 + simplex_step * np.eye(n_params)])
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"maxiter": opts.max_iterations,
                                "fatol": opts.convergence_tol,
                                "xatol": 1e-7,
                                "initial_simplex": simplex})
        iterations += int(res.nit)
        evaluations += int(res.nfev)
        results.append((np.asarray(res.x, dtype=float), float(sign * res.fun)))

    values = [v for _, v in results]
    trace, best_so_far = [], -np.inf if maximize else np.inf
    for v in values:
        best_so_far = max(best_so_far, v) if maximize else min(best_so_far, v)
        trace.append(best_so_far)
    best = trace[-1]
    idx = next(i for i, v in enumerate(values) if abs(v - best) <= opts.convergence_tol)
    return SearchOutcome(results[idx][0], values[idx], idx, values, trace,
                         iterations, evaluations)
