"""Measurement-induced nonlocality, geometric discord and entropic two-sided discord.

Every disturbance below is ``||rho - Pi(rho)||_2^2`` for a rank-1 local
pinching ``Pi``. Because pinching is an HS-orthogonal projection this equals
``Tr(rho^2) - Tr(Pi(rho)^2)``, which is what the search objectives evaluate;
the reported value is always recomputed from the returned measurement by
applying the channel explicitly.

* MiN maximizes the disturbance over bases that leave the measured
  marginal(s) invariant (eigenbases of the marginal).
* GMQD minimizes it over all bases; for a fixed basis the pinched state is
  the closest CQ / classical state, so this is the HS distance to that set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import entropy_of_spectrum, hs_norm_sq, von_neumann_entropy
from .measurements import (
    FeasibleFamily,
    ProjectiveMeasurement,
    apply_measurement,
    feasible_family,
    measurement_realizer,
    realize_measurement,
    unconstrained_family,
)
from .optimize import OptimizerOptions, multistart
from .states import DensityMatrix, PureState

METHODS = ("closed_form", "theorem7", "optimized", "oracle")


@dataclass
class MeasureResult:
    """Outcome of one measure evaluation.

    ``bound`` says how ``value`` relates to the true quantity: ``"exact"``,
    ``"lower"`` (best-found value of a supremum) or ``"upper"`` (best-found
    value of an infimum).
    """

    value: float
    argmeasure: ProjectiveMeasurement | None
    method: str
    bound: str = "exact"
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "method": self.method,
            "bound": self.bound,
            "argmeasure": None if self.argmeasure is None else self.argmeasure.to_json(),
            "diagnostics": self.diagnostics,
        }


def _as_density(rho) -> DensityMatrix:
    if isinstance(rho, PureState):
        return rho.density()
    return rho


def _opts(opts) -> OptimizerOptions:
    return OptimizerOptions() if opts is None else opts


def disturbance(rho: DensityMatrix, meas: ProjectiveMeasurement) -> float:
    """``||rho - Pi(rho)||_2^2`` by explicit application of the channel."""
    return hs_norm_sq(rho.matrix - apply_measurement(rho, meas).matrix)


# objective kernels on raw arrays

def _one_sided_retained(r: np.ndarray, side: str, U: np.ndarray) -> float:
    """``Tr(Pi(rho)^2)`` for a one-sided pinching; r is rho as (m, n, m, n)."""
    if side == "A":
        M = np.einsum("ik,ijlq,lk->kjq", U.conj(), r, U)
    else:
        M = np.einsum("jk,ijlq,qk->kil", U.conj(), r, U)
    return float(np.sum(np.abs(M) ** 2))


def _product_probabilities(rho: np.ndarray, UA: np.ndarray, UB: np.ndarray) -> np.ndarray:
    m, n = UA.shape[0], UB.shape[0]
    W = (UA[:, None, :, None] * UB[None, :, None, :]).reshape(m * n, m * n)
    p = np.sum(W.conj() * (rho @ W), axis=0).real
    return p.reshape(m, n)


def _mutual_information_table(p: np.ndarray) -> float:
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    return (entropy_of_spectrum(p.sum(axis=1)) + entropy_of_spectrum(p.sum(axis=0))
            - entropy_of_spectrum(p))


def _two_families(rho: DensityMatrix, constrained: bool, group_tol: float):
    fams = []
    for side in ("A", "B"):
        marg = rho.reduced(side)
        fam = feasible_family(marg, group_tol, side)
        if not constrained:
            fam = unconstrained_family(marg.shape[0], fam.base_basis(), side)
        fams.append(fam)
    return fams


def _grouping(*families: FeasibleFamily) -> dict:
    return {f.side: f.describe() for f in families}


def _search_one_sided(rho, side, opts, constrained, maximize):
    m, n = rho.dims
    r = rho.matrix.reshape(m, n, m, n)
    purity = rho.purity()
    marg = rho.reduced(side)
    fam = feasible_family(marg, opts.degeneracy_tol, side)
    if not constrained:
        fam = unconstrained_family(marg.shape[0], fam.base_basis(), side)

    realize = measurement_realizer(fam)

    def objective(x):
        return purity - _one_sided_retained(r, side, realize(x))

    out = multistart(objective, fam.free_parameter_count, opts, maximize=maximize)
    meas = ProjectiveMeasurement.one_sided(side, realize_measurement(fam, out.params))
    return out, meas, fam


def _search_two_sided(rho, opts, constrained, objective_kind, maximize):
    r = rho.matrix
    purity = rho.purity()
    famA, famB = _two_families(rho, constrained, opts.degeneracy_tol)
    kA = famA.free_parameter_count
    realize_A, realize_B = measurement_realizer(famA), measurement_realizer(famB)

    def bases(x):
        return realize_A(x[:kA]), realize_B(x[kA:])

    if objective_kind == "disturbance":
        def objective(x):
            p = _product_probabilities(r, *bases(x))
            return purity - float(np.sum(p * p))
    else:
        def objective(x):
            return _mutual_information_table(_product_probabilities(r, *bases(x)))

    out = multistart(objective, kA + famB.free_parameter_count, opts, maximize=maximize)
    meas = ProjectiveMeasurement.two_sided(*bases(out.params))
    return out, meas, (famA, famB)


def _diagnostics(out, opts, grouping) -> dict:
    d = out.diagnostics()
    d["seed"] = opts.seed
    d["grouping"] = grouping
    return d


def min_one_sided(rho, side: str = "A", opts: OptimizerOptions | None = None) -> MeasureResult:
    """One-sided measurement-induced nonlocality N_A (or N_B).

    Exact when the measured marginal is nondegenerate, otherwise the best
    value found over the invariant bases (a lower bound on the maximum).
    """
    rho, opts, side = _as_density(rho), _opts(opts), side.upper()
    out, meas, fam = _search_one_sided(rho, side, opts, constrained=True, maximize=True)
    exact = fam.is_singleton
    return MeasureResult(disturbance(rho, meas), meas,
                         "closed_form" if exact else "optimized",
                         "exact" if exact else "lower",
                         _diagnostics(out, opts, _grouping(fam)))


def min_two_sided(rho, opts: OptimizerOptions | None = None) -> MeasureResult:
    """Two-sided measurement-induced nonlocality N_AB.

    Jointly searches A-side and B-side invariant bases. Exact when both
    marginals are nondegenerate.
    """
    rho, opts = _as_density(rho), _opts(opts)
    out, meas, fams = _search_two_sided(rho, opts, True, "disturbance", maximize=True)
    exact = all(f.is_singleton for f in fams)
    return MeasureResult(disturbance(rho, meas), meas,
                         "closed_form" if exact else "optimized",
                         "exact" if exact else "lower",
                         _diagnostics(out, opts, _grouping(*fams)))


def min_pure_closed_form(psi: PureState) -> float:
    """``1 - sum_k lambda_k^4`` from the Schmidt coefficients of a pure state.

    This is N_A and N_B of the pure state. It equals N_AB when the nonzero
    Schmidt coefficients are distinct; with repeated coefficients N_AB can be
    larger.
    """
    lam = np.asarray(psi.schmidt_coefficients)
    return float(1.0 - np.sum(lam**4))


def gmqd_one_sided(rho, side: str = "A", opts: OptimizerOptions | None = None) -> MeasureResult:
    """Geometric discord D^G_A: squared HS distance to the CQ states (upper bound)."""
    rho, opts, side = _as_density(rho), _opts(opts), side.upper()
    out, meas, fam = _search_one_sided(rho, side, opts, constrained=False, maximize=False)
    return MeasureResult(disturbance(rho, meas), meas, "optimized", "upper",
                         _diagnostics(out, opts, _grouping(fam)))


def gmqd_two_sided(rho, opts: OptimizerOptions | None = None) -> MeasureResult:
    """Two-sided geometric discord D^G_AB: squared HS distance to the classical states."""
    rho, opts = _as_density(rho), _opts(opts)
    out, meas, fams = _search_two_sided(rho, opts, False, "disturbance", maximize=False)
    return MeasureResult(disturbance(rho, meas), meas, "optimized", "upper",
                         _diagnostics(out, opts, _grouping(*fams)))


def mutual_information(rho) -> float:
    """``S(rho_A) + S(rho_B) - S(rho)`` in bits."""
    rho = _as_density(rho)
    return (von_neumann_entropy(rho.reduced("A")) + von_neumann_entropy(rho.reduced("B"))
            - von_neumann_entropy(rho))


def entropic_discord_two_sided(rho, opts: OptimizerOptions | None = None) -> MeasureResult:
    """``I(rho) - sup I(Pi(rho))`` over product bases; heuristic upper bound."""
    rho, opts = _as_density(rho), _opts(opts)
    out, meas, fams = _search_two_sided(rho, opts, False, "mutual_information", maximize=True)
    p = _product_probabilities(rho.matrix, meas.basis_A, meas.basis_B)
    retained = _mutual_information_table(p)
    diag = _diagnostics(out, opts, _grouping(*fams))
    diag["mutual_information"] = mutual_information(rho)
    diag["retained_mutual_information"] = retained
    value = max(diag["mutual_information"] - retained, 0.0)
    return MeasureResult(value, meas, "optimized", "upper", diag)
