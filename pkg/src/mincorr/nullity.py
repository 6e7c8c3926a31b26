"""Structural tests for vanishing measurement-induced nonlocality.

N_A(rho) = 0 exactly when, in an eigenbasis ``{|j>}`` of rho_A,

    rho = sum_j p_j |j><j| (x) rho_j    with rho_j = rho_i whenever p_j = p_i,

i.e. rho = sum_g P_g (x) Y_g over the spectral projectors P_g of rho_A. That
form is invariant under rotations inside each eigenspace, so checking it in
the eigenbasis returned by the eigensolver is enough; no joint
diagonalization search is needed. N_AB vanishes iff N_A and N_B both do.

:func:`check_theorem4` reaches the same verdict through a separate route: the
matrix-unit blocks of rho must act as scalars on every eigenspace of the
corresponding marginal (which forces them to be commuting normal operators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .algebra import DEFAULT_GROUP_TOL, eig_hermitian, group_values
from .decompositions import block_decomposition
from .errors import ValidationError
from .states import DensityMatrix

NULLITY_TOL = 1e-8

VIOLATIONS = ("non_commuting_blocks", "eigenspace_not_contained", "degeneracy_consistency")


@dataclass
class NullityReport:
    is_zero: bool
    side: str
    tol: float
    residual: float
    violation: str | None = None
    witness: dict = field(default_factory=dict)
    certificate: dict | None = None

    @property
    def margin(self) -> float:
        """Distance of the deciding residual from the tolerance (positive means zero verdict)."""
        return self.tol - self.residual

    def to_dict(self) -> dict:
        return {
            "is_zero": self.is_zero,
            "side": self.side,
            "tol": self.tol,
            "residual": self.residual,
            "margin": self.margin,
            "violation": self.violation,
            "witness": self.witness,
            "certificate": _jsonable(self.certificate),
        }


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return np.stack([obj.real, obj.imag], axis=-1).tolist()
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _rotated_blocks(rho: DensityMatrix, side: str, V: np.ndarray) -> np.ndarray:
    """Blocks of rho indexed by the eigenbasis V of the `side` marginal.

    Returns ``blocks[i, j]``, the operator on the other factor multiplying
    ``|v_i><v_j|``.
    """
    m, n = rho.dims
    r = rho.matrix.reshape(m, n, m, n)
    if side == "A":
        t = np.einsum("ia,ijkl,kb->abjl", V.conj(), r, V)
    else:
        t = np.einsum("ja,ijkl,lb->abik", V.conj(), r, V)
    return t


def is_zero_min_one_sided(rho: DensityMatrix, side: str = "A", tol: float = NULLITY_TOL,
                          group_tol: float = DEFAULT_GROUP_TOL) -> NullityReport:
    side = side.upper()
    es = eig_hermitian(rho.reduced(side), group_tol)
    V = np.array(es.eigenvectors)
    blocks = _rotated_blocks(rho, side, V)
    d = V.shape[0]

    off, off_at = 0.0, None
    for i in range(d):
        for j in range(d):
            if i != j:
                r = float(np.linalg.norm(blocks[i, j]))
                if r > off:
                    off, off_at = r, (i, j)
    cons, cons_at = 0.0, None
    for g in es.groups:
        for i, j in combinations(g, 2):
            r = float(np.linalg.norm(blocks[i, i] - blocks[j, j]))
            if r > cons:
                cons, cons_at = r, (i, j)

    residual = max(off, cons)
    report = NullityReport(residual < tol, side, tol, residual)
    if off >= tol:
        report.violation = "non_commuting_blocks"
        report.witness = {"side": side, "indices": list(off_at), "residual": off}
    elif cons >= tol:
        report.violation = "degeneracy_consistency"
        report.witness = {"side": side, "indices": list(cons_at), "residual": cons}
    else:
        diag = np.array([blocks[j, j] for j in range(d)])
        p = np.trace(diag, axis1=1, axis2=2).real
        conditionals = np.array([diag[j] / p[j] if p[j] > 0 else np.zeros_like(diag[j])
                                 for j in range(d)])
        rebuilt = _rebuild_one_sided(side, V, diag)
        report.certificate = {
            "basis": V,
            "probabilities": p,
            "conditional_states": conditionals,
            "groups": [list(g) for g in es.groups],
            "rebuild_error": float(np.linalg.norm(rebuilt - rho.matrix)),
        }
    return report


def _rebuild_one_sided(side, V, diag_blocks) -> np.ndarray:
    out = 0
    for j in range(V.shape[1]):
        P = np.outer(V[:, j], V[:, j].conj())
        out = out + (np.kron(P, diag_blocks[j]) if side == "A" else np.kron(diag_blocks[j], P))
    return out


def _table_consistency(P: np.ndarray, group_tol: float) -> tuple[float, float]:
    """Largest violation of the row and column equal-marginal conditions."""
    def worst(table):
        sums = table.sum(axis=1)
        order = np.argsort(-sums, kind="stable")
        res = 0.0
        for g in group_values(sums[order], group_tol):
            rows = table[order[list(g)]]
            res = max(res, float(np.max(np.abs(rows - rows[0]))))
        return res
    return worst(P), worst(P.T)


def is_zero_min_two_sided(rho: DensityMatrix, tol: float = NULLITY_TOL,
                          group_tol: float = DEFAULT_GROUP_TOL) -> NullityReport:
    """Zero two-sided MiN iff both one-sided tests pass.

    On success the certificate holds the classical probability table in the
    product of the marginal eigenbases, with the residuals of its row and
    column consistency conditions.
    """
    repA = is_zero_min_one_sided(rho, "A", tol, group_tol)
    repB = is_zero_min_one_sided(rho, "B", tol, group_tol)
    residual = max(repA.residual, repB.residual)
    report = NullityReport(repA.is_zero and repB.is_zero, "AB", tol, residual)
    if not report.is_zero:
        failed = repA if not repA.is_zero else repB
        report.violation = failed.violation
        report.witness = failed.witness
        return report
    VA, VB = repA.certificate["basis"], repB.certificate["basis"]
    W = np.kron(VA, VB)
    m, n = rho.dims
    P = np.real(np.einsum("ia,ij,ja->a", W.conj(), rho.matrix, W)).reshape(m, n)
    rebuilt = (W * P.ravel()) @ W.conj().T
    rows, cols = _table_consistency(P, group_tol)
    report.certificate = {
        "basis_A": VA,
        "basis_B": VB,
        "probabilities": P,
        "row_consistency_residual": rows,
        "column_consistency_residual": cols,
        "rebuild_error": float(np.linalg.norm(rebuilt - rho.matrix)),
    }
    return report


def _operator_conditions(blocks: np.ndarray, marginal: np.ndarray, group_tol: float):
    """Residuals of the commuting-normal and eigenspace-containment conditions."""
    d = blocks.shape[0]
    ops = [blocks[k, l] for k in range(d) for l in range(d)]
    labels = [(k, l) for k in range(d) for l in range(d)]
    es = eig_hermitian(marginal, group_tol)

    normal = max(((float(np.linalg.norm(X @ X.conj().T - X.conj().T @ X)), lab)
                  for X, lab in zip(ops, labels)), key=lambda t: t[0])
    commute = (0.0, None)
    for (X, a), (Y, b) in combinations(zip(ops, labels), 2):
        r = float(np.linalg.norm(X @ Y - Y @ X))
        if r > commute[0]:
            commute = (r, (a, b))
    contain = (0.0, None)
    for g in range(len(es.groups)):
        E = es.group_basis(g)
        dim = E.shape[1]
        for X, lab in zip(ops, labels):
            XE = X @ E
            c = np.trace(E.conj().T @ XE) / dim
            r = float(np.linalg.norm(XE - c * E))
            if r > contain[0]:
                contain = (r, (lab, g))
    return normal, commute, contain


def check_theorem4(rho: DensityMatrix, tol: float = NULLITY_TOL,
                   group_tol: float = DEFAULT_GROUP_TOL) -> NullityReport:
    """Zero-N_AB test phrased through the matrix-unit blocks of rho.

    For the A side, the blocks ``A_kl`` (``rho = sum_kl A_kl (x) |k'><l'|``)
    must be mutually commuting normal operators and every eigenspace of rho_A
    must lie inside an eigenspace of every ``A_kl``. The B side uses the
    blocks ``B_ij`` and rho_B in the same way.
    """
    checks = {
        "A": _operator_conditions(block_decomposition(rho, "by_B").blocks, rho.reduced("A"), group_tol),
        "B": _operator_conditions(block_decomposition(rho, "by_A").blocks, rho.reduced("B"), group_tol),
    }
    residual = max(r for side in checks.values() for r, _ in side)
    report = NullityReport(residual < tol, "AB", tol, residual)
    for side, (normal, commute, contain) in checks.items():
        if normal[0] >= tol:
            report.violation = "non_commuting_blocks"
            report.witness = {"side": side, "blocks": [normal[1], normal[1]], "kind": "non_normal",
                              "residual": normal[0]}
        elif commute[0] >= tol:
            report.violation = "non_commuting_blocks"
            report.witness = {"side": side, "blocks": list(commute[1]), "residual": commute[0]}
        elif contain[0] >= tol:
            report.violation = "eigenspace_not_contained"
            report.witness = {"side": side, "block": contain[1][0], "eigenspace": contain[1][1],
                              "residual": contain[0]}
        if report.violation:
            break
    if report.is_zero:
        report.certificate = {side: {"normality": c[0][0], "commutation": c[1][0],
                                     "containment": c[2][0]} for side, c in checks.items()}
    return report


def depolarize(rho: DensityMatrix, t: float) -> DensityMatrix:
    """``t rho + (1 - t) I / (mn)``."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"t must lie in [0, 1], got {t!r}")
    D = rho.matrix.shape[0]
    return DensityMatrix(t * rho.matrix + (1 - t) * np.eye(D) / D, rho.dims)
