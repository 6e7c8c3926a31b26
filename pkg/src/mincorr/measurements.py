"""Rank-1 local projective measurements and the marginal-invariance constraint.

A measurement basis is stored as a unitary whose columns are the basis
vectors. A basis leaves a reduced state invariant under pinching exactly when
every basis vector is an eigenvector of that reduced state, so the feasible
set is parameterized by independent unitaries on each eigenspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import DEFAULT_GROUP_TOL, eig_hermitian, is_orthonormal
from .errors import DimensionError, ValidationError
from .states import DensityMatrix

ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Local rank-1 projective measurement on side ``"A"``, ``"B"`` or ``"AB"``."""

    side: str
    basis_A: np.ndarray | None = None
    basis_B: np.ndarray | None = None

    def __post_init__(self):
        side = str(self.side).upper()
        if side not in ("A", "B", "AB"):
            raise ValueError(f"side must be A, B or AB, got {self.side!r}")
        object.__setattr__(self, "side", side)
        for name, needed in (("basis_A", "A" in side), ("basis_B", "B" in side)):
            U = getattr(self, name)
            if needed and U is None:
                raise ValidationError(f"side {side} needs {name}")
            if not needed and U is not None:
                raise ValidationError(f"side {side} must not carry {name}")
            if U is not None:
                U = np.array(U, dtype=complex)
                if U.ndim != 2 or U.shape[0] != U.shape[1]:
                    raise DimensionError(f"{name} must be a square matrix")
                if not is_orthonormal(U, ORTHONORMAL_TOL):
                    raise ValidationError(f"{name} is not orthonormal")
                U.setflags(write=False)
                object.__setattr__(self, name, U)

    @classmethod
    def two_sided(cls, basis_A, basis_B) -> "ProjectiveMeasurement":
        return cls("AB", basis_A, basis_B)

    @classmethod
    def one_sided(cls, side: str, basis) -> "ProjectiveMeasurement":
        side = side.upper()
        return cls(side, basis if side == "A" else None, basis if side == "B" else None)

    def restrict(self, side: str) -> "ProjectiveMeasurement":
        side = side.upper()
        return ProjectiveMeasurement.one_sided(side, self.basis_A if side == "A" else self.basis_B)

    def to_json(self) -> dict:
        def enc(U):
            if U is None:
                return None
            return [[[float(z.real), float(z.imag)] for z in row] for row in U]
        return {"side": self.side, "basis_A": enc(self.basis_A), "basis_B": enc(self.basis_B)}


def _check_basis_dims(rho: DensityMatrix, meas: ProjectiveMeasurement):
    m, n = rho.dims
    if meas.basis_A is not None and meas.basis_A.shape[0] != m:
        raise DimensionError(f"A basis has dimension {meas.basis_A.shape[0]}, state has m={m}")
    if meas.basis_B is not None and meas.basis_B.shape[0] != n:
        raise DimensionError(f"B basis has dimension {meas.basis_B.shape[0]}, state has n={n}")


# array-level kernels, also used by the optimizers

def pinch_one_sided_array(rho: np.ndarray, dims, side: str, U: np.ndarray) -> np.ndarray:
    m, n = dims
    r = rho.reshape(m, n, m, n)
    if side == "A":
        t = np.einsum("ia,ijkl,kb->ajbl", U.conj(), r, U, optimize=True)
        t = t * np.eye(m)[:, None, :, None]
        out = np.einsum("ia,ajbl,kb->ijkl", U, t, U.conj(), optimize=True)
    else:
        t = np.einsum("ja,ijkl,lb->iakb", U.conj(), r, U, optimize=True)
        t = t * np.eye(n)[None, :, None, :]
        out = np.einsum("ja,iakb,lb->ijkl", U, t, U.conj(), optimize=True)
    return out.reshape(m * n, m * n)


def product_basis_probabilities(rho: np.ndarray, UA: np.ndarray, UB: np.ndarray) -> np.ndarray:
    """``p[a, b] = <a b| rho |a b>`` for the product basis of columns of UA, UB."""
    W = np.kron(UA, UB)
    p = np.einsum("ia,ij,ja->a", W.conj(), rho, W).real
    return p.reshape(UA.shape[1], UB.shape[1])


def pinch_two_sided_array(rho: np.ndarray, UA: np.ndarray, UB: np.ndarray) -> np.ndarray:
    W = np.kron(UA, UB)
    p = product_basis_probabilities(rho, UA, UB).ravel()
    return (W * p) @ W.conj().T


def apply_one_sided(rho: DensityMatrix, meas: ProjectiveMeasurement) -> DensityMatrix:
    """``sum_k (P_k (x) I) rho (P_k (x) I)`` (or the B-side analogue)."""
    if meas.side not in ("A", "B"):
        raise ValueError("apply_one_sided needs a one-sided measurement")
    _check_basis_dims(rho, meas)
    U = meas.basis_A if meas.side == "A" else meas.basis_B
    return DensityMatrix(pinch_one_sided_array(rho.matrix, rho.dims, meas.side, U), rho.dims)


def apply_two_sided(rho: DensityMatrix, meas: ProjectiveMeasurement) -> DensityMatrix:
    """Dephase in the product basis; the result is a classical state."""
    if meas.side != "AB":
        raise ValueError("apply_two_sided needs a two-sided measurement")
    _check_basis_dims(rho, meas)
    return DensityMatrix(pinch_two_sided_array(rho.matrix, meas.basis_A, meas.basis_B), rho.dims)


def apply_measurement(rho: DensityMatrix, meas: ProjectiveMeasurement) -> DensityMatrix:
    if meas.side == "AB":
        return apply_two_sided(rho, meas)
    return apply_one_sided(rho, meas)


def pinch_operator(M: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Single-factor pinching ``sum_k |k><k| M |k><k|``."""
    d = np.einsum("ik,ij,jk->k", U.conj(), M, U)
    return (U * d) @ U.conj().T


def marginal_disturbance(rho: DensityMatrix, meas: ProjectiveMeasurement) -> dict:
    """HS distance between each touched marginal and its pinched version."""
    _check_basis_dims(rho, meas)
    out = {}
    for side, U in (("A", meas.basis_A), ("B", meas.basis_B)):
        if U is not None:
            marg = rho.reduced(side)
            out[side] = float(np.linalg.norm(pinch_operator(marg, U) - marg))
    return out


def leaves_marginal_invariant(rho: DensityMatrix, meas: ProjectiveMeasurement,
                              tol: float = 1e-9) -> bool:
    return all(d < tol for d in marginal_disturbance(rho, meas).values())


@dataclass(frozen=True, eq=False)
class EigenGroup:
    eigenvalue: float
    basis: np.ndarray  # columns span the eigenspace

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True, eq=False)
class FeasibleFamily:
    """Measurement bases that leave a reduced state invariant.

    Each group of size ``d > 1`` carries ``d**2`` real parameters of a
    Hermitian generator; singleton groups are fixed up to phase.
    """

    side: str | None
    eigen_groups: tuple[EigenGroup, ...]
    group_tol: float
    source: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return sum(g.dim for g in self.eigen_groups)

    @property
    def free_parameter_count(self) -> int:
        return sum(g.dim**2 for g in self.eigen_groups if g.dim > 1)

    @property
    def is_singleton(self) -> bool:
        return self.free_parameter_count == 0

    def group_dims(self) -> list[int]:
        return [g.dim for g in self.eigen_groups]

    def base_basis(self) -> np.ndarray:
        return np.concatenate([g.basis for g in self.eigen_groups], axis=1)

    def describe(self) -> dict:
        return {
            "side": self.side,
            "group_tol": self.group_tol,
            "eigenvalues": [g.eigenvalue for g in self.eigen_groups],
            "group_dims": self.group_dims(),
        }


def feasible_family(marginal, group_tol: float = DEFAULT_GROUP_TOL,
                    side: str | None = None) -> FeasibleFamily:
    """Group the eigenvectors of a reduced state into its eigenspaces.

    Zero-eigenvalue directions form a group like any other.
    """
    marginal = np.asarray(marginal)
    es = eig_hermitian(marginal, group_tol)
    groups = []
    for idx in es.groups:
        B = np.array(es.eigenvectors[:, list(idx)])
        B.setflags(write=False)
        groups.append(EigenGroup(float(np.mean(es.eigenvalues[list(idx)])), B))
    return FeasibleFamily(side, tuple(groups), float(group_tol), marginal)


def unconstrained_family(d: int, base=None, side: str | None = None) -> FeasibleFamily:
    """The whole space as one group: every orthonormal basis is reachable."""
    B = np.eye(d, dtype=complex) if base is None else np.array(base, dtype=complex)
    if not is_orthonormal(B):
        raise ValidationError("base basis must be orthonormal")
    B.setflags(write=False)
    return FeasibleFamily(side, (EigenGroup(float("nan"), B),), 0.0, None)


@lru_cache(maxsize=None)
def _upper_indices(d: int):
    return np.triu_indices(d, 1)


@lru_cache(maxsize=None)
def _hermitian_map(d: int) -> np.ndarray:
    """Complex (d*d, d*d) matrix taking the parameter vector to ``G.ravel()``."""
    M = np.zeros((d * d, d * d), dtype=complex)
    M[np.arange(d) * (d + 1), np.arange(d)] = 1
    for k, (i, j) in enumerate(zip(*_upper_indices(d))):
        re, im = d + 2 * k, d + 2 * k + 1
        M[i * d + j, re], M[i * d + j, im] = 1, 1j
        M[j * d + i, re], M[j * d + i, im] = 1, -1j
    M.setflags(write=False)
    return M


def hermitian_from_params(params, d: int) -> np.ndarray:
    """Hermitian d x d matrix from d diagonal reals then (re, im) of the upper triangle."""
    params = np.asarray(params, dtype=float)
    if params.size != d * d:
        raise ValueError(f"need {d * d} parameters, got {params.size}")
    return (_hermitian_map(d) @ params).reshape(d, d)


def unitary_from_params(params, d: int) -> np.ndarray:
    """``exp(i G(params))``.

    Closed form for d = 2 (``G = a0 I + a.sigma``), eigendecomposition otherwise.
    """
    if d == 2:
        p = np.asarray(params, dtype=float)
        a0, a3 = 0.5 * (p[0] + p[1]), 0.5 * (p[0] - p[1])
        a1, a2 = p[2], -p[3]
        r = np.sqrt(a1 * a1 + a2 * a2 + a3 * a3)
        c, s = np.cos(r), (np.sin(r) / r if r > 1e-300 else 1.0)
        ph = np.exp(1j * a0)
        return ph * np.array([[c + 1j * s * a3, 1j * s * (a1 - 1j * a2)],
                              [1j * s * (a1 + 1j * a2), c - 1j * s * a3]])
    w, V = np.linalg.eigh(hermitian_from_params(params, d))
    return (V * np.exp(1j * w)) @ V.conj().T


def measurement_realizer(family: FeasibleFamily):
    """Fast ``params -> basis`` map equivalent to :func:`realize_measurement`."""
    D = family.dim
    blocks, pos, col = [], 0, 0
    fixed = np.zeros((D, D), dtype=complex)
    for g in family.eigen_groups:
        if g.dim == 1:
            fixed[:, col] = g.basis[:, 0]
        else:
            blocks.append((g.basis, g.dim, pos, col))
            pos += g.dim**2
        col += g.dim
    if not blocks:
        return lambda params: fixed.copy()

    def realize(params):
        U = fixed.copy()
        for basis, d, p0, c0 in blocks:
            U[:, c0:c0 + d] = basis @ unitary_from_params(params[p0:p0 + d * d], d)
        return U

    return realize


def realize_measurement(family: FeasibleFamily, params) -> np.ndarray:
    """Basis (columns) obtained by rotating each degenerate eigenspace by its unitary."""
    params = np.asarray(params, dtype=float).ravel()
    if params.size != family.free_parameter_count:
        raise ValueError(
            f"expected {family.free_parameter_count} parameters, got {params.size}")
    return measurement_realizer(family)(params)
