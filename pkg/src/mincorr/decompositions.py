"""Operator-basis correlation matrices and matrix-unit block decompositions.

With HS-orthonormal Hermitian bases ``{X_i}`` on A and ``{Y_j}`` on B, a state
reads ``rho = sum_ij c_ij X_i (x) Y_j``. A rank-1 projective measurement
becomes a pair of row-orthonormal real matrices ``A, B`` and the pinched
state has coefficients ``A^t A C B^t B``, which gives the trace formulas in
:func:`pinch_objective_from_matrices`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalError
from .measurements import ProjectiveMeasurement
from .states import DensityMatrix

IMAG_TOL = 1e-10


def gell_mann_basis(d: int) -> np.ndarray:
    """HS-orthonormal Hermitian basis of d x d matrices, identity first.

    Order: ``I/sqrt(d)``; for each pair ``j < k`` the symmetric then the
    antisymmetric generator; then the diagonal generators. For ``d = 2`` this
    is ``(I, sigma_1, sigma_2, sigma_3) / sqrt(2)``.
    """
    if d < 2:
        raise DimensionError(f"d must be >= 2, got {d}")
    ops = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            S = np.zeros((d, d), dtype=complex)
            S[j, k] = S[k, j] = 1
            A = np.zeros((d, d), dtype=complex)
            A[j, k], A[k, j] = -1j, 1j
            ops.append(S / np.sqrt(2))
            ops.append(A / np.sqrt(2))
    for l in range(1, d):
        D = np.zeros((d, d), dtype=complex)
        D[np.arange(l), np.arange(l)] = 1
        D[l, l] = -l
        ops.append(D / np.sqrt(l * (l + 1)))
    return np.array(ops)


@dataclass(frozen=True, eq=False)
class OperatorBasisDecomposition:
    X: np.ndarray  # (m^2, m, m)
    Y: np.ndarray  # (n^2, n, n)
    C: np.ndarray  # (m^2, n^2), real

    @property
    def dims(self) -> tuple[int, int]:
        return self.X.shape[1], self.Y.shape[1]

    def reconstruct(self) -> np.ndarray:
        m, n = self.dims
        return np.einsum("ij,iac,jbd->abcd", self.C, self.X, self.Y).reshape(m * n, m * n)

    def total_correlation(self) -> float:
        """``Tr(C C^t)``, equal to the purity of the state."""
        return float(np.sum(self.C**2))


def correlation_matrix(rho: DensityMatrix, basis_A=None, basis_B=None) -> OperatorBasisDecomposition:
    """``c_ij = Tr(rho X_i (x) Y_j)`` in the given (default Gell-Mann) bases."""
    m, n = rho.dims
    X = gell_mann_basis(m) if basis_A is None else np.asarray(basis_A, dtype=complex)
    Y = gell_mann_basis(n) if basis_B is None else np.asarray(basis_B, dtype=complex)
    if X.shape != (m * m, m, m) or Y.shape != (n * n, n, n):
        raise DimensionError("operator bases do not match the state dimensions")
    r = rho.matrix.reshape(m, n, m, n)
    C = np.einsum("ijkl,aki,blj->ab", r, X, Y)
    resid = float(np.max(np.abs(C.imag)))
    if resid > IMAG_TOL:
        raise NumericalError(f"correlation matrix has imaginary residue {resid:.3e}")
    C = np.ascontiguousarray(C.real)
    return OperatorBasisDecomposition(X, Y, C)


@dataclass(frozen=True, eq=False)
class MeasurementMatrices:
    A: np.ndarray | None
    B: np.ndarray | None


def projector_coordinates(U: np.ndarray, ops: np.ndarray) -> np.ndarray:
    """Rows ``a_k`` with ``|k><k| = sum_i a_ki X_i``."""
    M = np.einsum("ak,iaj,jk->ki", U.conj(), ops, U)
    return np.ascontiguousarray(M.real)


def measurement_matrices(meas: ProjectiveMeasurement,
                         decomp: OperatorBasisDecomposition) -> MeasurementMatrices:
    A = None if meas.basis_A is None else projector_coordinates(meas.basis_A, decomp.X)
    B = None if meas.basis_B is None else projector_coordinates(meas.basis_B, decomp.Y)
    return MeasurementMatrices(A, B)


MODES = ("one_sided_A", "one_sided_B", "two_sided")


def pinch_objective_from_matrices(C, A=None, B=None, mode: str = "two_sided") -> float:
    """``||rho - Pi(rho)||^2`` written through the correlation matrix.

    one_sided_A: ``Tr(CC^t) - Tr(A C C^t A^t)``
    one_sided_B: ``Tr(CC^t) - Tr(C B^t B C^t)``
    two_sided:   ``Tr(CC^t) - Tr(A C B^t B C^t A^t)``
    """
    C = np.asarray(C, dtype=float)
    total = float(np.sum(C**2))
    if mode == "one_sided_A":
        if A is None or A.shape[1] != C.shape[0]:
            raise DimensionError("A does not match C")
        return total - float(np.sum((A @ C) ** 2))
    if mode == "one_sided_B":
        if B is None or B.shape[1] != C.shape[1]:
            raise DimensionError("B does not match C")
        return total - float(np.sum((C @ B.T) ** 2))
    if mode == "two_sided":
        if A is None or B is None or A.shape[1] != C.shape[0] or B.shape[1] != C.shape[1]:
            raise DimensionError("A, B do not match C")
        K = A @ C @ B.T
        return total - float(np.sum(K**2))
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class LowerBound:
    value: float
    total: float
    top_eigenvalues: tuple[float, ...]
    vacuous: bool  # value < 0: bound carries no information


def gmqd_lower_bound(rho: DensityMatrix, mode: str = "two_sided") -> LowerBound:
    """``Tr(CC^t)`` minus the largest k eigenvalues of ``CC^t``.

    k is m for one_sided_A, n for one_sided_B and min(m, n) for two_sided.
    Negative values are returned as-is.
    """
    m, n = rho.dims
    k = {"one_sided_A": m, "one_sided_B": n, "two_sided": min(m, n)}.get(mode)
    if k is None:
        raise ValueError(f"unknown mode {mode!r}")
    C = correlation_matrix(rho).C
    sv = np.linalg.svd(C, compute_uv=False)
    lam = np.sort(sv**2)[::-1]
    total = float(np.sum(lam))
    top = lam[:k]
    value = total - float(np.sum(top))
    return LowerBound(value, total, tuple(float(t) for t in top), value < 0)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """``rho = sum_ij E_ij (x) blocks[i, j]`` (by_A) or ``sum_kl blocks[k, l] (x) F_kl`` (by_B)."""

    direction: str
    blocks: np.ndarray

    def reassemble(self) -> np.ndarray:
        b = self.blocks
        if self.direction == "by_A":
            m, n = b.shape[0], b.shape[2]
            return b.transpose(0, 2, 1, 3).reshape(m * n, m * n)
        n, m = b.shape[0], b.shape[2]
        return b.transpose(2, 0, 3, 1).reshape(m * n, m * n)


def block_decomposition(rho: DensityMatrix, direction: str = "by_A") -> BlockDecomposition:
    m, n = rho.dims
    r = rho.matrix.reshape(m, n, m, n)
    if direction == "by_A":
        blocks = r.transpose(0, 2, 1, 3)  # [i, j] -> B_ij on H_B
    elif direction == "by_B":
        blocks = r.transpose(1, 3, 0, 2)  # [k, l] -> A_kl on H_A
    else:
        raise ValueError(f"direction must be 'by_A' or 'by_B', got {direction!r}")
    blocks = np.ascontiguousarray(blocks)
    blocks.setflags(write=False)
    return BlockDecomposition(direction, blocks)
