"""Dense bipartite linear algebra.

All composite operators use the index convention ``|i> (x) |j'> -> i*n + j``,
which is the ordering produced by :func:`numpy.kron`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, HermiticityError, ValidationError

DEFAULT_GROUP_TOL = 1e-8
HERMITIAN_TOL = 1e-10


def _as_square(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError("matrix has non-finite entries")
    return M


def _check_dims(M: np.ndarray, dims) -> tuple[int, int]:
    m, n = (int(d) for d in dims)
    if m < 1 or n < 1:
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    if M.shape != (m * n, m * n):
        raise DimensionError(f"matrix of shape {M.shape} does not match dims ({m}, {n})")
    return m, n


def _side(side: str) -> str:
    s = str(side).upper()
    if s not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return s


def hs_norm_sq(M) -> float:
    """Squared Hilbert-Schmidt norm ``Tr(M^dag M)``."""
    M = _as_square(M)
    return float(np.vdot(M, M).real)


def hs_inner(X, Y) -> complex:
    """Hilbert-Schmidt inner product ``Tr(X^dag Y)``."""
    return complex(np.vdot(np.asarray(X), np.asarray(Y)))


def partial_trace(rho, dims, side: str) -> np.ndarray:
    """Trace out subsystem `side` and return the operator on the other factor.

    ``partial_trace(rho, (m, n), "B")`` is the reduced state rho_A.
    """
    rho = _as_square(rho)
    m, n = _check_dims(rho, dims)
    r = rho.reshape(m, n, m, n)
    if _side(side) == "B":
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)


def partial_transpose(rho, dims, side: str) -> np.ndarray:
    """Transpose the `side` factor of a bipartite operator.

    This is a pure entry permutation, so applying it twice returns the input
    bit for bit.
    """
    rho = _as_square(rho)
    m, n = _check_dims(rho, dims)
    r = rho.reshape(m, n, m, n)
    if _side(side) == "A":
        r = r.transpose(2, 1, 0, 3)
    else:
        r = r.transpose(0, 3, 2, 1)
    return np.ascontiguousarray(r).reshape(m * n, m * n)


@dataclass(frozen=True)
class HermitianEigensystem:
    """Eigenvalues in descending order with orthonormal eigenvector columns.

    ``groups`` partitions the eigenvalue indices into degeneracy classes.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    groups: tuple[tuple[int, ...], ...]
    group_tol: float

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def group_basis(self, g: int) -> np.ndarray:
        return self.eigenvectors[:, list(self.groups[g])]


def group_values(values, tol: float) -> tuple[tuple[int, ...], ...]:
    """Group indices of descending `values` by transitive closure of ``|a-b| < tol``."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return ()
    groups = [[0]]
    for i in range(1, values.size):
        if abs(values[i - 1] - values[i]) < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return tuple(tuple(g) for g in groups)


def _fix_phases(V: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made real positive
    idx = np.argmax(np.abs(V), axis=0)
    lead = V[idx, np.arange(V.shape[1])]
    return V * (np.abs(lead) / lead)


def eig_hermitian(H, group_tol: float = DEFAULT_GROUP_TOL,
                  herm_tol: float = HERMITIAN_TOL) -> HermitianEigensystem:
    H = _as_square(H)
    dev = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if dev > herm_tol:
        raise HermiticityError(f"matrix is not Hermitian (deviation {dev:.3e})")
    H = (H + H.conj().T) / 2
    w, V = np.linalg.eigh(H)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    V = _fix_phases(V[:, order])
    w.setflags(write=False)
    V.setflags(write=False)
    return HermitianEigensystem(w, V, group_values(w, group_tol), float(group_tol))


def schmidt_decompose(psi, dims, norm_tol: float = 1e-10, cutoff: float = 1e-14):
    """Schmidt decomposition of a normalized bipartite vector.

    Returns ``(coeffs, left, right)`` where ``coeffs`` are the nonzero
    Schmidt coefficients in descending order and the columns of ``left`` and
    ``right`` are the matching local vectors, so that
    ``psi == sum_k coeffs[k] * kron(left[:, k], right[:, k])``.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    m, n = (int(d) for d in dims)
    if psi.size != m * n:
        raise DimensionError(f"vector of length {psi.size} does not match dims ({m}, {n})")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > norm_tol:
        raise ValidationError(f"state vector is not normalized (norm {norm:.12f})")
    U, s, Vh = np.linalg.svd(psi.reshape(m, n), full_matrices=False)
    keep = s > cutoff
    return s[keep], U[:, keep], Vh[keep, :].T


def entropy_of_spectrum(p, base: float = 2.0) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)) / np.log(base))


def von_neumann_entropy(rho, base: float = 2.0) -> float:
    """``-sum lambda log2 lambda`` over the positive eigenvalues, ``0 log 0 = 0``."""
    from .states import DensityMatrix, validate_density

    if isinstance(rho, DensityMatrix):
        M = rho.matrix
    else:
        M = _as_square(rho)
        validate_density(M)
    w = np.linalg.eigvalsh((M + M.conj().T) / 2)
    return entropy_of_spectrum(np.clip(w, 0.0, None), base)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R)
    return Q * (diag / np.abs(diag))


def is_orthonormal(U, tol: float = 1e-10) -> bool:
    U = np.asarray(U)
    if U.ndim != 2:
        return False
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[1])), initial=0.0) < tol)
