"""Validated bipartite states and the named state families."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import (
    _as_square,
    _check_dims,
    haar_unitary,
    is_orthonormal,
    partial_trace,
    schmidt_decompose,
)
from .errors import (
    CapacityError,
    DimensionError,
    HermiticityError,
    NegativityError,
    TraceError,
    ValidationError,
)

STATE_TOL = 1e-10

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def validate_density(M: np.ndarray, tol: float = STATE_TOL) -> np.ndarray:
    """Check a density matrix and return its Hermitian part.

    Checks run in the order hermiticity, negativity, trace so that each
    failure mode maps to a distinct exception type.
    """
    dev = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
    if dev > tol:
        raise HermiticityError(f"matrix is not Hermitian (deviation {dev:.3e})")
    H = (M + M.conj().T) / 2
    w = np.linalg.eigvalsh(H)
    if w[0] < -tol:
        raise NegativityError(f"matrix has negative eigenvalue {w[0]:.3e}")
    tr = float(np.trace(H).real)
    if abs(tr - 1.0) > tol:
        raise TraceError(f"trace is {tr!r}, expected 1")
    return H


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A bipartite mixed state on C^m (x) C^n.

    Construction validates the matrix; the stored array is read-only.
    """

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        M = np.array(_as_square(self.matrix), dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 2:
            raise DimensionError(f"dims must have two entries, got {self.dims}")
        _check_dims(M, dims)
        H = validate_density(M)
        H.setflags(write=False)
        object.__setattr__(self, "matrix", H)
        object.__setattr__(self, "dims", dims)

    @property
    def m(self) -> int:
        return self.dims[0]

    @property
    def n(self) -> int:
        return self.dims[1]

    def reduced(self, side: str) -> np.ndarray:
        """Reduced state on `side` (``reduced("A")`` is rho_A)."""
        other = "B" if str(side).upper() == "A" else "A"
        return partial_trace(self.matrix, self.dims, other)

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)

    def to_json(self) -> dict:
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]
        return {"dims": list(self.dims), "matrix": rows}

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


def density_from_matrix(M, dims) -> DensityMatrix:
    return DensityMatrix(np.asarray(M), tuple(dims))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector with its Schmidt data cached at construction."""

    vector: np.ndarray
    dims: tuple[int, int]
    schmidt_coefficients: np.ndarray = field(init=False, repr=False)
    schmidt_left: np.ndarray = field(init=False, repr=False)
    schmidt_right: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.vector, dtype=complex).ravel()
        dims = tuple(int(d) for d in self.dims)
        lam, left, right = schmidt_decompose(v, dims)
        for name, val in (("vector", v), ("dims", dims), ("schmidt_coefficients", lam),
                          ("schmidt_left", left), ("schmidt_right", right)):
            if isinstance(val, np.ndarray):
                val.setflags(write=False)
            object.__setattr__(self, name, val)

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.vector, self.vector.conj()), self.dims)


def pure_state(vector, dims) -> PureState:
    return PureState(np.asarray(vector), tuple(dims))


def _check_unit_interval(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def flip_operator(m: int) -> np.ndarray:
    """Swap operator ``sum_ij |i><j| (x) |j'><i'|`` on C^m (x) C^m."""
    F = np.zeros((m * m, m * m), dtype=complex)
    for i in range(m):
        for j in range(m):
            F[i * m + j, j * m + i] = 1.0
    return F


def max_entangled_vector(m: int, n: int | None = None) -> np.ndarray:
    """``(1/sqrt m) sum_i |i>|i'>`` embedded in C^m (x) C^n, n >= m."""
    n = m if n is None else n
    if n < m:
        raise CapacityError(f"need n >= m, got m={m}, n={n}")
    v = np.zeros(m * n, dtype=complex)
    for i in range(m):
        v[i * n + i] = 1.0
    return v / np.sqrt(m)


def werner(m: int, x: float) -> DensityMatrix:
    """Werner state ``((m-x) I + (m x - 1) F) / (m^3 - m)``."""
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    x = _check_unit_interval("x", x)
    denom = m**3 - m
    M = ((m - x) / denom) * np.eye(m * m) + ((m * x - 1) / denom) * flip_operator(m)
    return DensityMatrix(M, (m, m))


def isotropic(m: int, x: float) -> DensityMatrix:
    """Isotropic state ``((1-x) I + (m^2 x - 1) |psi+><psi+|) / (m^2 - 1)``."""
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    x = _check_unit_interval("x", x)
    psi = max_entangled_vector(m)
    denom = m * m - 1
    M = ((1 - x) / denom) * np.eye(m * m) + ((m * m * x - 1) / denom) * np.outer(psi, psi.conj())
    return DensityMatrix(M, (m, m))


def bell_diagonal(c) -> DensityMatrix:
    """Two-qubit state ``(I + sum_i c_i sigma_i (x) sigma_i) / 4``."""
    c = np.asarray(c, dtype=float).ravel()
    if c.size != 3:
        raise ValidationError(f"expected three coefficients, got {c.size}")
    M = np.eye(4, dtype=complex)
    for ci, s in zip(c, PAULI):
        M = M + ci * np.kron(s, s)
    return DensityMatrix(M / 4, (2, 2))


def bell_state() -> DensityMatrix:
    """The projector onto ``(|00> + |11>)/sqrt 2``."""
    v = max_entangled_vector(2)
    return DensityMatrix(np.outer(v, v.conj()), (2, 2))


def max_entangled_mixed(m: int, n: int, p) -> DensityMatrix:
    """Mixture of maximally entangled states with pairwise orthogonal B supports.

    Block ``k`` is ``(1/sqrt m) sum_i |i>|k*m + i>``; the B-side supports are
    consecutive disjoint blocks of the computational basis.
    """
    p = np.asarray(p, dtype=float).ravel()
    if np.any(p < 0) or abs(p.sum() - 1.0) > STATE_TOL:
        raise ValidationError("p must be a probability vector")
    K = p.size
    if n < K * m:
        raise CapacityError(f"{K} blocks of size {m} do not fit in n={n}")
    M = np.zeros((m * n, m * n), dtype=complex)
    for k, pk in enumerate(p):
        v = np.zeros(m * n, dtype=complex)
        for i in range(m):
            v[i * n + k * m + i] = 1.0 / np.sqrt(m)
        M += pk * np.outer(v, v.conj())
    return DensityMatrix(M, (m, n))


@dataclass(frozen=True, eq=False)
class ClassicalSpectrum:
    """Probability table ``P[i, j]`` attached to local orthonormal bases (columns)."""

    P: np.ndarray
    basis_A: np.ndarray | None = None
    basis_B: np.ndarray | None = None

    def __post_init__(self):
        P = np.array(self.P, dtype=float)
        if P.ndim != 2:
            raise ValidationError("P must be a 2-d table")
        if np.any(P < -STATE_TOL) or abs(P.sum() - 1.0) > STATE_TOL:
            raise ValidationError("P must be nonnegative and sum to 1")
        m, n = P.shape
        UA = np.eye(m, dtype=complex) if self.basis_A is None else np.asarray(self.basis_A, dtype=complex)
        UB = np.eye(n, dtype=complex) if self.basis_B is None else np.asarray(self.basis_B, dtype=complex)
        if UA.shape != (m, m) or UB.shape != (n, n):
            raise DimensionError("basis shapes do not match P")
        if not (is_orthonormal(UA) and is_orthonormal(UB)):
            raise ValidationError("bases must be orthonormal")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "basis_A", UA)
        object.__setattr__(self, "basis_B", UB)


def classical_state(spec: ClassicalSpectrum) -> DensityMatrix:
    W = np.kron(spec.basis_A, spec.basis_B)
    M = (W * spec.P.ravel()) @ W.conj().T
    return DensityMatrix(M, spec.P.shape)


def cq_state(p, conditionals, basis_A=None) -> DensityMatrix:
    """``sum_i p_i |i><i| (x) rho_i`` for states ``rho_i`` on B."""
    p = np.asarray(p, dtype=float)
    conditionals = [np.asarray(r, dtype=complex) for r in conditionals]
    m, n = p.size, conditionals[0].shape[0]
    U = np.eye(m) if basis_A is None else np.asarray(basis_A)
    M = np.zeros((m * n, m * n), dtype=complex)
    for i in range(m):
        proj = np.outer(U[:, i], U[:, i].conj())
        M += p[i] * np.kron(proj, conditionals[i])
    return DensityMatrix(M, (m, n))


def qc_state(q, conditionals, basis_B=None) -> DensityMatrix:
    """``sum_j q_j rho_j (x) |j'><j'|`` for states ``rho_j`` on A."""
    q = np.asarray(q, dtype=float)
    conditionals = [np.asarray(r, dtype=complex) for r in conditionals]
    n, m = q.size, conditionals[0].shape[0]
    U = np.eye(n) if basis_B is None else np.asarray(basis_B)
    M = np.zeros((m * n, m * n), dtype=complex)
    for j in range(n):
        proj = np.outer(U[:, j], U[:, j].conj())
        M += q[j] * np.kron(conditionals[j], proj)
    return DensityMatrix(M, (m, n))


def product_state(rho_A, rho_B) -> DensityMatrix:
    rho_A, rho_B = np.asarray(rho_A), np.asarray(rho_B)
    return DensityMatrix(np.kron(rho_A, rho_B), (rho_A.shape[0], rho_B.shape[0]))


def maximally_mixed(m: int, n: int) -> DensityMatrix:
    return DensityMatrix(np.eye(m * n) / (m * n), (m, n))


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_density(dims, rank: int | None = None, seed=None) -> DensityMatrix:
    """Random state ``Q diag(w) Q^dag`` with Q orthonormalized Gaussian columns.

    Weights are flat-Dirichlet. Deterministic for a fixed integer seed.
    """
    m, n = (int(d) for d in dims)
    D = m * n
    rank = D if rank is None else int(rank)
    if not 1 <= rank <= D:
        raise DimensionError(f"rank must be in [1, {D}], got {rank}")
    rng = _rng(seed)
    Q = haar_unitary(D, rng)[:, :rank]
    w = rng.dirichlet(np.ones(rank))
    return DensityMatrix((Q * w) @ Q.conj().T, (m, n))


def random_pure(dims, seed=None) -> PureState:
    m, n = (int(d) for d in dims)
    rng = _rng(seed)
    v = rng.standard_normal(m * n) + 1j * rng.standard_normal(m * n)
    return PureState(v / np.linalg.norm(v), (m, n))


def random_qubit_rotated_bell_diagonal(seed=None) -> DensityMatrix:
    """Locally rotated Bell-diagonal state: both marginals equal I/2."""
    rng = _rng(seed)
    while True:
        c = rng.uniform(-1, 1, size=3)
        lam = 0.25 * np.array([1 - c[0] - c[1] - c[2], 1 - c[0] + c[1] + c[2],
                               1 + c[0] - c[1] + c[2], 1 + c[0] + c[1] - c[2]])
        if lam.min() > 1e-3:
            break
    rho = bell_diagonal(c).matrix
    W = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
    return DensityMatrix(W @ rho @ W.conj().T, (2, 2))


# JSON state format: {"dims": [m, n], "matrix": mn rows of mn [re, im] pairs}

def state_from_json(obj: dict) -> DensityMatrix:
    try:
        dims = obj["dims"]
        rows = obj["matrix"]
    except (KeyError, TypeError) as exc:
        raise ValidationError("state JSON needs 'dims' and 'matrix' fields") from exc
    if not isinstance(dims, list) or len(dims) != 2:
        raise ValidationError("'dims' must be a two-element list")
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError("'matrix' must be rows of [re, im] pairs") from exc
    D = int(dims[0]) * int(dims[1])
    if arr.shape != (D, D, 2):
        raise DimensionError(f"'matrix' has shape {arr.shape[:-1]}, expected ({D}, {D})")
    return DensityMatrix(arr[..., 0] + 1j * arr[..., 1], (int(dims[0]), int(dims[1])))


def load_state(path) -> DensityMatrix:
    with open(Path(path), encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return state_from_json(obj)


def save_state(rho: DensityMatrix, path) -> None:
    with open(Path(path), "w", encoding="utf-8") as fh:
        json.dump(rho.to_json(), fh)
