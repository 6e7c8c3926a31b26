"""Brute-force baselines that do not share code paths with the optimizers.

Qubit factors get an exhaustive Bloch-angle grid. Larger factors fall back to
Haar sampling, restricted to the marginal eigenspaces for MiN; GMQD also has a
direct search that assembles the nearest CQ or classical state as a matrix.
Every oracle reports the best value it saw, hence a lower bound for MiN and
an upper bound for GMQD.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .algebra import DEFAULT_GROUP_TOL, eig_hermitian, hs_norm_sq
from .errors import DegenerateMarginalError, UnsupportedDimensionError, ValidationError
from .measurements import ProjectiveMeasurement
from .measures import MeasureResult, disturbance
from .states import DensityMatrix, werner

FEASIBILITY_TOL = 1e-9

GRID_MODES = ("min_A", "min_B", "min_AB", "gmqd_A", "gmqd_B", "gmqd_AB")


@dataclass(frozen=True)
class GridSpec:
    """Angle grid: ``resolution`` points for theta in [0, pi] and for phi in [0, 2 pi)."""

    resolution: int = 60

    def __post_init__(self):
        if int(self.resolution) < 8:
            raise ValidationError(f"resolution must be >= 8, got {self.resolution}")

    def angles(self) -> tuple[np.ndarray, np.ndarray]:
        theta = np.linspace(0.0, np.pi, self.resolution)
        phi = np.linspace(0.0, 2 * np.pi, self.resolution, endpoint=False)
        return theta, phi

    @property
    def step(self) -> float:
        return np.pi / (self.resolution - 1)


def _parse_mode(mode: str):
    if mode not in GRID_MODES:
        raise ValueError(f"mode must be one of {GRID_MODES}, got {mode!r}")
    kind, sides = mode.split("_")
    return kind, sides


def _bloch_bases(V: np.ndarray, spec: GridSpec) -> np.ndarray:
    """All grid bases ``V @ u(theta, phi)``, shape (points, 2, 2), columns = vectors."""
    theta, phi = spec.angles()
    T, P = np.meshgrid(theta, phi, indexing="ij")
    c, s, e = np.cos(T / 2).ravel(), np.sin(T / 2).ravel(), np.exp(1j * P).ravel()
    u = np.empty((c.size, 2, 2), dtype=complex)
    u[:, 0, 0], u[:, 1, 0] = c, e * s
    u[:, 0, 1], u[:, 1, 1] = -np.conj(e) * s, c
    return np.einsum("ij,pjk->pik", V, u)


def _feasible_mask(marginal: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Marginal invariance, per basis: HS norm of the off-diagonal part of U^+ M U."""
    R = np.einsum("pia,ij,pjb->pab", U.conj(), marginal, U)
    off = np.sqrt(2.0) * np.abs(R[:, 0, 1])
    return off < FEASIBILITY_TOL


def _side_bases(rho: DensityMatrix, side: str, kind: str, spec: GridSpec):
    marg = rho.reduced(side)
    if marg.shape[0] != 2:
        raise UnsupportedDimensionError(f"grid oracle needs a qubit on side {side}, got {marg.shape[0]}")
    V = np.array(eig_hermitian(marg).eigenvectors)
    U = _bloch_bases(V, spec)
    total = U.shape[0]
    if kind == "min":
        U = U[_feasible_mask(marg, U)]
    return U, total - U.shape[0]


def _one_sided_values(rho: DensityMatrix, side: str, U: np.ndarray) -> np.ndarray:
    """``Tr rho^2 - sum_k ||<u_k| rho |u_k>||^2`` for every basis in U."""
    m, n = rho.dims
    r = rho.matrix.reshape(m, n, m, n)
    if side == "A":
        M = np.einsum("pik,ijlq,plk->pkjq", U.conj(), r, U)
    else:
        M = np.einsum("pjk,ijlq,pqk->pkil", U.conj(), r, U)
    return rho.purity() - np.sum(np.abs(M) ** 2, axis=(1, 2, 3))


_PAULI_VEC = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])


def _bloch_directions(U: np.ndarray) -> np.ndarray:
    """Bloch vector of the first basis vector of every basis in U."""
    u = U[:, :, 0]
    return np.einsum("pi,kij,pj->pk", u.conj(), _PAULI_VEC, u).real


def _two_sided_best(rho: DensityMatrix, UA, UB, maximize: bool):
    """Scan all (A, B) grid pairs on 2x2 through the Bloch representation.

    With local Bloch vectors a, b and correlation tensor T, measuring along
    directions n, m gives ``sum p^2 = (1 + (a.n)^2 + (b.m)^2 + (n.T m)^2) / 4``.
    """
    r = rho.matrix
    I2 = np.eye(2)
    a = np.array([np.trace(r @ np.kron(s, I2)).real for s in _PAULI_VEC])
    b = np.array([np.trace(r @ np.kron(I2, s)).real for s in _PAULI_VEC])
    T = np.array([[np.trace(r @ np.kron(s, t)).real for t in _PAULI_VEC] for s in _PAULI_VEC])
    nA, nB = _bloch_directions(UA), _bloch_directions(UB)
    sq = 0.25 * (1 + (nA @ a)[:, None] ** 2 + (nB @ b)[None, :] ** 2 + (nA @ T @ nB.T) ** 2)
    vals = rho.purity() - sq
    flat = int(np.argmax(vals) if maximize else np.argmin(vals))
    i, j = np.unravel_index(flat, vals.shape)
    return float(vals[i, j]), (int(i), int(j))


def grid_oracle(rho: DensityMatrix, mode: str = "min_AB", spec: GridSpec | None = None) -> MeasureResult:
    """Exhaustive Bloch-angle scan for qubit factors.

    The grid is laid out in the eigenframe of each measured marginal, so
    theta = 0 is the marginal eigenbasis. For MiN modes grid points that move
    the marginal by more than ``FEASIBILITY_TOL`` are skipped.
    """
    spec = spec or GridSpec()
    kind, sides = _parse_mode(mode)
    maximize = kind == "min"
    bases = {s: _side_bases(rho, s, kind, spec) for s in sides}
    skipped = {s: b[1] for s, b in bases.items()}

    if len(sides) == 1:
        s = sides
        U = bases[s][0]
        vals = _one_sided_values(rho, s, U)
        i = int(np.argmax(vals) if maximize else np.argmin(vals))
        meas = ProjectiveMeasurement.one_sided(s, U[i])
        evaluated = U.shape[0]
    else:
        UA, UB = bases["A"][0], bases["B"][0]
        _, (i, j) = _two_sided_best(rho, UA, UB, maximize)
        meas = ProjectiveMeasurement.two_sided(UA[i], UB[j])
        evaluated = UA.shape[0] * UB.shape[0]

    return MeasureResult(disturbance(rho, meas), meas, "oracle",
                         "lower" if maximize else "upper",
                         {"resolution": spec.resolution, "evaluated": evaluated,
                          "skipped_infeasible": skipped})


def _haar_batch(d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if d == 1:
        return np.ones((size, 1, 1), dtype=complex)
    out = unitary_group.rvs(d, size=size, random_state=rng)
    return np.asarray(out).reshape(size, d, d)


def _random_bases(marginal: np.ndarray, constrained: bool, size: int, rng,
                  group_tol: float) -> np.ndarray:
    es = eig_hermitian(marginal, group_tol)
    D = marginal.shape[0]
    if not constrained:
        return _haar_batch(D, size, rng)
    U = np.empty((size, D, D), dtype=complex)
    col = 0
    for g in range(len(es.groups)):
        E = np.array(es.group_basis(g))
        d = E.shape[1]
        U[:, :, col:col + d] = np.einsum("ij,pjk->pik", E, _haar_batch(d, size, rng))
        col += d
    return U


def sampling_oracle(rho: DensityMatrix, mode: str = "min_AB", samples: int = 20000,
                    seed: int = 0, group_tol: float = DEFAULT_GROUP_TOL,
                    chunk: int = 2000) -> MeasureResult:
    """Best value over Haar-random bases (eigenspace-restricted for MiN).

    Works for any dimensions. The first sample is the marginal eigenbasis
    itself. Deterministic for a given seed.
    """
    kind, sides = _parse_mode(mode)
    maximize = kind == "min"
    if samples < 1:
        raise ValidationError("samples must be positive")
    rng = np.random.default_rng(seed)
    best, best_meas = (-np.inf if maximize else np.inf), None
    for start in range(0, samples, chunk):
        size = min(chunk, samples - start)
        U = {s: _random_bases(rho.reduced(s), maximize, size, rng, group_tol) for s in sides}
        if start == 0:
            # the unrotated marginal eigenbasis is always tried first
            for s in sides:
                U[s][0] = eig_hermitian(rho.reduced(s), group_tol).eigenvectors
        if len(sides) == 1:
            vals = _one_sided_values(rho, sides, U[sides])
        else:
            vals = _paired_two_sided(rho, U["A"], U["B"])
        i = int(np.argmax(vals) if maximize else np.argmin(vals))
        if (vals[i] > best) if maximize else (vals[i] < best):
            best = float(vals[i])
            best_meas = (ProjectiveMeasurement.one_sided(sides, U[sides][i]) if len(sides) == 1
                         else ProjectiveMeasurement.two_sided(U["A"][i], U["B"][i]))
    return MeasureResult(disturbance(rho, best_meas), best_meas, "oracle",
                         "lower" if maximize else "upper",
                         {"samples": samples, "seed": seed})


def _paired_two_sided(rho: DensityMatrix, UA: np.ndarray, UB: np.ndarray) -> np.ndarray:
    m, n = rho.dims
    r = rho.matrix.reshape(m, n, m, n)
    p = np.einsum("pia,pjb,ijkl,pka,plb->pab", UA.conj(), UB.conj(), r, UA, UB,
                  optimize=True).real
    return rho.purity() - np.sum(p * p, axis=(1, 2))


def gmqd_direct_oracle(rho: DensityMatrix, mode: str = "two_sided", samples: int = 20000,
                       seed: int = 0) -> float:
    """Smallest ``||rho - chi||^2`` over sampled CQ (one_sided_A) or classical states.

    For each sampled basis the optimal chi is assembled explicitly from the
    conditional operators (or probabilities) in that basis. The computational
    basis is always included as the first sample.
    """
    m, n = rho.dims
    if m > 3 or n > 3:
        raise UnsupportedDimensionError("gmqd_direct_oracle supports dims up to 3x3")
    if mode not in ("one_sided_A", "two_sided"):
        raise ValueError(f"mode must be one_sided_A or two_sided, got {mode!r}")
    rng = np.random.default_rng(seed)
    best = np.inf
    for k in range(samples):
        UA = np.eye(m) if k == 0 else unitary_group.rvs(m, random_state=rng)
        chi = np.zeros((m * n, m * n), dtype=complex)
        if mode == "one_sided_A":
            for i in range(m):
                a = UA[:, i]
                Pa = np.outer(a, a.conj())
                cond = np.kron(a.conj()[None, :], np.eye(n)) @ rho.matrix @ np.kron(a[:, None], np.eye(n))
                chi += np.kron(Pa, cond)
        else:
            UB = np.eye(n) if k == 0 else unitary_group.rvs(n, random_state=rng)
            for i in range(m):
                for j in range(n):
                    v = np.kron(UA[:, i], UB[:, j])
                    chi += (v.conj() @ rho.matrix @ v).real * np.outer(v, v.conj())
        best = min(best, hs_norm_sq(rho.matrix - chi))
    return float(best)


@dataclass
class DiscontinuityProbeResult:
    m: int
    x: float
    epsilon: float
    trace_distance_between_sequences: float
    min_gap: float
    n_ab_standard: float
    n_ab_unbiased: float
    measurements_used: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "x": self.x,
            "epsilon": self.epsilon,
            "trace_distance": self.trace_distance_between_sequences,
            "gap": self.min_gap,
            "n_ab_standard": self.n_ab_standard,
            "n_ab_unbiased": self.n_ab_unbiased,
        }


def _probe_spectra(m: int) -> tuple[np.ndarray, np.ndarray]:
    if m == 2:
        return np.array([0.7, 0.3]), np.array([0.6, 0.4])
    lam = np.arange(m, 0, -1, dtype=float)
    delta = np.arange(2 * m, m, -1, dtype=float)
    return lam / lam.sum(), delta / delta.sum()


def fourier_basis(d: int) -> np.ndarray:
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


def _unique_n_ab(rho: DensityMatrix, group_tol: float):
    bases = []
    for side in ("A", "B"):
        es = eig_hermitian(rho.reduced(side), group_tol)
        if any(len(g) > 1 for g in es.groups):
            raise DegenerateMarginalError(
                f"perturbed state has a degenerate {side} marginal at tolerance {group_tol}")
        bases.append(np.array(es.eigenvectors))
    meas = ProjectiveMeasurement.two_sided(*bases)
    return disturbance(rho, meas), meas


def discontinuity_probe(m: int, x: float, epsilon: float, seed: int = 0,
                        group_tol: float = DEFAULT_GROUP_TOL) -> DiscontinuityProbeResult:
    """Compare N_AB along two perturbations of a Werner state.

    ``rho_n = (rho_x + eps sigma)/(1 + eps)`` uses a product state diagonal in
    the computational bases; the second sequence replaces the B factor of
    sigma by the same spectrum in the Fourier basis. Both perturbed states have
    nondegenerate marginals, so the feasible two-sided measurement is unique
    and N_AB is evaluated exactly. ``seed`` is recorded only; the probe is
    deterministic.
    """
    if m < 2:
        raise ValidationError("m must be >= 2")
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise ValidationError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    base = werner(m, x).matrix
    lam, delta = _probe_spectra(m)
    F = fourier_basis(m)
    sigma = np.kron(np.diag(lam), np.diag(delta))
    sigma_u = np.kron(np.diag(lam), (F * delta) @ F.conj().T)
    rho_n = DensityMatrix((base + epsilon * sigma) / (1 + epsilon), (m, m))
    varrho_n = DensityMatrix((base + epsilon * sigma_u) / (1 + epsilon), (m, m))
    n_std, meas_std = _unique_n_ab(rho_n, group_tol)
    n_unb, meas_unb = _unique_n_ab(varrho_n, group_tol)
    dist = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho_n.matrix - varrho_n.matrix))))
    return DiscontinuityProbeResult(m, float(x), epsilon, dist, abs(n_unb - n_std),
                                    n_std, n_unb, (meas_std, meas_unb))
