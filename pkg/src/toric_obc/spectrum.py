"""Exact diagonalization of the toric-code Hamiltonian with a transverse field.

``H = -j_e sum_s A_s - j_m sum_p B_p + h_x sum_i X_i`` is applied matrix-free:
Z-type terms become one diagonal vector computed from masked parities, and
X-type terms are index permutations ``b -> b ^ mask``.  On the star-boundary
lattice the field follows the basis exchange and acts along Z.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as sla

from .lattice import LatticeSpec, w_operator
from .pauli import PauliOp

__all__ = [
    "HamiltonianParams",
    "SparseOperator",
    "Eigenpairs",
    "ClusterTruncated",
    "ConvergenceError",
    "build_hamiltonian",
    "lowest_eigenpairs",
    "degeneracy_from_spectrum",
    "ground_splitting",
    "loglog_slope",
    "MAX_ED_QUBITS",
]

log = logging.getLogger(__name__)

MAX_ED_QUBITS = 26
DENSE_FALLBACK_DIM = 1 << 12


class ClusterTruncated(RuntimeError):
    """The lowest cluster reaches the last computed eigenvalue: increase k."""


class ConvergenceError(RuntimeError):
    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals


@dataclass(frozen=True)
class HamiltonianParams:
    j_e: float = 1.0
    j_m: float = 1.0
    h_x: float = 0.0

    def __post_init__(self):
        if self.j_e < 0 or self.j_m < 0:
            raise ValueError("couplings j_e, j_m must be non-negative")


@dataclass
class SparseOperator:
    """Real Hermitian operator built from pure-Z and pure-X Pauli strings."""

    n_qubits: int
    diag_terms: list[tuple[int, float]] = field(default_factory=list)
    flip_terms: list[tuple[int, float]] = field(default_factory=list)
    constant: float = 0.0

    def __post_init__(self):
        self._diag = None

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def add(self, op: PauliOp, coeff: float) -> None:
        if op.x and op.z:
            raise ValueError("only pure X or pure Z strings are supported")
        c = coeff * op.sign
        if op.x:
            self.flip_terms.append((op.x, c))
        elif op.z:
            self.diag_terms.append((op.z, c))
        else:
            self.constant += c
        self._diag = None

    @property
    def norm_bound(self) -> float:
        return abs(self.constant) + sum(abs(c) for _, c in self.diag_terms + self.flip_terms)

    def diagonal(self) -> np.ndarray:
        if self._diag is None:
            idx = np.arange(self.dim, dtype=np.uint64)
            diag = np.full(self.dim, self.constant, dtype=float)
            for mask, c in self.diag_terms:
                parity = np.bitwise_count(idx & np.uint64(mask)) & 1
                diag += c * (1.0 - 2.0 * parity)
            self._diag = diag
        return self._diag

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        squeeze = v.ndim == 1
        if squeeze:
            v = v[:, None]
        out = self.diagonal()[:, None] * v
        idx = np.arange(self.dim, dtype=np.uint64)
        for mask, c in self.flip_terms:
            out += c * v[idx ^ np.uint64(mask)]
        return out[:, 0] if squeeze else out

    def to_dense(self) -> np.ndarray:
        if self.dim > DENSE_FALLBACK_DIM * 4:
            raise ValueError("operator too large for a dense matrix")
        mat = np.diag(self.diagonal()).astype(float)
        idx = np.arange(self.dim)
        for mask, c in self.flip_terms:
            mat[idx ^ mask, idx] += c
        return mat

    def as_linear_operator(self) -> sla.LinearOperator:
        return sla.LinearOperator(
            (self.dim, self.dim), matvec=self.matvec, matmat=self.matvec, dtype=float
        )


def build_hamiltonian(lat: LatticeSpec, p: HamiltonianParams) -> SparseOperator:
    n = lat.spin_count
    if n > MAX_ED_QUBITS:
        raise ValueError(f"{n} qubits exceed the exact-diagonalization limit {MAX_ED_QUBITS}")
    op = SparseOperator(n)
    for s in lat.star_ops:
        op.add(s, -p.j_e)
    for b in lat.plaquette_ops:
        op.add(b, -p.j_m)
    if p.h_x:
        for q in range(n):
            op.add(lat._op((q,), x_type=True), p.h_x)
    return op


@dataclass
class Eigenpairs:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    method: str

    def __iter__(self):
        return iter(zip(self.values, self.vectors.T))

    def __len__(self):
        return len(self.values)


def lowest_eigenpairs(
    op: SparseOperator, k: int, tol: float = 1e-10, seed: int = 0, method: str = "auto"
) -> Eigenpairs:
    """The ``k`` lowest eigenpairs, ascending.

    ``method="auto"`` uses dense ``eigh`` up to dimension 4096 and
    implicitly restarted Lanczos (ARPACK) on the matrix-free operator above.
    """
    if method not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    dense = method == "dense" or (method == "auto" and op.dim <= DENSE_FALLBACK_DIM)
    if not dense and not 1 <= k <= 64:
        raise ValueError("k must be in 1..64 for the iterative solver")
    k = min(k, op.dim)
    if not dense and k >= op.dim - 1:
        dense = True
    if dense:
        vals, vecs = scipy.linalg.eigh(op.to_dense(), subset_by_index=(0, k - 1))
        method = "dense"
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(op.dim)
        ncv = min(op.dim - 1, max(4 * k + 1, 40))
        try:
            vals, vecs = sla.eigsh(
                op.as_linear_operator(), k=k, which="SA", tol=tol / 10, v0=v0, ncv=ncv
            )
        except sla.ArpackNoConvergence as exc:
            res = _residuals(op, exc.eigenvalues, exc.eigenvectors)
            raise ConvergenceError(f"Lanczos did not converge for k={k}", res) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        method = "lanczos"
    res = _residuals(op, vals, vecs)
    scale = max(1.0, op.norm_bound)
    if np.any(res > tol * scale):
        log.warning("eigen-residuals up to %.3g exceed tol %.3g", res.max(), tol * scale)
    return Eigenpairs(np.asarray(vals), np.asarray(vecs), res, method)


def _residuals(op: SparseOperator, vals, vecs) -> np.ndarray:
    if vecs is None or len(vals) == 0:
        return np.array([])
    hv = op.matvec(vecs)
    return np.linalg.norm(hv - vecs * np.asarray(vals)[None, :], axis=0)


def degeneracy_from_spectrum(values, cluster_tol: float | None = None) -> int:
    """Size of the lowest cluster of sorted ``values``.

    Consecutive gaps up to ``cluster_tol`` join the cluster.  The default
    is ``1e-8`` times the spread of the given values (at least ``1e-8``).
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("no eigenvalues")
    if np.any(np.diff(values) < -1e-12 * max(1.0, np.abs(values).max())):
        raise ValueError("values must be sorted ascending")
    if cluster_tol is None:
        cluster_tol = 1e-8 * max(1.0, float(values[-1] - values[0]))
    gaps = np.diff(values)
    big = np.nonzero(gaps > cluster_tol)[0]
    if big.size == 0:
        raise ClusterTruncated(f"all {values.size} values lie in one cluster; increase k")
    return int(big[0] + 1)


def ground_splitting(
    lat: LatticeSpec, params: HamiltonianParams, n_levels: int, fix_corners: bool = False
) -> float:
    """Spread of the lowest ``n_levels`` eigenvalues.

    With ``fix_corners`` the edge operators at the four corners, which
    commute with every term of ``H``, are pinned to +1 by a commuting
    penalty; ``n_levels`` then refers to that sector alone.
    """
    op = build_hamiltonian(lat, params)
    if fix_corners:
        if lat.periodic:
            raise ValueError("periodic lattice has no corners")
        mu = op.norm_bound
        for i in lat.corner_positions:
            op.add(w_operator(lat, i), -mu)
    pairs = lowest_eigenpairs(op, n_levels)
    return float(pairs.values[n_levels - 1] - pairs.values[0])


def loglog_slope(xs, ys) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)
