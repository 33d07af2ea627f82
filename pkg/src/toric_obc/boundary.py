"""Field-induced dynamics of the boundary degrees of freedom.

A weak field ``h_x sum X`` lets edge configurations tunnel into each other.
With ``lam = h_x / (-2 j_m)`` the leading hop over ``R`` ring sites is
``J_R = h_x * lam**(R + 1)``, and the single-excitation band of the
resulting long-range Ising chain is ``eps_k = 2 Re sum_R J_R e^{ikR}``.

``resolvent_shift`` evaluates the perturbative chain numerically on an
actual lattice, as an oracle for the closed forms.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .groundspace import BoundaryConfig, star_group_masks
from .lattice import LatticeSpec

__all__ = [
    "BoundaryCouplings",
    "DispersionCurve",
    "delta_E",
    "effective_couplings",
    "epsilon_finite",
    "epsilon_limit",
    "epsilon_cos",
    "epsilon_direct",
    "limit_bound",
    "dispersion_curve",
    "momentum_grid",
    "segment_length",
    "resolvent_shift",
    "ordering_factor",
]

MAX_CHAIN_ENTRIES = 2e8


@dataclass(frozen=True)
class BoundaryCouplings:
    h_x: float
    j_m: float = 1.0
    l_boundary: int = 40

    def __post_init__(self):
        if self.j_m <= 0:
            raise ValueError("j_m must be positive")
        if self.l_boundary < 2 or self.l_boundary % 2:
            raise ValueError("boundary length must be an even integer >= 2")

    @property
    def lam(self) -> float:
        return self.h_x / (-2.0 * self.j_m)

    def require_convergent(self) -> None:
        if abs(self.lam) >= 1.0:
            raise ValueError(f"|lambda| = {abs(self.lam)} >= 1: geometric series diverges")


def delta_E(R: int, c: BoundaryCouplings) -> float:
    """Leading-order shift for a hop over ``R`` sites: ``h^(R+2) / (-2 j_m)^(R+1)``."""
    if R < 1:
        raise ValueError("R must be >= 1")
    return c.h_x ** (R + 2) / (-2.0 * c.j_m) ** (R + 1)


def effective_couplings(c: BoundaryCouplings, r_max: int) -> np.ndarray:
    """``J_R`` for ``R = 1..r_max`` (index 0 holds ``J_1``)."""
    if not 1 <= r_max <= c.l_boundary // 2:
        raise ValueError(f"r_max must be in 1..{c.l_boundary // 2}")
    R = np.arange(1, r_max + 1)
    return c.h_x * c.lam ** (R + 1)


def epsilon_finite(k, c: BoundaryCouplings):
    c.require_convergent()
    k = np.asarray(k, dtype=float)
    lam, half = c.lam, c.l_boundary // 2
    num = (
        np.cos(k)
        - lam
        + lam ** (half + 1) * np.cos(k * half)
        - lam**half * np.cos(k * (half + 1))
    )
    den = 1.0 + lam**2 - 2.0 * lam * np.cos(k)
    return 2.0 * c.h_x * lam**2 * num / den


def epsilon_limit(k, c: BoundaryCouplings):
    c.require_convergent()
    k = np.asarray(k, dtype=float)
    lam = c.lam
    return 2.0 * c.h_x * lam**2 * (np.cos(k) - lam) / (1.0 + lam**2 - 2.0 * lam * np.cos(k))


def epsilon_cos(k, c: BoundaryCouplings):
    return 2.0 * c.h_x * c.lam**2 * np.cos(np.asarray(k, dtype=float))


def epsilon_direct(k, c: BoundaryCouplings):
    """``2 Re sum_{R=1}^{L/2} J_R e^{ikR}`` summed term by term."""
    k = np.asarray(k, dtype=float)
    J = effective_couplings(c, c.l_boundary // 2)
    R = np.arange(1, J.size + 1)
    return 2.0 * np.real(np.exp(1j * np.multiply.outer(k, R)) @ J)


def limit_bound(c: BoundaryCouplings) -> float:
    """Upper bound on ``|epsilon_limit - epsilon_finite|``."""
    lam = abs(c.lam)
    return 4.0 * abs(c.h_x) * lam**2 * lam ** (c.l_boundary // 2) / (1.0 - lam) ** 2


def momentum_grid(l_boundary: int) -> np.ndarray:
    return -math.pi + 2.0 * math.pi * np.arange(l_boundary) / l_boundary


@dataclass
class DispersionCurve:
    k_grid: np.ndarray
    eps_finite: np.ndarray
    eps_limit: np.ndarray
    eps_cos: np.ndarray
    interpolated: bool = False

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "eps_finite", "eps_limit", "eps_cos"])
        for row in zip(self.k_grid, self.eps_finite, self.eps_limit, self.eps_cos):
            w.writerow([format(float(x), ".17g") for x in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "interpolated": self.interpolated,
            "k": [float(x) for x in self.k_grid],
            "eps_finite": [float(x) for x in self.eps_finite],
            "eps_limit": [float(x) for x in self.eps_limit],
            "eps_cos": [float(x) for x in self.eps_cos],
        }


def dispersion_curve(c: BoundaryCouplings, kpoints: int | None = None) -> DispersionCurve:
    """Curves on the ring momenta, or on a finer display grid of ``kpoints``."""
    c.require_convergent()
    if kpoints is None or kpoints == c.l_boundary:
        k = momentum_grid(c.l_boundary)
        interp = False
    else:
        if kpoints < 2:
            raise ValueError("kpoints must be >= 2")
        k = -math.pi + 2.0 * math.pi * np.arange(kpoints) / kpoints
        interp = True
    return DispersionCurve(k, epsilon_finite(k, c), epsilon_limit(k, c), epsilon_cos(k, c), interp)


# -- perturbative chain on the lattice ----------------------------------------


def segment_length(frm: BoundaryConfig, to: BoundaryConfig) -> int:
    """Length of the cyclic run of ring positions separating two configurations.

    Complementary patterns are the same state, so the set bits of the
    difference and of its complement are both candidates; the shorter
    contiguous arc is returned.
    """
    d = (frm ^ to).e
    L = len(d)
    lengths = []
    for pattern in (d, tuple(1 - b for b in d)):
        ones = sum(pattern)
        if ones == 0 or ones == L:
            continue
        starts = sum(1 for i in range(L) if pattern[i] and not pattern[i - 1])
        if starts == 1:
            lengths.append(ones)
    if not lengths:
        raise ValueError("configurations do not differ by one contiguous ring segment")
    return min(lengths)


def _violations(states: np.ndarray, plaquette_masks: list[int]) -> np.ndarray:
    n = np.zeros(states.shape, dtype=np.int64)
    for m in plaquette_masks:
        n += (np.bitwise_count(states & np.uint64(m)) & 1).astype(np.int64)
    return n


def _apply_field(states: np.ndarray, amps: np.ndarray, n_qubits: int, h: float):
    flips = np.uint64(1) << np.arange(n_qubits, dtype=np.uint64)
    new_states = (states[:, None] ^ flips[None, :]).ravel()
    new_amps = np.repeat(amps * h, n_qubits)
    uniq, inv = np.unique(new_states, return_inverse=True)
    return uniq, np.bincount(inv, weights=new_amps)


def resolvent_shift(
    lat: LatticeSpec,
    frm: BoundaryConfig,
    to: BoundaryConfig,
    c: BoundaryCouplings,
    order: int,
) -> float:
    """``<to| V (G V)^(order-1) |from>`` with ``V = h_x sum X`` and the reduced
    resolvent ``G = Q / (E_0 - H_0)``.

    Both states are single-configuration ground states (star-symmetrized),
    propagated as sparse amplitude tables over basis states; there is no
    fixed qubit limit, only a cap on the table width.
    The field commutes with every star, so intermediate states keep all
    stars satisfied and ``E_0 - H_0 = -2 j_m * (violated plaquettes)``
    exactly; components back in the ground space are projected out.
    """
    if lat.periodic or lat.dual:
        raise ValueError("resolvent chain is implemented on the plaquette-boundary lattice")
    if not 1 <= order <= 6:
        raise ValueError("order must be in 1..6")
    if len(frm) != lat.ring_length or len(to) != lat.ring_length:
        raise ValueError("configuration length does not match the ring")
    segment_length(frm, to)
    group = star_group_masks(lat)
    n = lat.spin_count
    # worst-case width of the last propagation step
    width = group.size * math.comb(n, order - 1) * n
    if width > MAX_CHAIN_ENTRIES:
        raise ValueError(
            f"chain of order {order} on {n} spins needs ~{width:.1e} amplitudes "
            f"(limit {MAX_CHAIN_ENTRIES:.0e})"
        )
    norm = 1.0 / math.sqrt(group.size)
    states = np.unique(group ^ np.uint64(frm.mask(lat)))
    amps = np.full(states.size, norm)
    target = set(int(s) for s in group ^ np.uint64(to.mask(lat)))
    pmasks = [op.z for op in lat.plaquette_ops]

    states, amps = _apply_field(states, amps, n, c.h_x)
    for _ in range(order - 1):
        nv = _violations(states, pmasks)
        keep = nv > 0
        states, amps = states[keep], amps[keep] / (-2.0 * c.j_m * nv[keep])
        if states.size == 0:
            return 0.0
        states, amps = _apply_field(states, amps, n, c.h_x)
    hit = np.fromiter((int(s) in target for s in states), dtype=bool, count=states.size)
    return float(np.sum(amps[hit]) * norm)


@lru_cache(maxsize=None)
def ordering_factor(R: int) -> float:
    """Sum over flip orderings for a straight boundary segment of ``R`` sites.

    The segment is flipped by ``R + 2`` spins forming a path through ``R + 1``
    boundary plaquettes: one ring spin at each end and ``R`` bulk spokes
    in between.  Each ordering contributes the product of ``1 / n`` over
    its intermediate states, ``n`` being the number of violated
    plaquettes.  The exact leading-order amplitude is
    ``ordering_factor(R) * delta_E(R)``.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    n_edges = R + 2
    # edge j touches plaquettes j-1 and j (clipped to 0..R)
    touch = [
        sum(1 << p for p in (j - 1, j) if 0 <= p <= R)
        for j in range(n_edges)
    ]
    full = (1 << n_edges) - 1
    weight = {0: 1.0}
    for size in range(1, n_edges + 1):
        for subset in itertools.combinations(range(n_edges), size):
            s = sum(1 << j for j in subset)
            acc = sum(weight[s & ~(1 << j)] for j in subset)
            if s != full:
                defects = 0
                for j in subset:
                    defects ^= touch[j]
                acc /= bin(defects).count("1")
            weight[s] = acc
    return weight[full]
