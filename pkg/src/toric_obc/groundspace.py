"""Ground space of the open-boundary toric code.

Every ground state is an equal-weight sum over the bulk star group applied
to a superposition of boundary configurations, each configuration being a
product of edge operators ``w_operator(i)`` on the reference state with all
bits 0.  Basis index bit ``q`` is qubit ``q``; bit value 0 is the
``+1`` eigenstate of Z.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lattice import LatticeSpec, w_operator
from .pauli import PauliOp, StabilizerGroup, gf2_rank, independent_generators

__all__ = [
    "BoundaryConfig",
    "CoefficientFamily",
    "DenseState",
    "degeneracy_log2",
    "torus_logical_operators",
    "stabilizer_ground_state",
    "dense_ground_state",
    "star_group_masks",
    "config_masks",
    "MAX_DENSE_QUBITS",
]

MAX_DENSE_QUBITS = 26
MAX_STAR_GROUP_LOG2 = 20
MAX_DEFAULT_RING = 16


@dataclass(frozen=True)
class BoundaryConfig:
    """Which edge operators are applied, one bit per ring position.

    ``e`` and its complement give the same physical state; the canonical
    representative has ``e[-1] == 0``.
    """

    e: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(int(b) for b in self.e))
        if any(b not in (0, 1) for b in self.e):
            raise ValueError("configuration entries must be 0 or 1")
        if not self.e:
            raise ValueError("empty configuration")

    @classmethod
    def from_positions(cls, ring_length: int, positions: Iterable[int]) -> "BoundaryConfig":
        e = [0] * ring_length
        for i in positions:
            e[i % ring_length] ^= 1
        return cls(tuple(e))

    @property
    def canonical(self) -> bool:
        return self.e[-1] == 0

    def canonicalize(self) -> "BoundaryConfig":
        if self.canonical:
            return self
        return BoundaryConfig(tuple(1 - b for b in self.e))

    @property
    def weight(self) -> int:
        return sum(self.e)

    def __len__(self):
        return len(self.e)

    def __xor__(self, other: "BoundaryConfig") -> "BoundaryConfig":
        if len(self) != len(other):
            raise ValueError("ring length mismatch")
        return BoundaryConfig(tuple(a ^ b for a, b in zip(self.e, other.e)))

    def operator(self, lat: LatticeSpec) -> PauliOp:
        if len(self) != lat.ring_length:
            raise ValueError("configuration length does not match the ring")
        op = PauliOp.identity(lat.spin_count)
        for i, b in enumerate(self.e):
            if b:
                op = op * w_operator(lat, i)
        return op

    def mask(self, lat: LatticeSpec) -> int:
        op = self.operator(lat)
        return op.x | op.z


class FamilyKind(str, enum.Enum):
    EQUAL = "equal"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class CoefficientFamily:
    """Boundary superposition weights.

    ``GEOMETRIC`` gives configuration ``e`` the weight ``a**l * exp(i phi_l)``
    with ``l`` the Hamming weight of the canonical representative.  Missing
    phases are 0; ``phi_1`` is pinned to 0.  Weights are left unnormalized.
    """

    kind: FamilyKind = FamilyKind.EQUAL
    a: float = 1.0
    phases: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        object.__setattr__(self, "phases", {int(k): float(v) for k, v in dict(self.phases).items()})
        if self.kind is FamilyKind.GEOMETRIC and not 0.0 < self.a <= 1.0:
            raise ValueError(f"geometric family needs 0 < a <= 1, got {self.a}")
        if self.phases.get(1, 0.0) != 0.0:
            raise ValueError("phi_1 is fixed to 0")

    @classmethod
    def equal(cls) -> "CoefficientFamily":
        return cls(FamilyKind.EQUAL)

    @classmethod
    def geometric(cls, a: float, phases: Mapping[int, float] | None = None) -> "CoefficientFamily":
        return cls(FamilyKind.GEOMETRIC, a, phases or {})

    @property
    def is_equal(self) -> bool:
        return self.kind is FamilyKind.EQUAL or (self.a == 1.0 and not any(self.phases.values()))

    def coefficient(self, weight: int) -> complex:
        if self.kind is FamilyKind.EQUAL:
            return 1.0 + 0j
        return self.a**weight * cmath.exp(1j * self.phases.get(weight, 0.0))

    def coefficients(self, weights: np.ndarray) -> np.ndarray:
        weights = np.asarray(weights)
        if self.kind is FamilyKind.EQUAL:
            return np.ones(weights.shape, dtype=complex)
        phase = np.array([self.phases.get(int(w), 0.0) for w in weights.ravel()]).reshape(weights.shape)
        return self.a ** weights.astype(float) * np.exp(1j * phase)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "a": self.a, "phases": {str(k): v for k, v in sorted(self.phases.items())}}


@dataclass
class DenseState:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude vector length must be 2**n_qubits")

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> "DenseState":
        amp = np.zeros(1 << n_qubits, dtype=complex)
        amp[index] = 1.0
        return cls(amp, n_qubits)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def apply(self, op: PauliOp) -> np.ndarray:
        """Amplitudes of ``op |psi>``."""
        idx = np.arange(1 << self.n_qubits, dtype=np.uint64)
        parity = np.bitwise_count(idx & np.uint64(op.z)) & 1
        phased = self.amplitudes * (1 - 2 * parity.astype(np.int8)) * op.sign
        out = np.empty_like(phased)
        out[idx ^ np.uint64(op.x)] = phased
        return out

    def expectation(self, op: PauliOp) -> complex:
        return complex(np.vdot(self.amplitudes, self.apply(op)))


def _all_stabilizer_rows(lat: LatticeSpec) -> list[int]:
    return [op.row() for op in lat.stabilizer_ops]


def degeneracy_log2(lat: LatticeSpec) -> int:
    """log2 of the ground-space dimension: qubits minus stabilizer rank."""
    return lat.spin_count - gf2_rank(_all_stabilizer_rows(lat), 2 * lat.spin_count)


def torus_logical_operators(lat: LatticeSpec) -> tuple[PauliOp, PauliOp]:
    """Two X-type loops around the torus cycles.

    The first flips the vertical links of row 0 (it crosses every column),
    the second the horizontal links of column 0.
    """
    if not lat.periodic:
        raise ValueError("logical loops are only defined on the periodic lattice")
    n = lat.spin_count
    s1 = PauliOp.x_on((lat.v(0, c) for c in range(lat.cols)), n)
    s2 = PauliOp.x_on((lat.h(r, 0) for r in range(lat.rows)), n)
    return s1, s2


def stabilizer_ground_state(lat: LatticeSpec) -> StabilizerGroup:
    """The equal-amplitude ground state as a full-rank stabilizer group.

    Generators: every plaquette and star, then edge operators in ring order
    until the group is full rank.
    """
    if lat.periodic:
        raise ValueError("equal-amplitude boundary state needs an open boundary")
    ops = list(lat.stabilizer_ops) + [w_operator(lat, i) for i in range(lat.ring_length)]
    group = independent_generators(ops)
    if not group.is_full_rank:
        raise RuntimeError(
            f"stabilizer group has rank {len(group)} on {lat.spin_count} qubits; geometry is inconsistent"
        )
    return group


def _subset_xors(masks: Sequence[int]) -> np.ndarray:
    """XOR of every subset of ``masks``; subset bit ``j`` selects ``masks[j]``."""
    out = np.zeros(1, dtype=np.uint64)
    for m in masks:
        out = np.concatenate([out, out ^ np.uint64(m)])
    return out


def star_group_masks(lat: LatticeSpec) -> np.ndarray:
    """Flip masks of all elements of the bulk star group."""
    stars = [op.x | op.z for op in lat.star_ops]
    if len(stars) > MAX_STAR_GROUP_LOG2:
        raise ValueError(f"star group of order 2^{len(stars)} is too large to enumerate")
    return _subset_xors(stars)


def config_masks(lat: LatticeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Flip masks and Hamming weights of all canonical configurations.

    Canonical config number ``j`` applies ``w_operator(i)`` for every set
    bit ``i`` of ``j`` (``i < L - 1``).
    """
    L = lat.ring_length
    ws = [w_operator(lat, i) for i in range(L - 1)]
    masks = _subset_xors([w.x | w.z for w in ws])
    weights = np.bitwise_count(np.arange(1 << (L - 1), dtype=np.uint64)).astype(np.int64)
    return masks, weights


def dense_ground_state(
    lat: LatticeSpec,
    fam: CoefficientFamily | None = None,
    configs: Sequence[BoundaryConfig] | None = None,
) -> DenseState:
    """Normalized amplitude vector of the ground state for ``fam``.

    Without ``configs`` all canonical boundary configurations are summed
    (requires ring length <= 16); otherwise only the given ones.
    """
    fam = fam or CoefficientFamily.equal()
    n = lat.spin_count
    if lat.periodic:
        raise ValueError("dense ground state construction needs an open boundary")
    if lat.dual:
        raise ValueError("build the plaquette-boundary state and exchange bases instead")
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"{n} qubits exceed the dense limit of {MAX_DENSE_QUBITS}")
    group = star_group_masks(lat)
    if configs is None:
        if lat.ring_length > MAX_DEFAULT_RING:
            raise ValueError("ring too long to enumerate every configuration; pass configs")
        masks, weights = config_masks(lat)
    else:
        canon = sorted({c.canonicalize() for c in configs}, key=lambda c: c.e)
        masks = np.array([c.mask(lat) for c in canon], dtype=np.uint64)
        weights = np.array([c.weight for c in canon], dtype=np.int64)
    coeff = fam.coefficients(weights)
    amp = np.zeros(1 << n, dtype=complex)
    idx = (masks[:, None] ^ group[None, :]).ravel()
    np.add.at(amp, idx, np.repeat(coeff, group.size))
    amp /= np.linalg.norm(amp)
    return DenseState(amp, n)


def ground_energy(lat: LatticeSpec, j_e: float = 1.0, j_m: float = 1.0) -> float:
    return -j_e * lat.n_stars - j_m * lat.n_plaquettes

