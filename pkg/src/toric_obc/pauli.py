"""Binary symplectic Pauli strings and GF(2) linear algebra.

A Pauli string on ``n`` qubits is stored as two integer bitmasks, ``x`` and
``z``, plus a sign.  The operator is ``sign * prod_q X_q^{x_q} Z_q^{z_q}``
with the X factor written to the left of the Z factor on every qubit, so
every element of the group generated by real Paulis carries a sign of
``+1`` or ``-1`` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PauliOp",
    "StabilizerGroup",
    "commutes",
    "multiply",
    "gf2_rank",
    "independent_generators",
    "GF2Basis",
    "pack_rows",
]


def _mask(support: Iterable[int]) -> int:
    m = 0
    for q in support:
        m |= 1 << int(q)
    return m


@dataclass(frozen=True)
class PauliOp:
    x: int
    z: int
    n: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.n < 0 or (self.x | self.z) >> self.n:
            raise ValueError("bitmask exceeds qubit count")

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(0, 0, n)

    @classmethod
    def x_on(cls, support: Iterable[int], n: int) -> "PauliOp":
        return cls(_mask(support), 0, n)

    @classmethod
    def z_on(cls, support: Iterable[int], n: int) -> "PauliOp":
        return cls(0, _mask(support), n)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> frozenset[int]:
        m = self.x | self.z
        return frozenset(q for q in range(self.n) if (m >> q) & 1)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def row(self) -> int:
        """Symplectic row ``(x | z)`` packed as one integer, x in the low bits."""
        return self.x | (self.z << self.n)

    def swap_xz(self) -> "PauliOp":
        """Basis exchange X <-> Z.  Only defined for pure X or pure Z strings."""
        if self.x & self.z:
            raise ValueError("swap_xz needs a pure X or pure Z string")
        return PauliOp(self.z, self.x, self.n, self.sign)

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return multiply(self, other)

    def __repr__(self):
        chars = []
        for q in range(self.n):
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            chars.append("IXZY"[xb + 2 * zb])
        return f"PauliOp({'+' if self.sign > 0 else '-'}{''.join(chars)})"


def _check_size(p: PauliOp, q: PauliOp) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")


def commutes(p: PauliOp, q: PauliOp) -> bool:
    """True iff the symplectic product of ``p`` and ``q`` vanishes mod 2."""
    _check_size(p, q)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2 == 0


def multiply(p: PauliOp, q: PauliOp) -> PauliOp:
    """Product ``p @ q``.

    Anticommuting factors are rejected: their product is anti-Hermitian and
    never occurs among the operators this package builds.
    """
    _check_size(p, q)
    if not commutes(p, q):
        raise ValueError("product of anticommuting Pauli strings is not Hermitian")
    sign = p.sign * q.sign
    if (p.z & q.x).bit_count() % 2:
        sign = -sign
    return PauliOp(p.x ^ q.x, p.z ^ q.z, p.n, sign)


def pack_rows(rows, n_cols: int | None = None) -> tuple[np.ndarray, int]:
    """Pack a bit matrix into uint64 words.

    ``rows`` is either a 2-D array-like of 0/1 entries or a sequence of
    Python integers used as bitmasks (then ``n_cols`` is required unless it
    can be inferred from the largest mask).
    """
    if isinstance(rows, np.ndarray) or (
        len(rows) > 0 and not isinstance(rows[0], (int, np.integer))
    ):
        bits = np.asarray(rows, dtype=bool)
        if bits.ndim != 2:
            raise ValueError("bit matrix must be 2-D")
        n_cols = bits.shape[1]
        n_words = max(1, -(-n_cols // 64))
        padded = np.zeros((bits.shape[0], n_words * 64), dtype=bool)
        padded[:, :n_cols] = bits
        # little-endian bit order inside each byte, bytes little-endian in the word
        packed = np.packbits(padded, axis=1, bitorder="little")
        return packed.view("<u8").copy(), n_cols
    ints = [int(r) for r in rows]
    if n_cols is None:
        n_cols = max((r.bit_length() for r in ints), default=0)
    n_words = max(1, -(-n_cols // 64))
    out = np.zeros((len(ints), n_words), dtype=np.uint64)
    word_mask = (1 << 64) - 1
    for i, r in enumerate(ints):
        for w in range(n_words):
            out[i, w] = (r >> (64 * w)) & word_mask
    return out, n_cols


def gf2_rank(rows, n_cols: int | None = None) -> int:
    """Rank over GF(2) by Gaussian elimination on word-packed rows.

    The input is never modified.
    """
    if len(rows) == 0:
        return 0
    mat, n_cols = pack_rows(rows, n_cols)
    mat = mat.copy()
    n_rows = mat.shape[0]
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1) << np.uint64(b)
        has = (mat[rank:, w] & bit) != 0
        if not has.any():
            continue
        piv = rank + int(np.argmax(has))
        if piv != rank:
            mat[[rank, piv]] = mat[[piv, rank]]
        below = np.nonzero((mat[rank + 1 :, w] & bit) != 0)[0] + rank + 1
        if below.size:
            mat[below] ^= mat[rank]
        rank += 1
    return rank


class GF2Basis:
    """Incremental row-echelon basis over GF(2) with integer rows.

    ``add`` returns True when the new row increases the span.
    """

    def __init__(self):
        self._pivots: dict[int, int] = {}

    def __len__(self):
        return len(self._pivots)

    def reduce(self, row: int) -> int:
        while row:
            top = row.bit_length() - 1
            piv = self._pivots.get(top)
            if piv is None:
                return row
            row ^= piv
        return 0

    def add(self, row: int) -> bool:
        r = self.reduce(row)
        if r == 0:
            return False
        self._pivots[r.bit_length() - 1] = r
        return True

    def contains(self, row: int) -> bool:
        return self.reduce(row) == 0


@dataclass(frozen=True)
class StabilizerGroup:
    """Independent, mutually commuting generators on ``n_qubits`` qubits."""

    generators: tuple[PauliOp, ...]
    n_qubits: int

    def __len__(self):
        return len(self.generators)

    @property
    def is_full_rank(self) -> bool:
        return len(self.generators) == self.n_qubits

    def rows(self) -> list[int]:
        return [g.row() for g in self.generators]

    def restricted_rank(self, qubits: Iterable[int]) -> int:
        """GF(2) rank of the generator rows keeping only columns on ``qubits``."""
        keep = _mask(qubits)
        n = self.n_qubits
        cols = keep | (keep << n)
        return gf2_rank([r & cols for r in self.rows()], 2 * n)

    def contains(self, op: PauliOp) -> bool:
        """Membership up to sign."""
        basis = GF2Basis()
        for r in self.rows():
            basis.add(r)
        return basis.contains(op.row())


def independent_generators(ops: Sequence[PauliOp]) -> StabilizerGroup:
    """Greedy maximal independent subset of commuting ``ops``; input order wins."""
    ops = list(ops)
    if not ops:
        raise ValueError("need at least one operator")
    n = ops[0].n
    for i, p in enumerate(ops):
        if p.n != n:
            raise ValueError("qubit count mismatch")
        for q in ops[i + 1 :]:
            if not commutes(p, q):
                raise ValueError(f"non-commuting pair: {p!r}, {q!r}")
    basis = GF2Basis()
    kept = [p for p in ops if basis.add(p.row())]
    return StabilizerGroup(tuple(kept), n)
