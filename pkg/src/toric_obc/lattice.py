"""Rectangular toric-code lattices with spins on links.

Geometry
--------
An ``rows x cols`` grid of unit cells (plaquettes) with vertices ``(r, c)``,
``0 <= r <= rows``, ``0 <= c <= cols``.  Spins sit on links, indexed
row-major over horizontal links first, then vertical links:

* horizontal link ``(r, c)`` joins ``(r, c)`` and ``(r, c + 1)``;
  index ``r * cols + c``
* vertical link ``(r, c)`` joins ``(r, c)`` and ``(r + 1, c)``;
  index ``H + r * (cols + 1) + c`` where ``H`` is the number of horizontal links

For the periodic variant row ``rows`` and column ``cols`` wrap onto 0, so
there are ``rows * cols`` links of each orientation.

Row 0 is drawn at the top.  The boundary ring starts at horizontal link
``(0, 0)`` and runs counterclockwise: down the left edge, right along the
bottom edge, up the right edge and back left along the top edge.  Ring
position ``i`` names the vertex shared by ring links ``i`` and ``i + 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .pauli import PauliOp

__all__ = [
    "Boundary",
    "LatticeSpec",
    "build_lattice",
    "plaquette_support",
    "star_support",
    "w_operator",
]


class Boundary(str, enum.Enum):
    """Boundary-condition variant.

    ``PLAQUETTE``: star couplings removed along the boundary, only
    plaquettes constrain boundary spins.  ``STAR``: the X <-> Z exchanged
    version, where the face operators are X-type and only they reach the
    boundary.  ``PERIODIC``: the torus.
    """

    PLAQUETTE = "plaquette"
    STAR = "star"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class LatticeSpec:
    rows: int
    cols: int
    boundary: Boundary = Boundary.PLAQUETTE

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.rows < 2 or self.cols < 2:
            raise ValueError(
                f"lattice needs rows >= 2 and cols >= 2, got {self.rows}x{self.cols}"
            )

    # -- link indexing -------------------------------------------------------

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    @property
    def dual(self) -> bool:
        """True when X and Z roles are exchanged (star-boundary variant)."""
        return self.boundary is Boundary.STAR

    @cached_property
    def n_horizontal(self) -> int:
        return self.rows * self.cols if self.periodic else (self.rows + 1) * self.cols

    @cached_property
    def spin_count(self) -> int:
        if self.periodic:
            return 2 * self.rows * self.cols
        return 2 * self.rows * self.cols + self.rows + self.cols

    def h(self, r: int, c: int) -> int:
        if self.periodic:
            r, c = r % self.rows, c % self.cols
        elif not (0 <= r <= self.rows and 0 <= c < self.cols):
            raise IndexError(f"no horizontal link ({r}, {c})")
        return r * self.cols + c

    def v(self, r: int, c: int) -> int:
        if self.periodic:
            r, c = r % self.rows, c % self.cols
            return self.n_horizontal + r * self.cols + c
        if not (0 <= r < self.rows and 0 <= c <= self.cols):
            raise IndexError(f"no vertical link ({r}, {c})")
        return self.n_horizontal + r * (self.cols + 1) + c

    def link(self, q: int) -> tuple[str, int, int]:
        """Inverse of :meth:`h` / :meth:`v`: ``('h'|'v', r, c)``."""
        if not 0 <= q < self.spin_count:
            raise IndexError(f"spin {q} out of range")
        if q < self.n_horizontal:
            return ("h", *divmod(q, self.cols))
        width = self.cols if self.periodic else self.cols + 1
        return ("v", *divmod(q - self.n_horizontal, width))

    def endpoints(self, q: int) -> tuple[tuple[int, int], tuple[int, int]]:
        kind, r, c = self.link(q)
        if kind == "h":
            other = (r, (c + 1) % self.cols if self.periodic else c + 1)
        else:
            other = ((r + 1) % self.rows if self.periodic else r + 1, c)
        return (r, c), other

    # -- faces and vertices ---------------------------------------------------

    def face_links(self, r: int, c: int) -> tuple[int, int, int, int]:
        return (self.h(r, c), self.h(r + 1, c), self.v(r, c), self.v(r, c + 1))

    def vertex_links(self, r: int, c: int) -> tuple[int, ...]:
        """Links incident to vertex ``(r, c)`` (2, 3 or 4 of them under OBC)."""
        if self.periodic:
            return (self.h(r, c - 1), self.h(r, c), self.v(r - 1, c), self.v(r, c))
        out = []
        if c > 0:
            out.append(self.h(r, c - 1))
        if c < self.cols:
            out.append(self.h(r, c))
        if r > 0:
            out.append(self.v(r - 1, c))
        if r < self.rows:
            out.append(self.v(r, c))
        return tuple(out)

    def is_boundary_vertex(self, r: int, c: int) -> bool:
        if self.periodic:
            return False
        return r in (0, self.rows) or c in (0, self.cols)

    @cached_property
    def faces(self) -> tuple[tuple[int, int], ...]:
        return tuple((r, c) for r in range(self.rows) for c in range(self.cols))

    @cached_property
    def interior_vertices(self) -> tuple[tuple[int, int], ...]:
        if self.periodic:
            return tuple((r, c) for r in range(self.rows) for c in range(self.cols))
        return tuple(
            (r, c) for r in range(1, self.rows) for c in range(1, self.cols)
        )

    @cached_property
    def _face_supports(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(self.face_links(r, c)) for r, c in self.faces)

    @cached_property
    def _vertex_supports(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(self.vertex_links(r, c)) for r, c in self.interior_vertices)

    @cached_property
    def plaquette_supports(self) -> tuple[frozenset[int], ...]:
        """Supports of the Z-type Hamiltonian terms."""
        return self._vertex_supports if self.dual else self._face_supports

    @cached_property
    def star_supports(self) -> tuple[frozenset[int], ...]:
        """Supports of the X-type Hamiltonian terms."""
        return self._face_supports if self.dual else self._vertex_supports

    @property
    def n_plaquettes(self) -> int:
        return len(self.plaquette_supports)

    @property
    def n_stars(self) -> int:
        return len(self.star_supports)

    def _op(self, support, x_type: bool) -> PauliOp:
        """Pauli string of the requested type after the basis exchange."""
        if x_type != self.dual:
            return PauliOp.x_on(support, self.spin_count)
        return PauliOp.z_on(support, self.spin_count)

    @cached_property
    def plaquette_ops(self) -> tuple[PauliOp, ...]:
        return tuple(
            PauliOp.z_on(s, self.spin_count) for s in self.plaquette_supports
        )

    @cached_property
    def star_ops(self) -> tuple[PauliOp, ...]:
        return tuple(PauliOp.x_on(s, self.spin_count) for s in self.star_supports)

    @property
    def stabilizer_ops(self) -> tuple[PauliOp, ...]:
        return self.plaquette_ops + self.star_ops

    # -- boundary ring --------------------------------------------------------

    @cached_property
    def boundary_ring(self) -> tuple[int, ...]:
        if self.periodic:
            return ()
        m, n = self.rows, self.cols
        ring = [self.h(0, 0)]
        ring += [self.v(r, 0) for r in range(m)]
        ring += [self.h(m, c) for c in range(n)]
        ring += [self.v(r, n) for r in range(m - 1, -1, -1)]
        ring += [self.h(0, c) for c in range(n - 1, 0, -1)]
        return tuple(ring)

    @property
    def ring_length(self) -> int:
        return len(self.boundary_ring)

    @cached_property
    def ring_position(self) -> dict[int, int]:
        """Spin index -> ring position."""
        return {q: i for i, q in enumerate(self.boundary_ring)}

    def ring_vertex(self, i: int) -> tuple[int, int]:
        """Vertex shared by ring links ``i`` and ``i + 1`` (cyclic)."""
        L = self.ring_length
        a = set(self.endpoints(self.boundary_ring[i % L]))
        b = set(self.endpoints(self.boundary_ring[(i + 1) % L]))
        (vtx,) = a & b
        return vtx

    @cached_property
    def corner_positions(self) -> tuple[int, ...]:
        corners = {(0, 0), (0, self.cols), (self.rows, 0), (self.rows, self.cols)}
        return tuple(
            i for i in range(self.ring_length) if self.ring_vertex(i) in corners
        )

    def ring_spoke(self, i: int) -> int | None:
        """The bulk link at ring position ``i``; None at a corner."""
        ring = set(self.boundary_ring)
        spokes = [q for q in self.vertex_links(*self.ring_vertex(i)) if q not in ring]
        return spokes[0] if spokes else None

    @cached_property
    def boundary_plaquettes(self) -> tuple[int, ...]:
        """Indices of face plaquettes that contain a ring spin."""
        ring = set(self.boundary_ring)
        return tuple(
            p for p, s in enumerate(self._face_supports) if s & ring
        )


def build_lattice(rows: int, cols: int, boundary: Boundary | str = Boundary.PLAQUETTE) -> LatticeSpec:
    return LatticeSpec(rows, cols, Boundary(boundary))


def plaquette_support(lat: LatticeSpec, p: int) -> frozenset[int]:
    if not 0 <= p < lat.n_plaquettes:
        raise IndexError(f"plaquette {p} out of range (0..{lat.n_plaquettes - 1})")
    return lat.plaquette_supports[p]


def star_support(lat: LatticeSpec, s) -> frozenset[int]:
    """Support of star ``s``.

    ``s`` is either an index into the enumerated stars or a vertex ``(r, c)``.
    Boundary vertices carry no star on the plaquette-boundary lattice and
    are rejected.
    """
    if isinstance(s, tuple):
        r, c = s
        if lat.dual:
            raise ValueError("vertex addressing is not defined on the star-boundary lattice")
        if not lat.periodic and not (0 <= r <= lat.rows and 0 <= c <= lat.cols):
            raise IndexError(f"vertex {s} out of range")
        if lat.is_boundary_vertex(r, c):
            raise ValueError(f"vertex {s} lies on the boundary and has no star")
        return frozenset(lat.vertex_links(r, c))
    if not 0 <= s < lat.n_stars:
        raise IndexError(f"star {s} out of range (0..{lat.n_stars - 1})")
    return lat.star_supports[s]


def w_operator(lat: LatticeSpec, i: int) -> PauliOp:
    """Edge operator at ring position ``i``.

    Flips ring spins ``i`` and ``i + 1`` and the single bulk spin meeting
    them; at the four corners only the two ring spins.  It is the truncated
    star of the boundary vertex, hence commutes with every plaquette.
    """
    if lat.periodic:
        raise ValueError("periodic lattice has no boundary")
    L = lat.ring_length
    if not 0 <= i < L:
        raise IndexError(f"ring position {i} out of range (0..{L - 1})")
    support = {lat.boundary_ring[i], lat.boundary_ring[(i + 1) % L]}
    spoke = lat.ring_spoke(i)
    if spoke is not None:
        support.add(spoke)
    return lat._op(support, x_type=True)
