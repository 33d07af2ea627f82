"""Toric code with plaquette-only open boundaries: ground space, entanglement
and perturbative boundary dynamics."""

from .lattice import Boundary, LatticeSpec, build_lattice, plaquette_support, star_support, w_operator
from .pauli import PauliOp, StabilizerGroup, commutes, gf2_rank, independent_generators, multiply

__all__ = [
    "Boundary",
    "LatticeSpec",
    "build_lattice",
    "plaquette_support",
    "star_support",
    "w_operator",
    "PauliOp",
    "StabilizerGroup",
    "commutes",
    "gf2_rank",
    "independent_generators",
    "multiply",
]
