import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toric_obc.pauli import (
    GF2Basis,
    PauliOp,
    StabilizerGroup,
    commutes,
    gf2_rank,
    independent_generators,
    multiply,
)


def naive_rank(rows, n_cols):
    """Row reduction on a plain list-of-lists, one bit per entry."""
    mat = [[(r >> j) & 1 for j in range(n_cols)] for r in rows]
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                mat[i] = [a ^ b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def pauli_strategy(n):
    return st.builds(
        PauliOp,
        x=st.integers(0, (1 << n) - 1),
        z=st.integers(0, (1 << n) - 1),
        n=st.just(n),
    )


def to_matrix(p: PauliOp) -> np.ndarray:
    X = np.array([[0, 1], [1, 0]])
    Z = np.diag([1, -1])
    out = np.eye(1)
    # qubit q is bit q of the basis index, so it is the rightmost tensor factor for q = 0
    for q in reversed(range(p.n)):
        f = np.eye(2)
        if (p.x >> q) & 1:
            f = X @ f
        if (p.z >> q) & 1:
            f = f @ Z
        out = np.kron(out, f)
    return p.sign * out


def test_identity_and_weight():
    assert PauliOp.identity(5).is_identity
    assert PauliOp.x_on([0, 2], 4).weight == 2
    p = PauliOp(0b0110, 0b0011, 4)
    assert p.weight == 3
    assert p.support == frozenset({0, 1, 2})


def test_size_mismatch_rejected():
    with pytest.raises(ValueError):
        commutes(PauliOp.x_on([0], 2), PauliOp.z_on([0], 3))


def test_anticommuting_product_rejected():
    with pytest.raises(ValueError):
        multiply(PauliOp.x_on([0], 1), PauliOp.z_on([0], 1))


def test_xz_on_same_and_different_qubits():
    assert not commutes(PauliOp.x_on([0], 2), PauliOp.z_on([0], 2))
    assert commutes(PauliOp.x_on([0, 1], 2), PauliOp.z_on([0, 1], 2))
    assert commutes(PauliOp.x_on([0], 2), PauliOp.z_on([1], 2))


@given(pauli_strategy(3), pauli_strategy(3))
def test_commutation_matches_matrices(p, q):
    a, b = to_matrix(p), to_matrix(q)
    assert commutes(p, q) == np.allclose(a @ b, b @ a)
    assert commutes(p, q) == commutes(q, p)


@given(pauli_strategy(3), pauli_strategy(3))
def test_product_matches_matrices(p, q):
    if not commutes(p, q):
        return
    assert np.allclose(to_matrix(multiply(p, q)), to_matrix(p) @ to_matrix(q))


@given(pauli_strategy(6))
def test_square_is_identity_up_to_xz_overlap(p):
    # (XZ)^2 = -1 on every site carrying both factors
    sq = multiply(p, p)
    assert sq.is_identity
    assert sq.sign == (-1) ** (p.x & p.z).bit_count()


@settings(max_examples=200)
@given(st.integers(1, 80), st.data())
def test_rank_matches_naive_elimination(n_cols, data):
    rows = data.draw(st.lists(st.integers(0, (1 << n_cols) - 1), max_size=30))
    assert gf2_rank(rows, n_cols) == naive_rank(rows, n_cols)


def test_rank_accepts_dense_array():
    mat = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert gf2_rank(mat) == 2
    assert gf2_rank(np.zeros((0, 4), dtype=int)) == 0


@given(st.lists(st.integers(0, (1 << 70) - 1), max_size=25))
def test_incremental_basis_agrees_with_rank(rows):
    basis = GF2Basis()
    for r in rows:
        basis.add(r)
    assert len(basis) == naive_rank(rows, 70)
    for r in rows:
        assert basis.contains(r)


def test_independent_generators_keeps_input_order():
    n = 3
    a = PauliOp.z_on([0, 1], n)
    b = PauliOp.z_on([1, 2], n)
    c = PauliOp.z_on([0, 2], n)  # a * b
    d = PauliOp.x_on([0, 1, 2], n)
    g = independent_generators([a, b, c, d])
    assert g.generators == (a, b, d)
    assert g.is_full_rank
    assert g.contains(c)
    assert not g.contains(PauliOp.z_on([0], n))


def test_independent_generators_rejects_noncommuting():
    with pytest.raises(ValueError):
        independent_generators([PauliOp.x_on([0], 1), PauliOp.z_on([0], 1)])


def test_restricted_rank_bell_pair():
    g = StabilizerGroup((PauliOp.x_on([0, 1], 2), PauliOp.z_on([0, 1], 2)), 2)
    assert g.restricted_rank([0]) == 2
    assert g.restricted_rank([0, 1]) == 2
    assert g.restricted_rank([]) == 0
