import inspect
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toric_obc import entropy as ent
from toric_obc.entropy import (
    Bipartition,
    CutKind,
    dense_entropy,
    entropy_of_spectrum,
    entropy_report,
    f_factor,
    paper_prediction,
    reduced_density_matrix,
    ring_crossings,
    stabilizer_entropy,
)
from toric_obc.groundspace import CoefficientFamily, dense_ground_state, stabilizer_ground_state
from toric_obc.lattice import build_lattice

LN2 = math.log(2)


@pytest.fixture(scope="module")
def small():
    out = {}
    for dims in [(2, 2), (3, 2)]:
        lat = build_lattice(*dims)
        out[dims] = (lat, stabilizer_ground_state(lat), dense_ground_state(lat))
    return out


def spin_subsets(n):
    return st.sets(st.integers(0, n - 1))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2)]), st.data())
def test_rank_equals_dense(small, dims, data):
    lat, g, psi = small[dims]
    a = data.draw(spin_subsets(lat.spin_count))
    part = Bipartition.from_spins(lat, a)
    if min(len(a), lat.spin_count - len(a)) > ent.MAX_DENSE_SIDE:
        return
    assert stabilizer_entropy(g, part) == pytest.approx(dense_entropy(psi, part), abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.sets(st.integers(0, 11), min_size=3, max_size=9), st.floats(0.1, 1.0))
def test_pure_state_symmetry(a, amp):
    lat = build_lattice(2, 2)
    psi = dense_ground_state(lat, CoefficientFamily.geometric(amp, {2: 0.3}))
    b = set(range(12)) - a
    sa = entropy_of_spectrum(np.linalg.eigvalsh(reduced_density_matrix(psi, a)))
    sb = entropy_of_spectrum(np.linalg.eigvalsh(reduced_density_matrix(psi, b)))
    assert sa == pytest.approx(sb, abs=1e-9)


def test_reduced_density_matrix_of_product_state():
    from toric_obc.groundspace import DenseState

    # |0> on qubit 0, |+> on qubit 1: index bit q is qubit q
    amp = np.zeros(4)
    amp[0b00] = amp[0b10] = 1 / math.sqrt(2)
    psi = DenseState(amp, 2)
    assert np.allclose(reduced_density_matrix(psi, [0]), [[1, 0], [0, 0]])
    assert np.allclose(reduced_density_matrix(psi, [1]), [[0.5, 0.5], [0.5, 0.5]])


def marginal_purity(lat, part, a, side):
    """Purity of the boundary-pattern distribution restricted to the side's crossings.

    Exhaustive over all 2^L patterns, each weighted by a^(2|e|).
    """
    L = lat.ring_length
    keep = ring_crossings(part, side)
    marg = {}
    for e in itertools.product((0, 1), repeat=L):
        w = a ** (2 * sum(e))
        key = tuple(e[i] for i in keep)
        marg[key] = marg.get(key, 0.0) + w
    z = sum(marg.values())
    return sum((v / z) ** 2 for v in marg.values())


@pytest.mark.parametrize("a", [1.0, 0.8, 0.5, 0.2])
@pytest.mark.parametrize("rect", [(0, 0, 1, 1), (0, 0, 1, 2), (0, 0, 2, 1), (0, 1, 2, 2)])
def test_f_factor_matches_marginal_sum(a, rect):
    lat = build_lattice(2, 2)
    part = Bipartition.from_rect(lat, *rect)
    fam = CoefficientFamily.equal() if a == 1.0 else CoefficientFamily.geometric(a)
    for side in "AB":
        assert f_factor(lat, part, fam, side) == pytest.approx(
            marginal_purity(lat, part, a, side), rel=1e-12
        )


def test_f_factor_limits():
    lat = build_lattice(3, 3)
    whole = Bipartition.from_rect(lat, 0, 0, 3, 3)
    assert f_factor(lat, whole, CoefficientFamily.equal(), "A") == 1.0
    corner = Bipartition.from_rect(lat, 0, 0, 1, 1)
    fs = [f_factor(lat, corner, CoefficientFamily.geometric(a), "A") for a in (0.5, 1e-2, 1e-4)]
    assert fs[0] < fs[1] < fs[2] <= 1.0
    assert fs[2] == pytest.approx(1.0, abs=1e-7)


def concentric(lat, k):
    """k x k plaquette block in the middle of the lattice."""
    r0 = (lat.rows - k) // 2
    c0 = (lat.cols - k) // 2
    return Bipartition.from_rect(lat, r0, c0, r0 + k, c0 + k)


def test_area_law_slope_and_intercept():
    lat = build_lattice(10, 10)
    g = stabilizer_ground_state(lat)
    xs, ys = [], []
    for k in range(1, 7):
        part = concentric(lat, k)
        assert part.kind is CutKind.BULK_ONLY and part.in_bulk_regime
        xs.append(part.cut_length)
        ys.append(stabilizer_entropy(g, part))
    slope, intercept = np.polyfit(xs, ys, 1)
    assert slope == pytest.approx(LN2, abs=1e-12)
    assert intercept == pytest.approx(-LN2, abs=1e-12)


@pytest.mark.parametrize("dims", [(4, 4), (6, 5)])
def test_bulk_rectangles_exact(dims):
    lat = build_lattice(*dims)
    g = stabilizer_ground_state(lat)
    for r0, r1 in itertools.combinations(range(1, lat.rows), 2):
        for c0, c1 in itertools.combinations(range(1, lat.cols), 2):
            part = Bipartition.from_rect(lat, r0, c0, r1, c1)
            s_bulk, _, _ = paper_prediction(part, CoefficientFamily.equal())
            assert stabilizer_entropy(g, part) == pytest.approx(s_bulk, abs=1e-12)


def single_arc(part):
    return len(ring_crossings(part, "A")) == 1


def test_single_arc_boundary_cuts_match_formula():
    lat = build_lattice(4, 4)
    g = stabilizer_ground_state(lat)
    fam = CoefficientFamily.equal()
    checked = 0
    for r0, r1 in itertools.combinations(range(lat.rows + 1), 2):
        for c0, c1 in itertools.combinations(range(lat.cols + 1), 2):
            part = Bipartition.from_rect(lat, r0, c0, r1, c1)
            if part.kind is not CutKind.BOUNDARY_CROSSING or not single_arc(part):
                continue
            _, s_full, _ = paper_prediction(part, fam)
            assert stabilizer_entropy(g, part) == pytest.approx(s_full, abs=1e-12)
            checked += 1
    assert checked > 20


def test_two_arc_cut_is_overestimated_by_one_bit():
    # a horizontal band through the middle touches the ring in two arcs
    lat = build_lattice(4, 4)
    g = stabilizer_ground_state(lat)
    part = Bipartition.from_rect(lat, 1, 0, 3, 4)
    assert len(ring_crossings(part, "A")) == 2
    _, s_full, _ = paper_prediction(part, CoefficientFamily.equal())
    assert s_full - stabilizer_entropy(g, part) == pytest.approx(LN2, abs=1e-12)


def test_every_cut_of_2x2_exceeds_bulk_value():
    lat = build_lattice(2, 2)
    g = stabilizer_ground_state(lat)
    for bits in range(1, (1 << 12) - 1):
        part = Bipartition.from_spins(lat, [q for q in range(12) if bits >> q & 1])
        s_bulk = (part.cut_length - 1) * LN2
        s = stabilizer_entropy(g, part)
        if part.kind is CutKind.BOUNDARY_CROSSING:
            assert s >= s_bulk - 1e-12


@settings(max_examples=30, deadline=None)
@given(spin_subsets(12), st.floats(0.05, 0.95))
def test_geometric_family_strict_excess(a_spins, a):
    lat = build_lattice(2, 2)
    part = Bipartition.from_spins(lat, a_spins)
    if part.kind is not CutKind.BOUNDARY_CROSSING:
        return
    psi = dense_ground_state(lat, CoefficientFamily.geometric(a))
    assert dense_entropy(psi, part) > (part.cut_length - 1) * LN2 + 1e-9


def test_geometric_corner_cut_between_bulk_and_equal():
    lat = build_lattice(2, 2)
    part = Bipartition.from_rect(lat, 0, 0, 1, 1)
    s_eq = dense_entropy(dense_ground_state(lat), part)
    s_geo = dense_entropy(dense_ground_state(lat, CoefficientFamily.geometric(0.5)), part)
    assert (part.cut_length - 1) * LN2 < s_geo < s_eq


def test_geometric_half_cut_exceeds_equal_amplitude():
    # the flat superposition is not the maximum for every cut
    lat = build_lattice(2, 2)
    part = Bipartition.from_rect(lat, 0, 0, 1, 2)
    s_eq = dense_entropy(dense_ground_state(lat), part)
    s_geo = dense_entropy(dense_ground_state(lat, CoefficientFamily.geometric(0.5)), part)
    assert s_geo > s_eq


def test_report_fields_and_trivial_cuts():
    lat = build_lattice(2, 2)
    psi = dense_ground_state(lat)
    rep = entropy_report(Bipartition.from_rect(lat, 0, 0, 1, 1), psi=psi)
    d = rep.to_dict()
    for key in ["s_rank", "s_dense", "s_paper_bulk", "s_paper_full", "f_a", "f_b", "cut_length", "kind"]:
        assert key in d
    assert d["kind"] == "boundary_crossing"
    empty = entropy_report(Bipartition.from_spins(lat, []), psi=psi)
    assert empty.s_rank == 0.0 and empty.s_dense == 0.0
    geo = entropy_report(Bipartition.from_rect(lat, 0, 0, 1, 1), CoefficientFamily.geometric(0.5))
    assert geo.s_rank is None and geo.notes


def test_out_of_regime_flag():
    lat = build_lattice(4, 4)
    near = Bipartition.from_spins(lat, lat.face_links(1, 1))
    far = Bipartition.from_rect(lat, 1, 1, 3, 3)
    assert near.kind is CutKind.BULK_ONLY
    assert not near.in_bulk_regime
    assert far.kind is CutKind.BULK_ONLY
    assert not far.in_bulk_regime
    lat6 = build_lattice(6, 6)
    assert Bipartition.from_rect(lat6, 2, 2, 4, 4).in_bulk_regime


def test_prediction_examples():
    lat = build_lattice(6, 6)
    part = Bipartition.from_rect(lat, 2, 2, 3, 3)
    assert part.cut_length == 4
    s_bulk, s_full, regime = paper_prediction(part, CoefficientFamily.equal())
    assert s_bulk == pytest.approx(3 * LN2)
    assert s_full == s_bulk and regime


def test_entropy_api_takes_no_couplings():
    for fn in (stabilizer_entropy, dense_entropy, f_factor, paper_prediction, entropy_report):
        names = set(inspect.signature(fn).parameters)
        assert not names & {"j_e", "j_m", "h_x", "params", "je", "jm", "hx"}


def test_bipartition_validation():
    lat = build_lattice(2, 2)
    with pytest.raises(ValueError):
        Bipartition.from_spins(lat, [12])
    with pytest.raises(ValueError):
        Bipartition.from_rect(lat, 1, 0, 1, 2)
    with pytest.raises(ValueError):
        Bipartition.from_rect(lat, 0, 0, 3, 1)
