import numpy as np
import pytest

from bootstrap_parent import lattice as lat
from bootstrap_parent.axioms import DenseBackend, StabilizerBackend
from bootstrap_parent.hamiltonian import (
    CoverInvalid,
    LtqoParams,
    build,
    build_from_regions,
    check_commuting,
    check_ltqo,
    cover_radius,
    cross_check_pair,
    dense_kernel_projector,
    dense_ltqo,
    frustration_free,
    kernels_equal,
    local_uniqueness,
    manifest,
    restrict,
    split_tree,
    validate_cover,
    weight_reduce,
    write_manifest,
)
from bootstrap_parent.lattice import FaceCoord as F
from bootstrap_parent.stabilizer import (
    PauliString,
    StabilizerCode,
    insert_anyon_pair,
    make_cluster_state,
    make_product_state,
    make_toric_code,
    make_wall_state,
)


@pytest.fixture(scope="module")
def toric():
    return StabilizerBackend(make_toric_code(20, 20))


@pytest.fixture(scope="module")
def h(toric):
    return build(toric, lat.red_hexagon_cover(toric.extent))


def patch(c):
    return frozenset({c, c + (1, 0), c - (1, 0), c + (0, 1), c - (0, 1), c + (1, -1)})


def test_cover_report(toric, h):
    rep = validate_cover(toric, h.cover)
    assert rep.passed
    assert all(v == 0 for *_, v in rep.markov_pairs)
    assert len(rep.overlap_classes) == 2


def test_commuting_with_dense_cross_check(h):
    rep = check_commuting(h)
    assert rep.passed
    checked = [c for c in rep.cross_checks if c["status"] == "checked"]
    assert checked and all(c["agree"] and c["norm"] < 1e-9 for c in checked)


def test_cross_check_detects_noncommuting():
    c1 = StabilizerCode(2, (PauliString(2, 0b01, 0),), frozenset(), 0b11)
    c2 = StabilizerCode(2, (PauliString(2, 0, 0b01),), frozenset(), 0b11)
    res = cross_check_pair(c1, c2)
    assert res["agree"] and res["norm"] == pytest.approx(0.5)
    c3 = StabilizerCode(2, (PauliString(2, 0, 0b11),), frozenset(), 0b11)
    res = cross_check_pair(c1, c3)
    assert res["agree"] and res["norm"] > 0.1


def test_frustration_free_and_control(toric, h):
    assert frustration_free(h)
    moved = StabilizerBackend(insert_anyon_pair(toric.state, "e", [F(2, 2), F(3, 2)]))
    assert not frustration_free(h, moved)


def test_kernel_dimension(h):
    assert restrict(h, h.extent.faces()).log2_dim == 2


def test_missing_region_rejected(toric, h):
    with pytest.raises(CoverInvalid) as e:
        build(toric, h.cover.without(0))
    assert e.value.report.cover_misses


def test_non_markov_cover_rejected():
    ext = lat.Extent(20, 20, True)
    be = StabilizerBackend(make_cluster_state(ext.faces(), ext))
    rep = validate_cover(be, lat.red_hexagon_cover(ext))
    assert not rep.passed
    assert max(v for *_, v in rep.markov_pairs) > 0


def test_anyon_pair_build(toric):
    s = insert_anyon_pair(toric.state, "e", [F(q, 2) for q in range(2, 13)])
    be = StabilizerBackend(s)
    hh = build(be, lat.red_hexagon_cover(be.extent))
    assert check_commuting(hh, cross_check=False).passed
    assert frustration_free(hh)
    k = restrict(hh, be.extent.faces())
    assert k.dim > 1
    assert k.log2_dim == 2  # the same as the vacuum: abelian pairs add no degeneracy


def test_product_state_hamiltonian():
    ext = lat.Extent(20, 20, True)
    be = StabilizerBackend(make_product_state(ext.faces(), ext))
    hh = build(be, lat.red_hexagon_cover(ext))
    assert check_commuting(hh).passed and frustration_free(hh)
    assert restrict(hh, ext.faces()).log2_dim == 0


def test_cells_cover_hamiltonian():
    be = StabilizerBackend(make_toric_code(40, 40))
    d = lat.build_cell_decomposition(lat.MIN_PITCH, be.extent)
    hh = build(be, lat.cells_to_cover(d))
    assert check_commuting(hh, cross_check=False).passed
    assert frustration_free(hh)
    assert cover_radius(hh.cover) <= 10


def test_ltqo_balls():
    be = StabilizerBackend(make_toric_code(30, 30))
    hh = build(be, lat.red_hexagon_cover(be.extent), validate=False)
    rep = check_ltqo(hh, LtqoParams(r_max=3, centers=((10, 10), (12, 11))))
    assert rep.ell == 2 * cover_radius(hh.cover) + 1
    checked = [e for e in rep.entries if e.status == "checked"]
    assert checked and rep.passed


def test_ltqo_band_control(h):
    band = [f for f in h.extent.faces() if f.r in (3, 4)]
    lf, mo, _ = local_uniqueness(h, band, h.extent.faces())
    assert not lf and not mo


def test_dense_ltqo_agrees_with_stabilizer(h):
    c = F(7, 7)
    d = patch(c)
    reduced = weight_reduce(h, near=d).hamiltonian
    rep = dense_ltqo(reduced, {c}, d)
    assert rep["kernel_marginals"] < 1e-8 and rep["sandwich"] < 1e-8
    assert local_uniqueness(reduced, {c}, d)[:2] == (True, True)
    # dropping one face exposes a logical operator on the centre
    small = d - {c + (1, -1)}
    rep = dense_ltqo(reduced, {c}, small)
    assert rep["kernel_marginals"] > 0.1
    assert local_uniqueness(reduced, {c}, small)[0] is False


def test_weight_reduction(h):
    wr = weight_reduce(h)
    assert wr.max_weight <= 3
    assert all(n.cmi == 0 for n in wr.nodes)
    assert kernels_equal(h, wr.hamiltonian)


def test_split_tree_leaves_cover_region(toric):
    x = lat.ball(F(10, 10), 2)
    leaves, nodes = split_tree(toric, x, toric.extent)
    assert frozenset().union(*leaves) == x
    assert all(len(l) <= 3 for l in leaves)
    for n in nodes:
        assert n.a | n.b | n.c == n.region


def test_dense_kernel_projector_agreement(toric):
    x = patch(F(10, 10))
    small = build_from_regions(toric, [x], toric.extent)
    reduced = weight_reduce(small).hamiltonian
    p1 = dense_kernel_projector(small, x)
    p2 = dense_kernel_projector(reduced, x)
    assert np.abs(p1 - p2).max() < 1e-8
    assert np.trace(p1).real == pytest.approx(2 ** restrict(small, x).log2_dim)


def test_dense_backend_hamiltonian():
    # seven faces of a product of Bell pairs along rows: dense terms, exact Markov splits
    ext = lat.Extent(1, 7, False)
    s = make_product_state(ext.faces(), ext)
    rho = s.densify(ext.faces())
    be = DenseBackend(rho, extent=ext)
    regions = [frozenset(F(q, 0) for q in range(i, i + 3)) for i in range(5)]
    hh = build_from_regions(be, regions, ext)
    assert check_commuting(hh, cross_check=False).passed
    assert frustration_free(hh)
    assert restrict(hh, ext.faces()).dim == 1


def test_manifest(h, tmp_path):
    m = manifest(h, {"seed": 0})
    assert len(m["terms"]) == len(h.terms)
    write_manifest(h, tmp_path / "m.json")
    assert (tmp_path / "m.json").exists()


def test_wall_hamiltonian():
    p = lat.MIN_WALL_PITCH
    be = StabilizerBackend(make_wall_state(4 * p, 4 * p, 2 * p))
    d = lat.wall_decomposition(p, be.extent, 2 * p)
    hh = build(be, lat.cells_to_cover(d))
    assert check_commuting(hh, cross_check=False).passed and frustration_free(hh)
    ext = be.extent

    def single(a, dd):
        return lat.wall_intervals(dd, ext, d.wall_rows) <= 1

    rep = check_ltqo(hh, LtqoParams(r_max=1, centers=((5, 2 * p), (5, 2 * p - 1))), region_filter=single)
    assert rep.passed and any(e.status == "checked" for e in rep.entries)
