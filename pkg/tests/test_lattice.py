import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bootstrap_parent import lattice as lat
from bootstrap_parent.lattice import FaceCoord as F

O = F(0, 0)


def test_neighbors_symmetric_and_unit_distance():
    for g in lat.neighbors(O):
        assert O in lat.neighbors(g)
        assert lat.hex_distance(O, g) == 1
    ring = lat.ring(O)
    for a, b in zip(ring, ring[1:] + ring[:1]):
        assert b in lat.neighbors(a)


@pytest.mark.parametrize("r", range(5))
def test_ball_size_and_perimeter(r):
    b = lat.ball(O, r)
    assert len(b) == 3 * r * (r + 1) + 1
    assert lat.boundary_length(b) == 6 * (2 * r + 1)
    assert lat.is_disk(b)


def test_annulus_and_holes():
    ring = lat.ball(O, 2) - {O}
    assert not lat.is_simply_connected(ring)
    assert lat.is_annulus(ring)
    assert lat.holes(ring) == [frozenset({O})]
    assert not lat.is_connected({O, F(3, 0)})


def test_arc_partitions():
    parts = lat.arc_partitions(O)
    assert len(parts) == 15
    assert len({p for p in parts}) == 15
    for b, d in parts:
        assert b | d == lat.neighbors(O) and not b & d
        assert lat.arc_count(O, b) == 1 and lat.arc_count(O, d) == 1
        assert len(lat.cut_edges(O, b)) == 2


def grow(seed_moves):
    a = {O}
    for k in seed_moves:
        border = sorted(lat.neighborhood(a))
        a.add(border[k % len(border)])
    return frozenset(a)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1000), max_size=12), st.integers(0, 1000))
def test_local_add_remove_agree_with_global(moves, pick):
    a = grow(moves)
    border = sorted(lat.neighborhood(a))
    f = border[pick % len(border)]
    if lat.is_disk(a):
        assert lat.can_add(a, f) == lat.is_disk(a | {f})
        g = sorted(a)[pick % len(a)]
        if len(a) > 1:
            assert lat.can_remove(a, g) == lat.is_disk(a - {g})


def test_canonical_shape_symmetry():
    shape = frozenset({O, F(1, 0), F(1, 1), F(3, -1)})
    key = lat.canonical_shape(shape)
    moved = frozenset(lat.rotate60(lat.reflect(f)) + (5, 7) for f in shape)
    assert lat.canonical_shape(moved) == key
    other = frozenset({O, F(1, 0), F(2, 0), F(3, 0)})
    assert lat.canonical_shape(other) != key


def test_figure_coords():
    # drawing neighbours (1,1) and (0,1) map to axial neighbours
    faces = lat.from_figure_coords([(0, 0), (1, 1), (0, 1), (1, 0)])
    for f in faces - {O}:
        assert lat.hex_distance(O, f) == 1


def test_torus_distance_and_wrap():
    ext = lat.Extent(10, 10, True)
    assert ext.distance(F(0, 0), F(9, 0)) == 1
    assert ext.wrap(F(-1, 12)) == F(9, 2)
    with pytest.raises(ValueError):
        ext.wrap_region(lat.ball(O, 6))
    patch = lat.Extent(5, 5, False)
    with pytest.raises(ValueError):
        patch.wrap(F(5, 0))


def test_red_distances_over_one_period():
    ext = lat.Extent(20, 20, True)
    red = lat.red_faces(ext)
    dist = {min(ext.distance(F(q, r), g) for g in red) for q in range(5) for r in range(5)}
    assert dist == {0, 1, 2, 3}


def test_red_cover_condition_and_control():
    ext = lat.Extent(20, 20, True)
    cover = lat.red_hexagon_cover(ext)
    assert len(cover.regions) == 16
    assert not lat.cover_condition_misses(cover)
    assert lat.cover_condition_misses(cover.without(3))
    for x in cover.regions:
        assert lat.is_disk(x)


def test_cell_cover_at_minimum_pitch():
    ext = lat.Extent(4 * lat.MIN_PITCH, 4 * lat.MIN_PITCH, True)
    d = lat.build_cell_decomposition(lat.MIN_PITCH, ext)
    assert lat.decomposition_violations(d) == []
    cover = lat.cells_to_cover(d)
    assert not lat.cover_condition_misses(cover)


def test_minimum_pitch_constants():
    assert lat.minimum_pitch().pitch == lat.MIN_PITCH
    assert lat.feasible_cell_params(lat.MIN_PITCH - 1) is None


@pytest.mark.slow
def test_minimum_wall_pitch_constant():
    assert lat.minimum_wall_pitch() == lat.MIN_WALL_PITCH


def test_wall_intervals():
    ext = lat.Extent(26, 26, True)
    rows = (13, 0)
    assert lat.wall_intervals(lat.ball(F(5, 13), 2), ext, rows) == 1
    assert lat.wall_intervals(lat.ball(F(5, 6), 2), ext, rows) == 0
    # a region reaching across one wall twice, joined away from it
    u = {F(q, r) for q in (0, 1) for r in range(10, 16)} | {F(q, r) for q in (5, 6) for r in range(10, 16)}
    u |= {F(q, 10) for q in range(7)}
    assert lat.wall_intervals(u, ext, rows) == 2


def test_wall_decomposition_valid():
    p = lat.MIN_WALL_PITCH
    ext = lat.Extent(4 * p, 4 * p, True)
    d = lat.wall_decomposition(p, ext, 2 * p)
    assert lat.wall_violations(d) == []
    with pytest.raises(ValueError):
        lat.wall_decomposition(p, ext, p + 1)


def test_region_file_roundtrip(tmp_path):
    a = lat.ball(F(3, -2), 1)
    path = tmp_path / "a.txt"
    lat.write_region(path, a)
    assert lat.read_region(path) == a
    assert lat.parse_region(lat.format_region(a)) == a
