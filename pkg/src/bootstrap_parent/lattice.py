"""Hexagonal face lattice in axial coordinates.

Faces are ``FaceCoord(q, r)``; the six neighbours of ``(q, r)`` are
``(q±1, r)``, ``(q, r±1)``, ``(q+1, r-1)`` and ``(q-1, r+1)``. A region is a
``frozenset`` of faces. Regions live in the plane; an :class:`Extent` maps
plane faces onto a finite torus or patch.

A hex edge is the unordered pair of faces sharing it, and a hex vertex is the
triple of mutually adjacent faces meeting there.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

Region = frozenset


class FaceCoord(NamedTuple):
    q: int
    r: int

    def __add__(self, other):  # type: ignore[override]
        return FaceCoord(self.q + other[0], self.r + other[1])

    def __sub__(self, other):
        return FaceCoord(self.q - other[0], self.r - other[1])


# Cyclic order: consecutive entries are adjacent to each other.
DIRECTIONS: tuple[FaceCoord, ...] = (
    FaceCoord(1, 0),
    FaceCoord(0, 1),
    FaceCoord(-1, 1),
    FaceCoord(-1, 0),
    FaceCoord(0, -1),
    FaceCoord(1, -1),
)


def region(faces: Iterable) -> frozenset:
    """Build a region from any iterable of ``(q, r)`` pairs."""
    return frozenset(FaceCoord(int(f[0]), int(f[1])) for f in faces)


def sorted_faces(a: Iterable) -> list[FaceCoord]:
    return sorted(a)


def from_figure_coords(pairs: Iterable[tuple[int, int]]) -> frozenset:
    """Convert the skewed ``(x, y)`` drawing coordinates to axial faces.

    In drawing coordinates the neighbours of ``(x, y)`` are ``±(1,0)``,
    ``±(0,1)`` and ``±(1,1)``; the axial face is ``(x - y, y)``.
    """
    return frozenset(FaceCoord(x - y, y) for x, y in pairs)


def neighbors(f) -> frozenset:
    f = FaceCoord(*f)
    return frozenset(f + d for d in DIRECTIONS)


def ring(f) -> list[FaceCoord]:
    """The six neighbours of ``f`` in cyclic order."""
    f = FaceCoord(*f)
    return [f + d for d in DIRECTIONS]


def neighborhood(a: Iterable) -> frozenset:
    a = frozenset(a)
    out = set()
    for f in a:
        out.update(neighbors(f))
    return frozenset(out - a)


def closed_neighborhood(a: Iterable) -> frozenset:
    a = frozenset(a)
    return a | neighborhood(a)


def elementary_disk(f) -> frozenset:
    f = FaceCoord(*f)
    return frozenset({f}) | neighbors(f)


def hex_distance(f, g) -> int:
    dq = f[0] - g[0]
    dr = f[1] - g[1]
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


def ball(center, radius: int) -> frozenset:
    c = FaceCoord(*center)
    out = []
    for dq in range(-radius, radius + 1):
        for dr in range(max(-radius, -dq - radius), min(radius, -dq + radius) + 1):
            out.append(FaceCoord(c.q + dq, c.r + dr))
    return frozenset(out)


def thicken(a: Iterable, width: int) -> frozenset:
    """Faces within distance ``width`` of ``a``."""
    out = frozenset(a)
    for _ in range(width):
        out = closed_neighborhood(out)
    return out


def cartesian(f) -> tuple[float, float]:
    """Centre of a face in the plane (unit spacing between neighbours)."""
    return (f[0] + 0.5 * f[1], f[1] * math.sqrt(3) / 2)


# --- topology ---------------------------------------------------------------


def components(a: Iterable) -> list[frozenset]:
    a = set(a)
    out = []
    while a:
        seed = min(a)
        comp = {seed}
        queue = deque([seed])
        a.discard(seed)
        while queue:
            f = queue.popleft()
            for g in neighbors(f):
                if g in a:
                    a.discard(g)
                    comp.add(g)
                    queue.append(g)
        out.append(frozenset(comp))
    return out


def is_connected(a: Iterable) -> bool:
    a = frozenset(a)
    if not a:
        return False
    return len(components(a)) == 1


def is_simply_connected(a: Iterable) -> bool:
    """Connected with a connected complement.

    The complement is taken inside the bounding box grown by two faces, with
    every face on the box rim joined to one virtual outside node.
    """
    a = frozenset(a)
    if not is_connected(a):
        return False
    qs = [f.q for f in a]
    rs = [f.r for f in a]
    q0, q1 = min(qs) - 2, max(qs) + 2
    r0, r1 = min(rs) - 2, max(rs) + 2
    comp = set()
    for q in range(q0, q1 + 1):
        for r in range(r0, r1 + 1):
            f = FaceCoord(q, r)
            if f not in a:
                comp.add(f)
    # Everything reachable from the rim is "outside".
    seen = set()
    queue = deque()
    for f in comp:
        if f.q in (q0, q1) or f.r in (r0, r1):
            seen.add(f)
            queue.append(f)
    while queue:
        f = queue.popleft()
        for g in neighbors(f):
            if g in comp and g not in seen:
                seen.add(g)
                queue.append(g)
    return len(seen) == len(comp)


def is_disk(a: Iterable) -> bool:
    return is_simply_connected(a)


def arc_count(f, a: Iterable) -> int:
    """Number of maximal runs of ``a`` around the ring of ``f``.

    Returns ``-1`` when the whole ring lies in ``a``.
    """
    a = a if isinstance(a, (set, frozenset)) else frozenset(a)
    inside = [g in a for g in ring(f)]
    if all(inside):
        return -1
    return sum(1 for i in range(6) if inside[i] and not inside[i - 1])


def is_proper_arc(f, a) -> bool:
    """``N(f) ∩ a`` is a single nonempty contiguous arc, not the full ring."""
    return arc_count(f, a) == 1


def can_add(a, f) -> bool:
    """Adding ``f`` to the disk ``a`` yields a disk (local test)."""
    return f not in a and is_proper_arc(f, a)


def can_remove(a, f) -> bool:
    """Removing ``f`` from the disk ``a`` yields a nonempty disk (local test)."""
    return f in a and len(a) > 1 and is_proper_arc(f, a)


def is_annulus(a: Iterable) -> bool:
    """Connected with exactly two complement components."""
    a = frozenset(a)
    if not is_connected(a):
        return False
    inner = holes(a)
    return len(inner) == 1


def holes(a: Iterable) -> list[frozenset]:
    """Bounded components of the complement of ``a``."""
    a = frozenset(a)
    if not a:
        return []
    qs = [f.q for f in a]
    rs = [f.r for f in a]
    q0, q1 = min(qs) - 1, max(qs) + 1
    r0, r1 = min(rs) - 1, max(rs) + 1
    comp = set()
    for q in range(q0, q1 + 1):
        for r in range(r0, r1 + 1):
            f = FaceCoord(q, r)
            if f not in a:
                comp.add(f)
    out = []
    for c in components(comp):
        if not any(f.q in (q0, q1) or f.r in (r0, r1) for f in c):
            out.append(c)
    return out


# --- edges and boundaries ----------------------------------------------------


def edge(f, g) -> frozenset:
    return frozenset((FaceCoord(*f), FaceCoord(*g)))


def boundary_edges(a: Iterable) -> set:
    a = frozenset(a)
    out = set()
    for f in a:
        for g in neighbors(f):
            if g not in a:
                out.add(edge(f, g))
    return out


def boundary_length(a: Iterable) -> int:
    return len(boundary_edges(a))


def edge_vertices(e) -> tuple[frozenset, frozenset]:
    f, g = sorted(e)
    common = sorted(neighbors(f) & neighbors(g))
    return frozenset((f, g, common[0])), frozenset((f, g, common[1]))


def edge_segments(edges: Iterable) -> list[frozenset]:
    """Group hex edges into connected segments (sharing a vertex)."""
    edges = list(edges)
    by_vertex: dict[frozenset, list] = {}
    for e in edges:
        for v in edge_vertices(e):
            by_vertex.setdefault(v, []).append(e)
    remaining = set(edges)
    out = []
    while remaining:
        seed = min(remaining, key=lambda e: sorted(e))
        seg = {seed}
        remaining.discard(seed)
        queue = deque([seed])
        while queue:
            e = queue.popleft()
            for v in edge_vertices(e):
                for e2 in by_vertex[v]:
                    if e2 in remaining:
                        remaining.discard(e2)
                        seg.add(e2)
                        queue.append(e2)
        out.append(frozenset(seg))
    return out


@dataclass(frozen=True)
class BoundarySegments:
    """Inner and outer boundaries of a ``B, C, D`` configuration.

    ``green`` is B|C, ``blue`` is C|D, ``red`` is B|D and ``outer`` is the
    boundary of ``BCD``. Each attribute is a set of hex edges.
    """

    green: frozenset
    blue: frozenset
    red: frozenset
    outer: frozenset

    def segments(self, color: str) -> list[frozenset]:
        return edge_segments(getattr(self, color))

    def counts(self) -> dict[str, int]:
        return {c: len(getattr(self, c)) for c in ("green", "blue", "red", "outer")}


def classify_boundaries(b, c, d) -> BoundarySegments:
    b, c, d = frozenset(b), frozenset(c), frozenset(d)
    if b & c or c & d or b & d:
        raise ValueError("B, C, D must be pairwise disjoint")
    label = {}
    for name, reg in (("B", b), ("C", c), ("D", d)):
        for f in reg:
            label[f] = name
    colors = {
        frozenset("BC"): "green",
        frozenset("CD"): "blue",
        frozenset("BD"): "red",
    }
    out = {"green": set(), "blue": set(), "red": set(), "outer": set()}
    for f, lf in label.items():
        for g in neighbors(f):
            lg = label.get(g)
            if lg == lf:
                continue
            e = edge(f, g)
            if lg is None:
                out["outer"].add(e)
            else:
                out[colors[frozenset((lf, lg))]].add(e)
    return BoundarySegments(**{k: frozenset(v) for k, v in out.items()})


# --- arc partitions ------------------------------------------------------------


def arc_partitions(f) -> list[tuple[frozenset, frozenset]]:
    """All splits of ``N(f)`` into two nonempty contiguous arcs.

    Each unordered split appears once, with ``B`` the arc containing the
    first ring face ``f + (1, 0)``.
    """
    rg = ring(f)
    out = []
    for i in range(6):
        for j in range(i + 1, 6):
            # cut between positions (i-1, i) and (j-1, j)
            first = frozenset(rg[k] for k in range(i, j))
            second = frozenset(rg) - first
            b, d = (first, second) if rg[0] in first else (second, first)
            out.append((b, d))
    return out


def cut_edges(f, b) -> list[frozenset]:
    """The hex edges around ``f`` where the arc ``b`` meets its complement."""
    rg = ring(f)
    out = []
    for k in range(6):
        g, h = rg[k - 1], rg[k]
        if (g in b) != (h in b):
            out.append(edge(g, h))
    return out


# --- extents -------------------------------------------------------------------


@dataclass(frozen=True)
class Extent:
    """A finite set of faces: a ``rows x cols`` torus or patch.

    Patches are the axial parallelogram ``0 <= q < cols``, ``0 <= r < rows``.
    """

    rows: int
    cols: int
    periodic: bool = True

    def wrap(self, f) -> FaceCoord:
        if self.periodic:
            return FaceCoord(f[0] % self.cols, f[1] % self.rows)
        if not (0 <= f[0] < self.cols and 0 <= f[1] < self.rows):
            raise ValueError(f"face {tuple(f)} outside patch {self.rows}x{self.cols}")
        return FaceCoord(f[0], f[1])

    def contains(self, f) -> bool:
        return self.periodic or (0 <= f[0] < self.cols and 0 <= f[1] < self.rows)

    def wrap_region(self, a: Iterable) -> frozenset:
        a = list(a)
        out = frozenset(self.wrap(f) for f in a)
        if len(out) != len(set(a)):
            raise ValueError("region wraps onto itself on this torus")
        return out

    def faces(self) -> list[FaceCoord]:
        return [FaceCoord(q, r) for r in range(self.rows) for q in range(self.cols)]

    def distance(self, f, g) -> int:
        if not self.periodic:
            return hex_distance(f, g)
        best = None
        for a in (-1, 0, 1):
            for b in (-1, 0, 1):
                d = hex_distance(f, (g[0] + a * self.cols, g[1] + b * self.rows))
                best = d if best is None else min(best, d)
        return best

    def interior(self, margin: int) -> list[FaceCoord]:
        """Faces whose ``margin``-ball lies inside the extent."""
        if self.periodic:
            return self.faces()
        return [f for f in self.faces() if all(self.contains(g) for g in ball(f, margin))]

    def translates(self):
        """Lattice translations identifying plane faces on the torus."""
        if not self.periodic:
            return [(0, 0)]
        return [(a * self.cols, b * self.rows) for a in (-1, 0, 1) for b in (-1, 0, 1)]

    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "periodic": self.periodic}


# --- symmetry ------------------------------------------------------------------


def rotate60(f) -> FaceCoord:
    return FaceCoord(-f[1], f[0] + f[1])


def reflect(f) -> FaceCoord:
    return FaceCoord(f[1], f[0])


def _symmetries():
    out = []
    for refl in (False, True):
        for k in range(6):
            def t(f, k=k, refl=refl):
                g = reflect(f) if refl else FaceCoord(*f)
                for _ in range(k):
                    g = rotate60(g)
                return g
            out.append(t)
    return out


SYMMETRIES = _symmetries()


def canonical_shape(*parts: Iterable) -> tuple:
    """Canonical form of an ordered tuple of regions under the lattice symmetries.

    Two tuples get the same key iff one maps onto the other by a translation
    combined with a rotation or reflection of the hexagonal lattice.
    """
    parts = [list(p) for p in parts]
    best = None
    for t in SYMMETRIES:
        moved = [[t(f) for f in p] for p in parts]
        flat = [f for p in moved for f in p]
        if not flat:
            return tuple(() for _ in parts)
        q0 = min(f.q for f in flat)
        r0 = min(f.r for f in flat)
        key = tuple(tuple(sorted((f.q - q0, f.r - r0) for f in p)) for p in moved)
        if best is None or key < best:
            best = key
    return best


# --- covers --------------------------------------------------------------------


@dataclass(frozen=True)
class CoverSpec:
    """The set of regions a parent Hamiltonian is built from.

    Regions are stored in plane coordinates; ``extent`` wraps them onto the
    lattice. ``provenance`` names the constructor and its parameters.
    """

    regions: tuple
    extent: Extent
    provenance: dict = field(default_factory=dict, compare=False)

    def wrapped(self) -> list[frozenset]:
        return [self.extent.wrap_region(x) for x in self.regions]

    def without(self, index: int) -> "CoverSpec":
        regions = self.regions[:index] + self.regions[index + 1:]
        prov = dict(self.provenance, removed=index)
        return CoverSpec(regions, self.extent, prov)

    def validate(self) -> None:
        for x in self.regions:
            if not is_simply_connected(x):
                raise ValueError("cover regions must be simply connected")
            self.extent.wrap_region(x)


def overlapping_pairs(cover: CoverSpec) -> list[tuple[int, int]]:
    wrapped = cover.wrapped()
    owner: dict = {}
    for i, x in enumerate(wrapped):
        for f in x:
            owner.setdefault(f, []).append(i)
    pairs = set()
    for ids in owner.values():
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                pairs.add((ids[a], ids[b]))
    return sorted(pairs)


def cover_condition_misses(cover: CoverSpec, faces: Iterable | None = None) -> list[FaceCoord]:
    """Faces ``f`` whose padded elementary disk ``ball(f, 2)`` lies in no region."""
    ext = cover.extent
    if faces is None:
        faces = ext.interior(2)
    wrapped = cover.wrapped()
    owner: dict = {}
    for i, x in enumerate(wrapped):
        for f in x:
            owner.setdefault(f, []).append(i)
    misses = []
    for f in faces:
        f = ext.wrap(f)
        need = ext.wrap_region(ball(f, 2))
        if not any(need <= wrapped[i] for i in owner.get(f, ())):
            misses.append(f)
    return misses


def red_faces(extent: Extent, spacing: int = 5) -> list[FaceCoord]:
    """Faces of the sublattice generated by ``(spacing, 0)`` and ``(0, spacing)``."""
    return [f for f in extent.faces() if f.q % spacing == 0 and f.r % spacing == 0]


def red_hexagon_region(center, radius: int = 5, spacing: int = 5) -> frozenset:
    """A red face together with the non-red faces within ``radius`` of it."""
    c = FaceCoord(*center)
    out = set()
    for g in ball(c, radius):
        red = (g.q - c.q) % spacing == 0 and (g.r - c.r) % spacing == 0
        if g == c or not red:
            out.add(g)
    return frozenset(out)


def red_hexagon_cover(extent: Extent, radius: int = 5, spacing: int = 5) -> CoverSpec:
    if extent.periodic and (extent.rows % spacing or extent.cols % spacing):
        raise ValueError(f"torus sides must be multiples of {spacing}")
    if extent.periodic and min(extent.rows, extent.cols) < 2 * radius + 2:
        raise ValueError("torus too small for the red-hexagon regions")
    regions = []
    for c in red_faces(extent, spacing):
        x = red_hexagon_region(c, radius, spacing)
        if extent.periodic or all(extent.contains(g) for g in x):
            regions.append(x)
    return CoverSpec(tuple(regions), extent, {"builder": "red_hexagon", "radius": radius, "spacing": spacing})


# --- cell decompositions ---------------------------------------------------------

_SQ3_2 = math.sqrt(3) / 2
# (one_width, zero_radius) candidates tried by the pitch search, in order
_WIDTH_GRID = tuple((w1, r0) for w1 in (3.5, 4.0, 4.5, 5.0, 5.5, 6.0) for r0 in (2.0, 2.5, 3.0, 3.5, 4.0))


@dataclass(frozen=True)
class CellParams:
    pitch: int
    one_width: float
    zero_radius: float
    row_offset: int = 0

    def center(self, a: int, b: int) -> FaceCoord:
        return FaceCoord(a * self.pitch, b * self.pitch + self.row_offset)


def _classify_faces(faces: Sequence, p: CellParams) -> tuple[np.ndarray, list]:
    """Cell dimension and label (set of centre indices) of each plane face.

    A face within ``zero_radius`` of a Voronoi vertex of the centre lattice is
    in a 0-cell; otherwise one whose two nearest centres differ in distance
    by less than ``one_width`` is in a 1-cell; the rest is 2-cell.
    """
    q = np.array([f[0] for f in faces], dtype=float)
    r = np.array([f[1] for f in faces], dtype=float)
    s = p.pitch
    px, py = q + 0.5 * r, r * _SQ3_2
    a0 = np.floor(q / s).astype(int)
    b0 = np.floor((r - p.row_offset) / s).astype(int)
    offs = np.array([(da, db) for da in range(-2, 3) for db in range(-2, 3)])
    ca = a0[:, None] + offs[None, :, 0]
    cb = b0[:, None] + offs[None, :, 1]
    cq, cr = ca * s, cb * s + p.row_offset
    dist = np.hypot(px[:, None] - (cq + 0.5 * cr), py[:, None] - cr * _SQ3_2)
    order = np.argsort(dist, axis=1, kind="stable")
    rows = np.arange(len(faces))
    d1, d2 = dist[rows, order[:, 0]], dist[rows, order[:, 1]]
    # Voronoi vertices are centroids of the two triangle types at each centre.
    jx1 = (ca + 1 / 3) * s + 0.5 * (cb * s + s / 3 + p.row_offset)
    jy1 = (cb * s + s / 3 + p.row_offset) * _SQ3_2
    jx2 = (ca + 2 / 3) * s + 0.5 * (cb * s - s / 3 + p.row_offset)
    jy2 = (cb * s - s / 3 + p.row_offset) * _SQ3_2
    dj = np.concatenate(
        [np.hypot(px[:, None] - jx1, py[:, None] - jy1), np.hypot(px[:, None] - jx2, py[:, None] - jy2)], axis=1
    )
    jbest = np.argmin(dj, axis=1)
    dims = np.full(len(faces), 2)
    labels = []
    k = len(offs)
    for i in range(len(faces)):
        if dj[i, jbest[i]] < p.zero_radius - 1e-9:
            j = jbest[i] % k
            a, b = int(ca[i, j]), int(cb[i, j])
            tri = ((a, b), (a + 1, b), (a, b + 1)) if jbest[i] < k else ((a, b), (a + 1, b), (a + 1, b - 1))
            dims[i] = 0
            labels.append(frozenset(tri))
        elif d2[i] - d1[i] < p.one_width - 1e-9:
            dims[i] = 1
            j1, j2 = order[i, 0], order[i, 1]
            labels.append(frozenset(((int(ca[i, j1]), int(cb[i, j1])), (int(ca[i, j2]), int(cb[i, j2])))))
        else:
            j1 = order[i, 0]
            labels.append(frozenset(((int(ca[i, j1]), int(cb[i, j1])),)))
    return dims, labels


def _label_anchor(label: frozenset, p: CellParams) -> FaceCoord:
    pts = [cartesian(p.center(*c)) for c in label]
    cx = sum(u[0] for u in pts) / len(pts)
    cy = sum(u[1] for u in pts) / len(pts)
    r = cy / _SQ3_2
    return FaceCoord(int(round(cx - 0.5 * r)), int(round(r)))


def unwrap(region: Iterable, extent: Extent, seed) -> frozenset:
    """Lift a connected torus region to the plane, starting from plane face ``seed``.

    Faces not reachable from ``seed`` through the region are dropped.
    """
    region = frozenset(region)
    seed = FaceCoord(*seed)
    if extent.wrap(seed) not in region:
        # start from the region face closest to the seed
        best = min(
            ((hex_distance(seed, g), g) for w in region for g in _images(w, extent) if hex_distance(seed, g) < 3 * max(extent.rows, extent.cols)),
            default=None,
        )
        if best is None:
            return frozenset()
        seed = best[1]
    used = {extent.wrap(seed)}
    out = {seed}
    queue = deque([seed])
    while queue:
        f = queue.popleft()
        for g in neighbors(f):
            w = extent.wrap(g)
            if w in region and w not in used:
                used.add(w)
                out.add(g)
                queue.append(g)
    return frozenset(out)


def _images(f, extent: Extent):
    return [FaceCoord(f[0] + a, f[1] + b) for a, b in extent.translates()]


@dataclass(frozen=True)
class CellDecomposition:
    """0-, 1- and 2-cells of a periodic tiling.

    Cells are plane regions. Labels are centre indices reduced modulo the
    torus: a 2-cell has one, a 1-cell the two centres it separates, a 0-cell
    the three centres meeting there.
    """

    params: CellParams
    extent: Extent
    zero_cells: tuple
    one_cells: tuple
    two_cells: tuple
    zero_labels: tuple
    one_labels: tuple
    two_labels: tuple
    wall_rows: tuple = ()

    def cells(self):
        for dim, cells, labels in (
            (0, self.zero_cells, self.zero_labels),
            (1, self.one_cells, self.one_labels),
            (2, self.two_cells, self.two_labels),
        ):
            for c, l in zip(cells, labels):
                yield dim, l, c


def build_cell_decomposition(
    pitch: int,
    extent: Extent,
    one_width: float | None = None,
    zero_radius: float | None = None,
    row_offset: int = 0,
) -> CellDecomposition:
    """Voronoi-style decomposition with 2-cell centres on a pitch-``pitch`` lattice.

    Without explicit widths the first feasible pair from the search grid is
    used (see :func:`feasible_cell_params`).
    """
    if not extent.periodic:
        raise ValueError("cell decompositions are built on tori")
    if extent.rows % pitch or extent.cols % pitch:
        raise ValueError("torus sides must be multiples of the pitch")
    if min(extent.rows, extent.cols) < 3 * pitch:
        raise ValueError("torus must hold at least three periods")
    if one_width is None or zero_radius is None:
        params = feasible_cell_params(pitch, row_offset % pitch)
        if params is None:
            raise ValueError(f"no feasible cell widths at pitch {pitch}")
    else:
        params = CellParams(pitch, float(one_width), float(zero_radius), row_offset % pitch)
    na, nb = extent.cols // pitch, extent.rows // pitch
    faces = extent.faces()
    dims, labels = _classify_faces(faces, params)
    groups: dict = {}
    for f, dim, label in zip(faces, dims, labels):
        key = (int(dim), frozenset((a % na, b % nb) for a, b in label))
        groups.setdefault(key, []).append(f)
    out = {0: [], 1: [], 2: []}
    for (dim, label), fs in sorted(groups.items(), key=lambda kv: (kv[0][0], sorted(kv[0][1]))):
        region = unwrap(fs, extent, _label_anchor(label, params))
        if len(region) != len(fs):
            region = frozenset(fs)  # disconnected; left wrapped for the validator
        out[dim].append((label, region))
    return CellDecomposition(
        params,
        extent,
        tuple(r for _, r in out[0]),
        tuple(r for _, r in out[1]),
        tuple(r for _, r in out[2]),
        tuple(l for l, _ in out[0]),
        tuple(l for l, _ in out[1]),
        tuple(l for l, _ in out[2]),
    )


def decomposition_violations(d: CellDecomposition) -> list[str]:
    """Invariant violations of a decomposition (empty when valid)."""
    ext = d.extent
    out = []
    owner: dict = {}
    cells = list(d.cells())
    expected = {0: 2, 1: 3, 2: 1}
    counts = {0: 0, 1: 0, 2: 0}
    for idx, (dim, label, region) in enumerate(cells):
        counts[dim] += 1
        if not is_connected(region):
            out.append(f"disconnected {dim}-cell {sorted(label)}")
        for f in region:
            w = ext.wrap(f)
            if w in owner:
                out.append(f"face {tuple(w)} in two cells")
            owner[w] = idx
    ncenters = (ext.rows // d.params.pitch) * (ext.cols // d.params.pitch)
    for dim in (0, 1, 2):
        if counts[dim] != expected[dim] * ncenters:
            out.append(f"{counts[dim]} {dim}-cells for {ncenters} centres")
    for f in ext.faces():
        if f not in owner:
            out.append(f"face {tuple(f)} in no cell")
    if out:
        return sorted(set(out))
    touching: dict = {i: set() for i in range(len(cells))}
    for f, i in owner.items():
        for g in neighbors(f):
            j = owner[ext.wrap(g)]
            if j == i:
                continue
            if cells[i][0] == cells[j][0]:
                out.append(f"adjacent {cells[i][0]}-cells {sorted(cells[i][1])} and {sorted(cells[j][1])}")
            touching[i].add(j)
    for i, (dim, label, _) in enumerate(cells):
        if dim != 2:
            continue
        n1 = sum(1 for j in touching[i] if cells[j][0] == 1)
        n0 = sum(1 for j in touching[i] if cells[j][0] == 0)
        if (n1, n0) != (6, 6):
            out.append(f"2-cell {sorted(label)} touches {n1} 1-cells and {n0} 0-cells")
    return sorted(set(out))


def cells_to_cover(d: CellDecomposition) -> CoverSpec:
    """One region per 2-cell: itself plus every 1- and 0-cell sharing its centre."""
    p = d.params
    ext = d.extent
    regions = []
    for (c,), two in zip(map(tuple, d.two_labels), d.two_cells):
        parts = [ext.wrap_region(two)]
        for dim, label, region in d.cells():
            if dim < 2 and c in label:
                parts.append(ext.wrap_region(region))
        wrapped = frozenset().union(*parts)
        regions.append(unwrap(wrapped, ext, _label_anchor(frozenset([c]), p)))
    prov = {
        "builder": "cells",
        "pitch": p.pitch,
        "one_width": p.one_width,
        "zero_radius": p.zero_radius,
        "row_offset": p.row_offset,
    }
    return CoverSpec(tuple(regions), ext, prov)


def _params_ok(p: CellParams) -> bool:
    ext = Extent(3 * p.pitch, 3 * p.pitch, True)
    d = build_cell_decomposition(p.pitch, ext, p.one_width, p.zero_radius, p.row_offset)
    if decomposition_violations(d):
        return False
    cover = cells_to_cover(d)
    if not all(is_simply_connected(x) for x in cover.regions):
        return False
    return not cover_condition_misses(cover)


@lru_cache(maxsize=None)
def feasible_cell_params(pitch: int, row_offset: int = 0) -> CellParams | None:
    """First ``(one_width, zero_radius)`` on the search grid meeting all invariants."""
    for w1, r0 in _WIDTH_GRID:
        p = CellParams(pitch, w1, r0, row_offset)
        if _params_ok(p):
            return p
    return None


def minimum_pitch(start: int = 3, stop: int = 16) -> CellParams:
    """Smallest pitch with a feasible width pair on the search grid."""
    for pitch in range(start, stop + 1):
        p = feasible_cell_params(pitch)
        if p is not None:
            return p
    raise ValueError(f"no feasible pitch up to {stop}")


# Results of minimum_pitch() and minimum_wall_pitch() on the default grid;
# tests re-derive both.
MIN_PITCH = 10
MIN_WALL_PITCH = 13


def wall_decomposition(pitch: int, extent: Extent, wall_row: int) -> CellDecomposition:
    """Cell decomposition with a row of 2-cell centres on the wall.

    The wall runs between face rows ``wall_row - 1`` and ``wall_row``, cutting
    2-cells and the 1-cells between horizontally adjacent centres. On a torus
    a strip of one phase is bounded by two walls, so row 0 is recorded as a
    second wall; ``wall_row`` must be a multiple of ``pitch`` so that both
    walls sit on centre rows.
    """
    if wall_row % pitch:
        raise ValueError("wall_row must be a multiple of the pitch")
    d = build_cell_decomposition(pitch, extent)
    rows = tuple(sorted({wall_row % extent.rows, 0}))
    return replace(d, wall_rows=rows)


def wall_violations(d: CellDecomposition) -> list[str]:
    """Wall invariants: no 0-cell meets the wall, regions cross it at most once."""
    ext = d.extent
    walls = wall_edges(ext, d.wall_rows)
    out = []
    for dim, label, cell in d.cells():
        if dim == 0 and _touches(cell, ext, walls):
            out.append(f"0-cell {sorted(label)} meets the wall")
    for i, x in enumerate(cells_to_cover(d).regions):
        k = wall_intervals(x, ext, d.wall_rows)
        if k > 1:
            out.append(f"region {i} meets the wall in {k} intervals")
    return out


def _touches(region, ext: Extent, walls) -> bool:
    for f in region:
        for g in neighbors(f):
            if edge(ext.wrap(f), ext.wrap(g)) in walls:
                return True
    return False


def minimum_wall_pitch(start: int = MIN_PITCH, stop: int = 20) -> int:
    """Smallest pitch whose wall decomposition passes :func:`wall_violations`."""
    for pitch in range(start, stop + 1):
        if feasible_cell_params(pitch) is None:
            continue
        ext = Extent(4 * pitch, 4 * pitch, True)
        if not wall_violations(wall_decomposition(pitch, ext, 2 * pitch)):
            return pitch
    raise ValueError(f"no feasible wall pitch up to {stop}")


def wall_edges(extent: Extent, wall_rows: Iterable[int]) -> frozenset:
    """Hex edges between face rows ``w - 1`` and ``w`` for each wall row ``w``."""
    out = set()
    for w in wall_rows:
        for q in range(extent.cols):
            f = FaceCoord(q, w - 1)
            for g in (FaceCoord(q, w), FaceCoord(q - 1, w)):
                out.add(edge(extent.wrap(f), extent.wrap(g)))
    return frozenset(out)


def wall_intervals(region: Iterable, extent: Extent, wall_rows: Iterable[int]) -> int:
    """Number of connected pieces in which ``region`` crosses the wall.

    Counts segments of wall edges with both faces in the region.
    """
    region = frozenset(region)
    walls = wall_edges(extent, wall_rows)
    crossing = set()
    for f in region:
        for g in neighbors(f):
            if g in region and edge(extent.wrap(f), extent.wrap(g)) in walls:
                crossing.add(edge(f, g))
    return len(edge_segments(crossing))


# --- region files --------------------------------------------------------------


def format_region(a: Iterable) -> str:
    return "".join(f"{f.q} {f.r}\n" for f in sorted(FaceCoord(*g) for g in a))


def parse_region(text: str) -> frozenset:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"region line needs two integers: {raw!r}")
        out.append(FaceCoord(int(parts[0]), int(parts[1])))
    return frozenset(out)


def write_region(path, a: Iterable) -> None:
    with open(path, "w") as fh:
        fh.write(format_region(a))


def read_region(path) -> frozenset:
    with open(path) as fh:
        return parse_region(fh.read())
