"""Axiom checks and extension certificates.

A backend is anything with ``entropy(region)`` for regions of lattice faces.
Stabilizer backends give exact integers and demand exact zeros; dense
backends use the ``eps`` tolerance.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import lattice as lat
from .lattice import FaceCoord, neighbors
from .stabilizer import StabilizerState
from .tensor import EPS_CMI, DensityOperator, marginal_entropy


# --- backends ------------------------------------------------------------------


class StabilizerBackend:
    exact = True

    def __init__(self, state: StabilizerState, eps: float = 0.0):
        self.state = state
        self.eps = eps

    def entropy(self, region: Iterable) -> int:
        return self.state.entropy(region)

    def cmi(self, a, b, c):
        s = self.entropy
        a, b, c = frozenset(a), frozenset(b), frozenset(c)
        return s(a | b) + s(b | c) - s(b) - s(a | b | c)

    @property
    def extent(self):
        return self.state.extent


class DenseBackend:
    """Dense state whose factor labels are lattice faces."""

    exact = False

    def __init__(self, state: DensityOperator, eps: float = EPS_CMI, extent: lat.Extent | None = None):
        self.rho = state
        self.eps = eps
        self.extent = extent
        self._cache: dict = {}

    def _labels(self, region):
        if self.extent is not None:
            region = self.extent.wrap_region(region)
        return frozenset(FaceCoord(*f) for f in region)

    def entropy(self, region: Iterable) -> float:
        key = self._labels(region)
        if key not in self._cache:
            self._cache[key] = marginal_entropy(self.rho, key)
        return self._cache[key]

    def cmi(self, a, b, c):
        s = self.entropy
        a, b, c = frozenset(a), frozenset(b), frozenset(c)
        return s(a | b) + s(b | c) - s(b) - s(a | b | c)


def as_backend(obj, eps: float | None = None):
    if isinstance(obj, (StabilizerBackend, DenseBackend)):
        return obj
    if isinstance(obj, StabilizerState):
        return StabilizerBackend(obj, 0.0 if eps is None else eps)
    if isinstance(obj, DensityOperator):
        return DenseBackend(obj, EPS_CMI if eps is None else eps)
    raise TypeError(f"cannot use {type(obj).__name__} as a backend")


def _zero(backend, value) -> bool:
    return abs(value) <= backend.eps


def _cond(backend, a, b):
    """``S(a|b)``."""
    a, b = frozenset(a), frozenset(b)
    return backend.entropy(a | b) - backend.entropy(b)


def _num(x):
    return int(x) if isinstance(x, (int, np.integer)) else float(x)


def _faces(a) -> list:
    return [[f[0], f[1]] for f in sorted(FaceCoord(*g) for g in a)]


# --- reports -------------------------------------------------------------------


@dataclass
class AxiomReport:
    region: frozenset
    axiom: str
    deficits: list  # (descriptor, value)
    passed: bool
    exempt: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "region": _faces(self.region),
            "deficits": [{"partition": d, "value": _num(v)} for d, v in self.deficits],
            "exempt": [{"partition": d, "value": _num(v)} for d, v in self.exempt],
            "pass": self.passed,
        }

    @property
    def max_deficit(self):
        return max((v for _, v in self.deficits), default=0)


def _descriptor(center: FaceCoord, b) -> list:
    """Faces of ``B`` as offsets from the disk centre."""
    return [[f.q - center.q, f.r - center.r] for f in sorted(b)]


def _require_disk(a):
    if not lat.is_simply_connected(a):
        raise ValueError("region must be a disk")


def check_a0(backend, a: Iterable) -> AxiomReport:
    backend = as_backend(backend)
    a = frozenset(FaceCoord(*f) for f in a)
    _require_disk(a)
    n = lat.neighborhood(a)
    value = backend.entropy(a) + backend.entropy(a | n) - backend.entropy(n)
    return AxiomReport(a, "A0", [("N(A)", value)], _zero(backend, value) and value >= -backend.eps)


def neighborhood_partitions(a: Iterable) -> list[tuple[frozenset, frozenset]]:
    """Splits of ``N(A)`` into two nonempty disks ``B`` and ``D``.

    For an elementary disk these are the 15 arc partitions. For larger disks
    the candidates are the arcs of the outer boundary walk of ``A``.
    """
    a = frozenset(FaceCoord(*f) for f in a)
    if len(a) == 1:
        return lat.arc_partitions(next(iter(a)))
    seq = boundary_walk(a)
    n = lat.neighborhood(a)
    m = len(seq)
    seen = set()
    out = []
    for i in range(m):
        for length in range(1, m):
            b = frozenset(seq[(i + k) % m] for k in range(length))
            d = n - b
            if not d:
                continue
            key = min(b, d, key=lambda s: sorted(s))
            if key in seen:
                continue
            seen.add(key)
            if all(lat.is_simply_connected(x) for x in (b, d)):
                first = seq[0]
                out.append((b, d) if first in b else (d, b))
    out.sort(key=lambda p: (len(p[0]), sorted(p[0])))
    return out


def boundary_walk(a: Iterable) -> list[FaceCoord]:
    """Outside faces met while walking once around the outer boundary of a disk."""
    a = frozenset(FaceCoord(*f) for f in a)
    start_f = min(a)
    # the face directly below-left of the minimum is outside
    k0 = next(k for k, d in enumerate(lat.DIRECTIONS) if start_f + d not in a)
    f, k = start_f, k0
    seq = []
    for _ in range(12 * len(a) + 12):
        g = f + lat.DIRECTIONS[k]
        if not seq or seq[-1] != g:
            seq.append(g)
        nxt = f + lat.DIRECTIONS[(k + 1) % 6]
        if nxt in a:
            # pivot onto the neighbouring face of A; g is its neighbour too
            f = nxt
            k = lat.DIRECTIONS.index(g - f)
        else:
            k = (k + 1) % 6
        if f == start_f and k == k0:
            break
    if len(seq) > 1 and seq[0] == seq[-1]:
        seq.pop()
    return seq


def a1_value(backend, c, b, d):
    """``S(C|B) + S(C|D)``."""
    return _cond(backend, c, b) + _cond(backend, c, d)


def check_a1(backend, a: Iterable) -> AxiomReport:
    backend = as_backend(backend)
    a = frozenset(FaceCoord(*f) for f in a)
    _require_disk(a)
    center = min(a) if len(a) > 1 else next(iter(a))
    deficits = []
    for b, d in neighborhood_partitions(a):
        deficits.append((_descriptor(center, b), a1_value(backend, a, b, d)))
    ok = all(_zero(backend, v) for _, v in deficits)
    return AxiomReport(a, "A1", deficits, ok)


@dataclass(frozen=True)
class WallSpec:
    """Horizontal walls between face rows ``w - 1`` and ``w`` on an extent."""

    extent: lat.Extent
    rows: tuple

    def side(self, f) -> int:
        r = self.extent.wrap(f).r if self.extent.periodic else f[1]
        k = bisect.bisect_right(sorted(self.rows), r)
        if self.extent.periodic:
            k %= len(self.rows)
        return k

    def is_wall(self, e) -> bool:
        f, g = tuple(e)
        return self.side(f) != self.side(g)


def wall_exempt(wall: WallSpec, center: FaceCoord, b: frozenset) -> bool:
    """Partitions allowed to fail: both B|D cuts off the wall and on one side."""
    rg = lat.ring(center)
    disk_edges = [lat.edge(center, g) for g in rg] + [lat.edge(rg[k - 1], rg[k]) for k in range(6)]
    if not any(wall.is_wall(e) for e in disk_edges):
        return False
    cuts = lat.cut_edges(center, b)
    if any(wall.is_wall(e) for e in cuts):
        return False
    return len({wall.side(min(e)) for e in cuts}) == 1


def check_a1_wall(backend, a: Iterable, wall: WallSpec, mask: Callable | None = None) -> AxiomReport:
    """A1 with the wall relaxation on an elementary disk.

    ``mask(wall, center, B) -> bool`` marks exempt partitions; the default is
    :func:`wall_exempt`. Exempt deficits are reported but do not gate.
    """
    backend = as_backend(backend)
    a = frozenset(FaceCoord(*f) for f in a)
    if len(a) != 1:
        raise ValueError("the wall variant is defined on elementary disks")
    (center,) = a
    mask = wall_exempt if mask is None else mask
    deficits, exempt = [], []
    for b, d in lat.arc_partitions(center):
        entry = (_descriptor(center, b), a1_value(backend, a, b, d))
        (exempt if mask(wall, center, b) else deficits).append(entry)
    ok = all(_zero(backend, v) for _, v in deficits)
    return AxiomReport(a, "A1-wall", deficits, ok, exempt)


# --- certificates --------------------------------------------------------------


@dataclass
class Move:
    kind: str  # seed | grow-C-core | grow-B | grow-D | purify-swap
    face: FaceCoord | None
    value: float
    bound: float
    sides: dict = field(default_factory=dict)
    into: str = ""  # purify-swap: the side receiving the face during deformation

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "face": None if self.face is None else [self.face.q, self.face.r],
            "value": _num(self.value),
            "bound": _num(self.bound),
            "sides": {k: _faces(v) for k, v in sorted(self.sides.items())},
            "into": self.into,
        }


@dataclass
class ExtensionCertificate:
    target: str
    regions: dict
    steps: list
    final_value: float
    passed: bool
    eps: float
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "regions": {k: _faces(v) for k, v in sorted(self.regions.items())},
            "steps": [s.to_dict() for s in self.steps],
            "final_value": _num(self.final_value),
            "pass": self.passed,
            "note": self.note,
        }

    def telescoped(self):
        """Target value rebuilt from the steps alone.

        Growth steps of ``C`` and purification swaps add; growth of ``B`` or
        ``D`` subtracts, and since all values are nonnegative the target is
        bounded by the sum of the bounds.
        """
        total = 0
        for s in self.steps:
            total += -s.value if s.kind in ("grow-B", "grow-D") else s.value
        return total

    def chain_ok(self) -> bool:
        e = self.eps
        return all(-e <= s.value <= s.bound + e and s.bound <= e for s in self.steps)


class ExtensionStuck(RuntimeError):
    """The deformation search found no valid move."""

    def __init__(self, message: str, face=None):
        super().__init__(message)
        self.face = face


def extend_a0(backend, b: Iterable, c: Iterable) -> ExtensionCertificate:
    """Certificate for ``S(C) + S(C|B) = 0`` grown from A0 at one face.

    Faces join ``C_i`` in lexicographic order among those keeping a disk.
    Each step's value ``S(c|C_i) + S(c|BC \\ C_{i+1})`` is bounded by the A1
    deficit at ``c`` for the partition of ``N(c)`` into ``C_i`` and the rest.
    """
    backend = as_backend(backend)
    b = frozenset(FaceCoord(*f) for f in b)
    c = frozenset(FaceCoord(*f) for f in c)
    if b & c:
        raise ValueError("B and C must be disjoint")
    _require_disk(c)
    if not lat.neighborhood(c) <= b:
        raise ValueError("B must contain N(C)")
    if not lat.is_simply_connected(b | c):
        raise ValueError("BC must be a disk")
    bc = b | c
    order = sorted(c)
    seed = order[0]
    steps = []
    nc = neighbors(seed)
    seed_bound = backend.entropy({seed}) + _cond(backend, {seed}, nc)
    seed_value = backend.entropy({seed}) + _cond(backend, {seed}, bc - {seed})
    steps.append(Move("seed", seed, seed_value, seed_bound, {"N": nc}))
    ci = frozenset({seed})
    while ci != c:
        nxt = next((f for f in order if f not in ci and lat.can_add(ci, f)), None)
        if nxt is None:
            raise ExtensionStuck("no face of C can join the growing disk")
        grown = ci | {nxt}
        n1 = neighbors(nxt) & ci
        n2 = neighbors(nxt) & (bc - grown)
        value = _cond(backend, {nxt}, ci) + _cond(backend, {nxt}, bc - grown)
        bound = _cond(backend, {nxt}, n1) + _cond(backend, {nxt}, n2)
        steps.append(Move("grow-C-core", nxt, value, bound, {"N1": n1, "N2": n2}))
        ci = grown
    final = backend.entropy(c) + _cond(backend, c, b)
    cert = ExtensionCertificate("S(C)+S(C|B)", {"B": b, "C": c}, steps, final, False, backend.eps)
    cert.passed = cert.chain_ok() and _zero(backend, final) and _zero(backend, cert.telescoped() - final)
    return cert


def _a1_pre(b, c, d):
    if b & c or c & d or b & d:
        raise ValueError("B, C, D must be disjoint")
    for name, x in (("B", b), ("C", c), ("D", d), ("BC", b | c), ("CD", c | d)):
        if not x or not lat.is_simply_connected(x):
            raise ValueError(f"{name} must be a nonempty disk")
    if not lat.neighborhood(c) <= (b | d):
        raise ValueError("B and D must surround C")
    if not lat.is_simply_connected(b | c | d):
        raise ValueError("BCD must be a disk")


def _config_ok(b, c, d) -> bool:
    try:
        _a1_pre(b, c, d)
    except ValueError:
        return False
    return True


def _deform_to_seed(backend, target, keep, max_steps):
    b, c, d = target
    ent = backend.entropy
    moves = []
    while len(c) > 1:
        if len(moves) > max_steps:
            raise ExtensionStuck("step limit reached")
        found = None
        for f in sorted(c - {keep}):
            if not lat.can_remove(c, f):
                continue
            for side in ("D", "B"):
                mine, other = (d, b) if side == "D" else (b, d)
                n1 = neighbors(f) & mine
                if not lat.is_proper_arc(f, mine):
                    continue
                mine2, c2 = mine | {f}, c - {f}
                nb, nd = (other, mine2) if side == "D" else (mine2, other)
                if not _config_ok(nb, c2, nd):
                    continue
                # I(f:E|mine) with E purifying BCD, rewritten through purity
                value = ent(mine2) + ent(other | c) - ent(mine) - ent(other | c2)
                n2 = neighbors(f) - mine
                bound = _cond(backend, {f}, n1) + _cond(backend, {f}, n2)
                found = (f, side, nb, c2, nd, value, bound, n1, n2)
                break
            if found:
                break
        if found is None:
            raise ExtensionStuck("no face of C can be handed to B or D", keep)
        f, side, b, c, d, value, bound, n1, n2 = found
        moves.append(Move("purify-swap", f, value, bound, {"N1": n1, "N2": n2}, side))
    ring = neighbors(keep)
    for side in ("D", "B"):
        while True:
            mine = d if side == "D" else b
            if mine <= ring:
                break
            found = None
            for f in sorted(mine - ring):
                rest = mine - {f}
                if not rest or not lat.is_proper_arc(f, rest) or not lat.can_remove(mine, f):
                    continue
                nb, nd = (b, rest) if side == "D" else (rest, d)
                if not _config_ok(nb, c, nd):
                    continue
                value = ent(rest | {f}) + ent(rest | c) - ent(rest) - ent(rest | c | {f})
                n1 = neighbors(f) & rest
                n2 = neighbors(f) - rest
                bound = _cond(backend, {f}, n1) + _cond(backend, {f}, n2)
                found = (f, nb, nd, value, bound, n1, n2)
                break
            if found is None:
                raise ExtensionStuck(f"cannot trim {side} towards the seed", keep)
            f, b, d, value, bound, n1, n2 = found
            moves.append(Move(f"shrink-{side}", f, value, bound, {"N1": n1, "N2": n2}))
    return moves, (b, c, d)


def extend_a1(backend, b: Iterable, c: Iterable, d: Iterable, max_steps: int = 5000) -> ExtensionCertificate:
    """Certificate for ``S(C|B) + S(C|D) = 0`` from A1 at one face.

    The target is deformed back to an elementary A1 instance: faces of ``C``
    are handed to ``D`` or ``B`` (purification swaps) until one face is left,
    then ``B`` and ``D`` are trimmed to the ring around it. Every move keeps
    ``B, C, D, BC, CD, BCD`` disks and changes ``S(C|B) + S(C|D)`` by a
    conditional mutual information bounded by an A1 deficit. The steps are
    reported from the seed towards the target.
    """
    backend = as_backend(backend)
    b = frozenset(FaceCoord(*f) for f in b)
    c = frozenset(FaceCoord(*f) for f in c)
    d = frozenset(FaceCoord(*f) for f in d)
    _a1_pre(b, c, d)
    target = (b, c, d)
    # the surviving face must see both B and D
    cores = sorted(c, key=lambda f: (not (neighbors(f) & b and neighbors(f) & d), f))
    last = None
    for core in cores:
        try:
            moves, (b, c, d) = _deform_to_seed(backend, target, core, max_steps)
            break
        except ExtensionStuck as e:
            last = e
    else:
        raise last
    (core,) = c
    seed_value = a1_value(backend, c, b, d)
    seed = Move("seed", core, seed_value, seed_value, {"B": b, "D": d})
    steps = [seed]
    for m in reversed(moves):
        # reversed: shrinking becomes growing towards the target
        if m.kind.startswith("shrink-"):
            m.kind = "grow-" + m.kind.split("-", 1)[1]
        steps.append(m)
    tb, tc, td = target
    final = a1_value(backend, tc, tb, td)
    cert = ExtensionCertificate(
        "S(C|B)+S(C|D)", {"B": tb, "C": tc, "D": td}, steps, final, False, backend.eps
    )
    cert.passed = cert.chain_ok() and _zero(backend, final) and _zero(backend, cert.telescoped() - final)
    return cert


def overlap_bound(backend, a: Iterable, b: Iterable, c: Iterable):
    """Bound ``I(A:C|B) <= S(C|B) + S(C|D)`` with ``D = N(C) \\ (A ∪ B)``.

    Returns ``(cmi, D, certificate)`` where the certificate proves the bound
    vanishes.
    """
    backend = as_backend(backend)
    a, b, c = (frozenset(FaceCoord(*f) for f in x) for x in (a, b, c))
    d = lat.neighborhood(c) - a - b
    cert = extend_a1(backend, b, c, d)
    return backend.cmi(a, b, c), d, cert


# --- area law ------------------------------------------------------------------


@dataclass
class AreaLawFit:
    alpha: float
    gamma: float
    residual: float
    deviations: list
    flagged: list

    def __iter__(self):
        return iter((self.alpha, self.gamma, self.residual))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "residual": self.residual,
            "flagged": [_faces(x) for x in self.flagged],
        }


def fit_area_law(backend, regions: Iterable, drop_outliers: bool = False, tol: float = 1e-9) -> AreaLawFit:
    """Least-squares fit of ``S(A) = α |∂A| - γ`` over disks.

    ``|∂A|`` counts boundary hex edges. With ``drop_outliers`` the region
    deviating most is removed (and flagged) until the residual is within
    ``tol``.
    """
    backend = as_backend(backend)
    regions = [frozenset(FaceCoord(*f) for f in x) for x in regions]
    for x in regions:
        _require_disk(x)
    data = [(lat.boundary_length(x), float(backend.entropy(x))) for x in regions]
    active = list(range(len(regions)))
    flagged = []
    while True:
        m = np.array([[data[i][0], -1.0] for i in active])
        y = np.array([data[i][1] for i in active])
        sol, *_ = np.linalg.lstsq(m, y, rcond=None)
        dev = m @ sol - y
        resid = float(np.abs(dev).max(initial=0.0))
        if not drop_outliers or resid <= tol or len(active) <= 3:
            break
        worst = active[int(np.argmax(np.abs(dev)))]
        flagged.append(regions[worst])
        active.remove(worst)
    alpha, gamma = (float(v) for v in sol)
    devs = [float(alpha * data[i][0] - gamma - data[i][1]) for i in range(len(regions))]
    return AreaLawFit(alpha, gamma, resid, devs, flagged)
