"""Parent Hamiltonians ``H = Σ_X (I - P_X)`` built from a reference state.

Stabilizer backends give each term as the local stabilizer group of the
region; dense backends give the support projector of the marginal.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from . import gf2
from . import lattice as lat
from .axioms import StabilizerBackend, as_backend
from .lattice import CoverSpec, FaceCoord
from .stabilizer import (
    DENSE_QUBIT_CAP,
    StabilizerCode,
    canonical_group,
    codes_commute,
    logical_operator_in_region,
    popcount,
)
from .tensor import (
    EIGEN_CAP,
    CapExceeded,
    FactorSpace,
    embed,
    op_norm,
    partial_trace,
    support_projector,
)


@dataclass
class Term:
    region: frozenset
    code: StabilizerCode | None = None
    projector: object | None = None  # tensor.Projector on the region's faces

    @property
    def faces(self) -> int:
        return len(self.region)


@dataclass
class ParentHamiltonian:
    cover: CoverSpec
    backend: object
    terms: list

    @property
    def extent(self) -> lat.Extent:
        return self.cover.extent

    @property
    def stabilizer(self) -> bool:
        return isinstance(self.backend, StabilizerBackend)

    def terms_inside(self, region: Iterable) -> list[Term]:
        d = self.extent.wrap_region(region)
        return [t for t in self.terms if t.region <= d]


def _pairs_json(pairs):
    return [[i, j, v if isinstance(v, (bool, str)) else _num(v)] for i, j, v in pairs]


def _num(v):
    return int(v) if isinstance(v, (int, np.integer)) else float(v)


def _faces(a) -> list:
    return [[f[0], f[1]] for f in sorted(a)]


# --- cover validation ----------------------------------------------------------


@dataclass
class CoverReport:
    markov_pairs: list  # (i, j, I(X\Y : Y\X | X∩Y))
    cover_misses: list
    overlap_classes: dict  # canonical overlap shape -> pair count
    passed: bool
    eps: float

    def to_dict(self) -> dict:
        return {
            "markov_pairs": _pairs_json(self.markov_pairs),
            "cover_misses": _faces(self.cover_misses),
            "overlap_classes": len(self.overlap_classes),
            "max_cmi": _num(max((v for _, _, v in self.markov_pairs), default=0)),
            "pass": self.passed,
        }


def overlap_key(x: frozenset, y: frozenset, extent: lat.Extent) -> tuple:
    """Shape of ``(X∖Y, X∩Y, Y∖X)`` up to lattice symmetry, symmetric in ``X, Y``."""
    a = lat.unwrap(x, extent, min(x & y))
    b = lat.unwrap(y, extent, min(x & y))
    k1 = lat.canonical_shape(a - b, a & b, b - a)
    k2 = lat.canonical_shape(b - a, a & b, a - b)
    return min(k1, k2)


def validate_cover(backend, cover: CoverSpec, faces: Iterable | None = None) -> CoverReport:
    """Pairwise Markov condition plus the cover condition on padded disks."""
    backend = as_backend(backend)
    wrapped = cover.wrapped()
    pairs = []
    classes: dict = {}
    for i, j in lat.overlapping_pairs(cover):
        x, y = wrapped[i], wrapped[j]
        value = backend.cmi(x - y, x & y, y - x)
        pairs.append((i, j, value))
        key = overlap_key(x, y, cover.extent)
        classes[key] = classes.get(key, 0) + 1
    misses = lat.cover_condition_misses(cover, faces)
    ok = all(abs(v) <= backend.eps for _, _, v in pairs) and not misses
    return CoverReport(pairs, misses, classes, ok, backend.eps)


# --- construction --------------------------------------------------------------


class CoverInvalid(ValueError):
    def __init__(self, report: CoverReport):
        super().__init__("cover fails the Markov or cover condition")
        self.report = report


def _term(backend, region: frozenset) -> Term:
    if isinstance(backend, StabilizerBackend):
        return Term(region, code=backend.state.support_code(region))
    rho = partial_trace(backend.rho, region)
    return Term(region, projector=support_projector(rho))


def build(backend, cover: CoverSpec, validate: bool = True) -> ParentHamiltonian:
    backend = as_backend(backend)
    if validate:
        report = validate_cover(backend, cover)
        if not report.passed:
            raise CoverInvalid(report)
    terms = [_term(backend, x) for x in cover.wrapped()]
    return ParentHamiltonian(cover, backend, terms)


def build_from_regions(backend, regions: Iterable, extent: lat.Extent, provenance: dict | None = None) -> ParentHamiltonian:
    """Terms for arbitrary regions, without the cover checks."""
    cover = CoverSpec(tuple(frozenset(FaceCoord(*f) for f in x) for x in regions), extent, provenance or {})
    return build(backend, cover, validate=False)


# --- commutation ---------------------------------------------------------------


@dataclass
class CommutationReport:
    pairs: list  # (i, j, commute or norm)
    cross_checks: list  # dicts per overlap class
    passed: bool

    def to_dict(self) -> dict:
        return {
            "pairs": len(self.pairs),
            "failures": _pairs_json([p for p in self.pairs if p[2] is False or (not isinstance(p[2], bool) and p[2] >= 1e-8)]),
            "cross_checks": self.cross_checks,
            "pass": self.passed,
        }


def _dense_commutator(c1: StabilizerCode, c2: StabilizerCode) -> float:
    """Operator norm of ``[P1, P2]``, or its Frobenius upper bound when that is below 1e-12."""
    qubits = gf2.bit_indices(c1.qubits | c2.qubits)
    pq = c1.apply_projector(c2.dense_projector(qubits), qubits)
    comm = pq - pq.conj().T  # QP = (PQ)†
    bound = float(np.linalg.norm(comm))
    if bound < 1e-12:
        return bound
    return float(np.abs(np.linalg.eigvalsh(1j * comm)).max())


def _minimal_pair(x: frozenset, y: frozenset):
    """The overlap of ``X, Y`` plus one adjacent face from each side."""
    o = x & y
    near = lat.neighborhood(o)
    xs = sorted((x - y) & near)
    ys = sorted((y - x) & near)
    if not xs or not ys:
        return None
    return o | {xs[0]}, o | {ys[0]}


def check_commuting(h: ParentHamiltonian, cross_check: bool = True, max_qubits: int = DENSE_QUBIT_CAP) -> CommutationReport:
    """Pairwise commutation of overlapping terms.

    With ``cross_check`` every overlap class is also tested densely on its
    minimal pair (overlap plus one face per side) when that fits within
    ``max_qubits``; the dense norm must agree with the stabilizer verdict.
    """
    pairs = []
    seen: dict = {}
    ok = True
    for i, j in lat.overlapping_pairs(h.cover):
        a, b = h.terms[i], h.terms[j]
        if h.stabilizer:
            value = codes_commute(a.code, b.code)
            ok &= value
        else:
            labels = tuple(sorted(a.region | b.region))
            sp = h.backend.rho.space
            space = FactorSpace(labels, tuple(sp.dims[sp.index[f]] for f in labels))
            value = op_norm(_comm(embed(a.projector, space).matrix, embed(b.projector, space).matrix))
            ok &= value < 1e-8
        pairs.append((i, j, value))
        if cross_check and h.stabilizer:
            key = overlap_key(a.region, b.region, h.extent)
            if key not in seen:
                seen[key] = _cross_check(h, a.region, b.region, max_qubits)
    checks = list(seen.values())
    ok &= all(c["agree"] for c in checks if c["status"] == "checked")
    return CommutationReport(pairs, checks, ok)


def _comm(p, q):
    return p @ q - q @ p


def _cross_check(h: ParentHamiltonian, x: frozenset, y: frozenset, max_qubits: int) -> dict:
    state = h.backend.state
    out = {"overlap_faces": len(x & y), "status": "skipped", "agree": True}
    seed = min(x & y)
    mp = _minimal_pair(lat.unwrap(x, h.extent, seed), lat.unwrap(y, h.extent, seed))
    if mp is None:
        out["status"] = "no-minimal-pair"
        return out
    xs, ys = mp
    c1, c2 = state.support_code(xs), state.support_code(ys)
    nq = popcount(c1.qubits | c2.qubits)
    out["qubits"] = nq
    if nq > max_qubits:
        out["status"] = "over-cap"
        return out
    norm = _dense_commutator(c1, c2)
    verdict = codes_commute(c1, c2)
    out.update(status="checked", norm=norm, stabilizer=verdict, agree=(norm < 1e-9) == verdict)
    return out


def cross_check_pair(c1: StabilizerCode, c2: StabilizerCode) -> dict:
    """Dense commutator of two small codes next to the symplectic verdict."""
    norm = _dense_commutator(c1, c2)
    verdict = codes_commute(c1, c2)
    return {"norm": norm, "stabilizer": verdict, "agree": (norm < 1e-9) == verdict}


# --- kernels -------------------------------------------------------------------


@dataclass
class KernelDescriptor:
    region: frozenset
    log2_dim: float
    code: StabilizerCode | None = None
    basis: np.ndarray | None = None
    labels: tuple = ()

    @property
    def dim(self):
        return 2 ** self.log2_dim if self.code is not None else self.basis.shape[1]


def _independent(gens: list) -> list:
    pivots: dict = {}
    out = []
    for g in gens:
        row = g.symplectic()
        while row:
            p = pivots.get(row & -row)
            if p is None:
                pivots[row & -row] = row
                out.append(g)
                break
            row ^= p
    return out


def kernel_code(h: ParentHamiltonian, terms: list[Term], region: frozenset) -> StabilizerCode:
    """Joint +1 space of stabilizer terms as one code on ``region``'s qubits."""
    gens = [g for t in terms for g in t.code.generators]
    mask = h.backend.state.qubit_mask(region)
    return StabilizerCode(h.backend.state.n, tuple(_independent(gens)), frozenset(region), mask)


def _dense_space(h: ParentHamiltonian, region: frozenset):
    """Labels and dims of ``region`` for dense work: qubits or faces."""
    if h.stabilizer:
        qubits = h.backend.state.region_qubits(region)
        return tuple(qubits), (2,) * len(qubits)
    sp = h.backend.rho.space
    labels = tuple(sorted(region))
    return labels, tuple(sp.dims[sp.index[f]] for f in labels)


def _dense_sum(h: ParentHamiltonian, terms: list[Term], region: frozenset):
    labels, dims = _dense_space(h, region)
    space = FactorSpace(labels, dims)
    if space.dim > EIGEN_CAP:
        raise CapExceeded(f"dense kernel dimension {space.dim} exceeds cap {EIGEN_CAP}")
    total = np.zeros((space.dim, space.dim), dtype=complex)
    eye = np.eye(space.dim)
    for t in terms:
        if t.code is not None:
            p = t.code.dense_projector(list(labels))
        else:
            p = embed(t.projector, space).matrix
        total += eye - p
    return space, total


def _commuting_kernel(h: ParentHamiltonian, terms: list[Term], region: frozenset, seed: int = 0):
    """Kernel basis when every term is a stabilizer code and all generators commute.

    The kernel projector is then the product of the term projectors, so its
    range comes from a random sketch instead of a full diagonalisation.
    """
    gens = [g for t in terms for g in t.code.generators]
    if any(not a.commutes(b) for i, a in enumerate(gens) for b in gens[i + 1:]):
        return None
    labels, dims = _dense_space(h, region)
    space = FactorSpace(labels, dims)
    q = np.eye(space.dim, dtype=complex)
    for t in terms:
        q = t.code.apply_projector(q, list(labels))
    rank = int(round(np.trace(q).real))
    if rank == 0:
        return space, np.zeros((space.dim, 0), dtype=complex)
    rng = np.random.default_rng(seed)
    sketch = q @ (rng.standard_normal((space.dim, rank)) + 1j * rng.standard_normal((space.dim, rank)))
    basis, _ = np.linalg.qr(sketch)
    return space, basis


def dense_kernel(h: ParentHamiltonian, terms: list[Term], region: frozenset, tol: float = 1e-9):
    if h.stabilizer and all(t.code is not None for t in terms):
        fast = _commuting_kernel(h, terms, region)
        if fast is not None:
            return fast
    space, total = _dense_sum(h, terms, region)
    evals, vecs = np.linalg.eigh((total + total.conj().T) / 2)
    return space, vecs[:, evals < tol]


def restrict(h: ParentHamiltonian, region: Iterable, dense: bool = False) -> KernelDescriptor:
    """Kernel of ``H_D = Σ_{X ⊆ D} (I - P_X)`` on ``D``."""
    d = h.extent.wrap_region(region)
    terms = h.terms_inside(d)
    if h.stabilizer and not dense:
        code = kernel_code(h, terms, d)
        return KernelDescriptor(d, popcount(code.qubits) - code.k, code=code)
    space, basis = dense_kernel(h, terms, d)
    return KernelDescriptor(d, float(np.log2(max(basis.shape[1], 1))) if basis.shape[1] else float("-inf"), basis=basis, labels=space.labels)


# --- LTQO ----------------------------------------------------------------------


def region_radius(region: Iterable) -> int:
    """Smallest ``r`` with the region inside a ball of radius ``r`` about one of its faces."""
    a = list(region)
    return min(max(lat.hex_distance(c, f) for f in a) for c in a)


def cover_radius(cover: CoverSpec) -> int:
    shapes = {}
    for x in cover.regions:
        q0 = min(f.q for f in x)
        r0 = min(f.r for f in x)
        key = frozenset((f.q - q0, f.r - r0) for f in x)
        shapes.setdefault(key, x)
    return max(region_radius(x) for x in shapes.values())


@dataclass
class LtqoParams:
    ell: int | None = None
    r_max: int = 2
    centers: tuple = ()

    def __post_init__(self):
        if self.ell is not None and self.ell < 1:
            raise ValueError("ell must be at least 1")


@dataclass
class LtqoEntry:
    center: tuple
    radius: int
    logical_free: bool
    marginal_ok: bool
    status: str = "checked"
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != "checked" or (self.logical_free and self.marginal_ok)

    def to_dict(self) -> dict:
        return {
            "center": list(self.center),
            "radius": self.radius,
            "logical_free": self.logical_free,
            "marginal_ok": self.marginal_ok,
            "status": self.status,
            "pass": self.passed,
            **{k: _num(v) if isinstance(v, (int, float, np.integer, np.floating)) else v for k, v in self.detail.items()},
        }


@dataclass
class LtqoReport:
    ell: int
    entries: list
    passed: bool

    def to_dict(self) -> dict:
        return {"ell": self.ell, "entries": [e.to_dict() for e in self.entries], "pass": self.passed}


def local_uniqueness(h: ParentHamiltonian, a: Iterable, d: Iterable) -> tuple[bool, bool, dict]:
    """Stabilizer test that zero-energy states of ``H_D`` all share ``σ_A``.

    Returns ``(logical_free, marginal_ok, numbers)``. No kernel logical lives
    on ``A`` iff every Pauli on ``A`` commuting with the kernel group is in
    it; the common marginal is ``σ_A`` iff the group elements on ``A`` are
    as many as ``σ``'s own local group there.
    """
    ext = h.extent
    a = ext.wrap_region(a)
    d = ext.wrap_region(d)
    if not a <= d:
        raise ValueError("A must lie inside D")
    state = h.backend.state
    code = kernel_code(h, h.terms_inside(d), d)
    amask = state.qubit_mask(a)
    logical = logical_operator_in_region(code, amask)
    comp = code.qubits & ~amask
    inside = code.k - gf2.rank(g.restrict(comp).symplectic() for g in code.generators)
    local = popcount(amask) - state.entropy_of_mask(amask)
    return (not logical), inside == local, {"kernel_on_A": inside, "sigma_on_A": local, "terms": len(h.terms_inside(d))}


def check_ltqo(h: ParentHamiltonian, params: LtqoParams | None = None, region_filter=None) -> LtqoReport:
    """Local uniqueness on balls ``A`` of radius ``0..r_max`` inside ``A(ℓ)``.

    ``ℓ`` defaults to ``2 r_cover + 1``. Balls whose padded version wraps
    onto itself are reported as ``too-large``; ``region_filter(A, D)`` may
    mark others ``excluded`` (for example disks crossing a wall twice).
    """
    params = params or LtqoParams()
    ell = params.ell if params.ell is not None else 2 * cover_radius(h.cover) + 1
    centers = params.centers or (h.extent.faces()[0],)
    entries = []
    for c in centers:
        c = FaceCoord(*c)
        for r in range(params.r_max + 1):
            a = lat.ball(c, r)
            d = lat.ball(c, r + ell)
            try:
                h.extent.wrap_region(d)
            except ValueError:
                entries.append(LtqoEntry(tuple(c), r, False, False, "too-large"))
                continue
            if region_filter is not None and not region_filter(a, d):
                entries.append(LtqoEntry(tuple(c), r, False, False, "excluded"))
                continue
            if h.stabilizer:
                lf, mo, detail = local_uniqueness(h, a, d)
            else:
                rep = dense_ltqo(h, a, d)
                lf, mo, detail = rep["kernel_marginals"] < 1e-8, rep["sandwich"] < 1e-8, rep
            entries.append(LtqoEntry(tuple(c), r, lf, mo, "checked", detail))
    checked = [e for e in entries if e.status == "checked"]
    return LtqoReport(ell, entries, bool(checked) and all(e.passed for e in entries))


def _sigma_a(h: ParentHamiltonian, a: frozenset) -> np.ndarray:
    if h.stabilizer:
        return h.backend.state.densify(a, by_face=False).matrix
    return partial_trace(h.backend.rho, a).matrix


def dense_ltqo(h: ParentHamiltonian, a: Iterable, d: Iterable, observables: int = 20, seed: int = 0) -> dict:
    """Dense local-uniqueness test on ``D``.

    Reports the largest deviation of ``Tr_{D∖A} |v_i><v_j|`` from
    ``δ_ij σ_A`` over a kernel basis, and of ``Q O_A Q`` from
    ``Tr(σ_A O_A) Q`` over random Hermitian ``O_A``.
    """
    ext = h.extent
    a = ext.wrap_region(a)
    d = ext.wrap_region(d)
    space, basis = dense_kernel(h, h.terms_inside(d), d)
    a_labels, _ = _dense_space(h, a)
    keep = [space.index[l] for l in a_labels]
    sigma = _sigma_a(h, a)
    dims = space.dims
    nk = basis.shape[1]
    # V as (A, rest, kernel); blocks g[a, b] = V_a† V_b must equal σ_A[b, a] 1
    rest = [i for i in range(len(dims)) if i not in keep]
    da = sigma.shape[0]
    v = basis.reshape(dims + (nk,)).transpose(keep + rest + [len(dims)]).reshape(da, -1, nk)
    g = np.einsum("ark,brl->abkl", v.conj(), v)
    eye = np.eye(nk)
    worst = max(
        (op_norm(g[i, j] - sigma[j, i] * eye) for i in range(da) for j in range(da)),
        default=0.0,
    )
    rng = np.random.default_rng(seed)
    sand = 0.0
    for _ in range(observables):
        x = rng.normal(size=(da, da)) + 1j * rng.normal(size=(da, da))
        o = (x + x.conj().T) / 2
        c = np.trace(sigma @ o)
        # ‖Q O Q - c Q‖ = ‖V† O V - c 1‖ for Q = V V†
        sand = max(sand, op_norm(np.einsum("ab,abkl->kl", o, g) - c * eye))
    return {"kernel_dim": nk, "kernel_marginals": worst, "sandwich": sand, "qubits_or_faces": len(dims), "observables": observables}


# --- weight reduction ----------------------------------------------------------


@dataclass
class SplitNode:
    region: frozenset
    a: frozenset
    b: frozenset
    c: frozenset
    cmi: float

    def to_dict(self) -> dict:
        return {"region": _faces(self.region), "A": _faces(self.a), "B": _faces(self.b), "C": _faces(self.c), "cmi": _num(self.cmi)}


class SplitError(RuntimeError):
    pass


def split_region(backend, region: frozenset, extent: lat.Extent) -> tuple[frozenset, frozenset, frozenset, float]:
    """Peel one boundary face ``a`` off a disk: ``(a, N(a) ∩ R, rest)``.

    Faces are tried in lexicographic order; the first whose split has zero
    conditional mutual information is used.
    """
    plane = lat.unwrap(region, extent, min(region))
    for f in sorted(plane):
        if not lat.can_remove(plane, f):
            continue
        b = lat.neighbors(f) & plane
        c = plane - b - {f}
        if not c:
            continue
        value = backend.cmi({f}, b, c)
        if abs(value) <= backend.eps:
            w = extent.wrap_region
            return w({f}), w(b), w(c), value
    raise SplitError(f"no Markov split for a region of {len(region)} faces")


def split_tree(backend, region: frozenset, extent: lat.Extent, max_faces: int = 3) -> tuple[list[frozenset], list[SplitNode]]:
    """Leaves of size ``<= max_faces`` and the split nodes producing them.

    ``P_R = P_AB P_BC`` at every node, so the leaves' joint kernel equals
    ``ker (I - P_R)``. Recursion handles ``BC`` before ``AB``.
    """
    backend = as_backend(backend)
    if len(region) <= max_faces:
        return [region], []
    a, b, c, value = split_region(backend, region, extent)
    node = SplitNode(region, a, b, c, value)
    leaves, nodes = [], [node]
    for part in (b | c, a | b):
        lv, nd = split_tree(backend, part, extent, max_faces)
        leaves += lv
        nodes += nd
    return leaves, nodes


@dataclass
class WeightReduction:
    hamiltonian: ParentHamiltonian
    nodes: list
    original: ParentHamiltonian

    @property
    def max_weight(self) -> int:
        return max(len(t.region) for t in self.hamiltonian.terms)

    def to_dict(self) -> dict:
        return {
            "terms_before": len(self.original.terms),
            "terms_after": len(self.hamiltonian.terms),
            "max_weight": self.max_weight,
            "split_nodes": len(self.nodes),
            "max_split_cmi": _num(max((abs(n.cmi) for n in self.nodes), default=0)),
        }


def weight_reduce(h: ParentHamiltonian, max_faces: int = 3, near: Iterable | None = None) -> WeightReduction:
    """Replace each term by terms on at most ``max_faces`` faces.

    The reduced terms need not commute with each other. With ``near`` only
    terms meeting that region are reduced (and kept), which is all a
    kernel computation on ``near`` needs.
    """
    leaves: dict = {}
    nodes = []
    keep = range(len(h.terms))
    if near is not None:
        near = h.extent.wrap_region(near)
        keep = [i for i, t in enumerate(h.terms) if t.region & near]
    for t in (h.terms[i] for i in keep):
        lv, nd = split_tree(h.backend, t.region, h.extent, max_faces)
        nodes += nd
        for x in lv:
            leaves.setdefault(x, None)
    order = sorted(leaves, key=lambda x: sorted(x))
    reduced = [_term(h.backend, x) for x in order]
    cover = CoverSpec(
        tuple(lat.unwrap(x, h.extent, min(x)) for x in order),
        h.extent,
        dict(h.cover.provenance, reduced=max_faces),
    )
    original = h
    if near is not None:
        sub = replace(h.cover, regions=tuple(h.cover.regions[i] for i in keep))
        original = ParentHamiltonian(sub, h.backend, [h.terms[i] for i in keep])
    return WeightReduction(ParentHamiltonian(cover, h.backend, reduced), nodes, original)


def kernel_group(h: ParentHamiltonian, terms: list[Term] | None = None) -> tuple:
    """Canonical signed group generated by all stabilizer terms."""
    terms = h.terms if terms is None else terms
    gens = _independent([g for t in terms for g in t.code.generators])
    return canonical_group(gens, h.backend.state.n)


def kernels_equal(h1: ParentHamiltonian, h2: ParentHamiltonian) -> bool:
    return kernel_group(h1) == kernel_group(h2)


def dense_kernel_projector(h: ParentHamiltonian, region: Iterable) -> np.ndarray:
    d = h.extent.wrap_region(region)
    _, basis = dense_kernel(h, h.terms_inside(d), d)
    return basis @ basis.conj().T


# --- frustration-freeness ------------------------------------------------------


def frustration_free(h: ParentHamiltonian, backend=None) -> bool:
    """Whether every term annihilates the reference state of ``backend``.

    ``backend`` defaults to the one ``h`` was built from.
    """
    backend = h.backend if backend is None else as_backend(backend)
    if isinstance(backend, StabilizerBackend):
        state = backend.state
        for t in h.terms:
            if t.code is None:
                raise TypeError("stabilizer check needs stabilizer terms")
            for g in t.code.generators:
                try:
                    s = state.signed_element(g.x, g.z)
                except ValueError:
                    return False
                if s.m != g.m:
                    return False
        return True
    for t in h.terms:
        rho = partial_trace(backend.rho, t.region)
        if t.projector is not None:
            p = t.projector.matrix
        else:
            labels = sorted(t.region)
            p = t.code.dense_projector([q for f in labels for q in h.backend.state.face_qubits(f)])
        energy = float(np.real(np.trace((np.eye(p.shape[0]) - p) @ rho.matrix)))
        if energy > backend.eps:
            return False
    return True


# --- manifest ------------------------------------------------------------------


def manifest(h: ParentHamiltonian, stamps: dict | None = None) -> dict:
    terms = []
    for i, t in enumerate(h.terms):
        entry = {"index": i, "region": _faces(t.region)}
        if t.code is not None:
            entry["generators"] = [g.to_text() for g in t.code.generators]
        else:
            entry["projector_rank"] = t.projector.rank
        terms.append(entry)
    return {
        "cover": {
            "extent": h.extent.to_dict(),
            "provenance": h.cover.provenance,
            "regions": [_faces(x) for x in h.cover.regions],
        },
        "terms": terms,
        "stamps": stamps or {},
    }


def write_manifest(h: ParentHamiltonian, path, stamps: dict | None = None) -> None:
    """Manifest JSON; dense projectors go to sibling binary files."""
    from .tensor import write_matrix

    data = manifest(h, stamps)
    base = os.path.dirname(os.path.abspath(path))
    for entry, t in zip(data["terms"], h.terms):
        if t.projector is not None:
            name = f"term{entry['index']}.bin"
            write_matrix(os.path.join(base, name), t.projector)
            entry["projector_file"] = name
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)


__all__ = [
    "CommutationReport",
    "CoverInvalid",
    "CoverReport",
    "KernelDescriptor",
    "LtqoParams",
    "LtqoReport",
    "ParentHamiltonian",
    "SplitError",
    "SplitNode",
    "Term",
    "WeightReduction",
    "build",
    "build_from_regions",
    "check_commuting",
    "check_ltqo",
    "cover_radius",
    "cross_check_pair",
    "dense_kernel_projector",
    "dense_ltqo",
    "frustration_free",
    "kernel_group",
    "kernels_equal",
    "local_uniqueness",
    "manifest",
    "restrict",
    "split_tree",
    "validate_cover",
    "weight_reduce",
    "write_manifest",
]
