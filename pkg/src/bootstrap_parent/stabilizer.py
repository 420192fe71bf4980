"""Exact stabilizer backend over GF(2).

A Pauli operator on ``n`` qubits is stored as two integer bitmasks and a
phase exponent: ``P = i**m * σ_0 ⊗ σ_1 ⊗ ...`` where qubit ``j`` carries
``X`` if only bit ``j`` of ``x`` is set, ``Z`` if only bit ``j`` of ``z`` is
set and ``Y`` if both are set. Hermitian Paulis have ``m`` even.

Entropies are integers in bits. For a pure stabilizer state with group ``G``,
``S(A) = rank(G|_A) - |A|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .lattice import Extent, FaceCoord, ring
from .tensor import DensityOperator, FactorSpace, Projector

DENSE_QUBIT_CAP = 12


def popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    m: int = 0  # phase exponent of i, relative to the letter form

    def __post_init__(self):
        object.__setattr__(self, "m", self.m % 4)
        limit = 1 << self.n
        if self.x >= limit or self.z >= limit or self.x < 0 or self.z < 0:
            raise ValueError("Pauli bit vectors exceed the qubit count")

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.m]

    @property
    def support(self) -> int:
        return self.x | self.z

    def weight(self) -> int:
        return popcount(self.x | self.z)

    def is_hermitian(self) -> bool:
        return self.m % 2 == 0

    def commutes(self, other: "PauliString") -> bool:
        return popcount((self.x & other.z) ^ (self.z & other.x)) % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        # Convert to X^x Z^z form, multiply, convert back.
        k1 = self.m + popcount(self.x & self.z)
        k2 = other.m + popcount(other.x & other.z)
        k = k1 + k2 + 2 * popcount(self.z & other.x)
        x, z = self.x ^ other.x, self.z ^ other.z
        return PauliString(self.n, x, z, k - popcount(x & z))

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.m + 2)

    def unsigned(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, 0)

    def symplectic(self) -> int:
        """Row ``x | z << n`` used for GF(2) elimination."""
        return self.x | (self.z << self.n)

    def to_text(self) -> str:
        if self.m not in (0, 2):
            raise ValueError("only Hermitian Paulis have a text form")
        chars = []
        for j in range(self.n):
            bx, bz = (self.x >> j) & 1, (self.z >> j) & 1
            chars.append("_XZY"[bx | (bz << 1)])
        return ("+" if self.m == 0 else "-") + "".join(chars)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        text = text.strip()
        sign, body = text[0], text[1:]
        if sign not in "+-":
            raise ValueError(f"Pauli string must start with a sign: {text!r}")
        x = z = 0
        for j, ch in enumerate(body):
            if ch == "X":
                x |= 1 << j
            elif ch == "Z":
                z |= 1 << j
            elif ch == "Y":
                x |= 1 << j
                z |= 1 << j
            elif ch not in "_I":
                raise ValueError(f"bad Pauli letter {ch!r}")
        return cls(len(body), x, z, 0 if sign == "+" else 2)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        b = 1 << qubit
        return cls(n, b if letter in "XY" else 0, b if letter in "ZY" else 0)

    @classmethod
    def from_support(cls, n: int, qubits: Iterable[int], letter: str, sign: int = 1) -> "PauliString":
        mask = 0
        for q in qubits:
            mask ^= 1 << q
        return cls(n, mask if letter in "XY" else 0, mask if letter in "ZY" else 0, 0 if sign > 0 else 2)

    def restrict(self, mask: int) -> "PauliString":
        """Unsigned restriction to the qubits in ``mask``."""
        return PauliString(self.n, self.x & mask, self.z & mask, 0)

    def matrix(self, qubits: Sequence[int]) -> np.ndarray:
        """Dense matrix on ``qubits`` (first listed = most significant)."""
        if self.support & ~_mask(qubits):
            raise ValueError("Pauli acts outside the listed qubits")
        mats = {
            (0, 0): np.eye(2, dtype=complex),
            (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
            (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
            (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
        }
        out = np.ones((1, 1), dtype=complex)
        for q in qubits:
            out = np.kron(out, mats[((self.x >> q) & 1, (self.z >> q) & 1)])
        return self.phase * out

    def signed_permutation(self, qubits: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """``(perm, phase)`` with ``(P M)[r] = phase[r] * M[perm[r]]`` on ``qubits``."""
        if self.support & ~_mask(qubits):
            raise ValueError("Pauli acts outside the listed qubits")
        nq = len(qubits)
        xl = zl = 0
        for k, q in enumerate(qubits):
            bit = 1 << (nq - 1 - k)
            if (self.x >> q) & 1:
                xl |= bit
            if (self.z >> q) & 1:
                zl |= bit
        rows = np.arange(1 << nq)
        perm = rows ^ xl
        parity = np.zeros(1 << nq, dtype=np.int64)
        masked = perm & zl
        while zl:
            parity ^= masked & 1
            masked >>= 1
            zl >>= 1
        k = (self.m + popcount(self.x & self.z)) % 4
        phase = (1, 1j, -1, -1j)[k] * (1 - 2 * parity)
        return perm, phase.astype(complex)


def _mask(qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


def product(paulis: Iterable[PauliString], n: int) -> PauliString:
    out = PauliString(n, 0, 0)
    for p in paulis:
        out = out * p
    return out


def _select(rows: Sequence, bits: int) -> list:
    return [rows[i] for i in gf2.bit_indices(bits)]


# --- codes -------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizerCode:
    """Commuting independent Hermitian Paulis; ``P = Π (I + g)/2``.

    ``qubits`` is the bitmask of qubits the code acts on; ``support`` is the
    face region those qubits belong to.
    """

    n: int
    generators: tuple
    support: frozenset
    qubits: int

    @property
    def k(self) -> int:
        return len(self.generators)

    def projector_rank_log2(self) -> int:
        return popcount(self.qubits) - self.k

    def canonical(self) -> tuple:
        """Canonical form of the signed group: rref rows plus their signs."""
        return canonical_group(self.generators, self.n)

    def validate(self) -> None:
        gens = self.generators
        for i, g in enumerate(gens):
            if not g.is_hermitian():
                raise ValueError("code generators must be Hermitian")
            if g.support & ~self.qubits:
                raise ValueError("generator acts outside the code's qubits")
            for h in gens[i + 1:]:
                if not g.commutes(h):
                    raise ValueError("code generators must commute")
        if gf2.rank(g.symplectic() for g in gens) != len(gens):
            raise ValueError("code generators must be independent")

    def dense_projector(self, qubits: Sequence[int] | None = None) -> np.ndarray:
        if qubits is None:
            qubits = gf2.bit_indices(self.qubits)
        if len(qubits) > DENSE_QUBIT_CAP:
            raise ValueError(f"dense projector limited to {DENSE_QUBIT_CAP} qubits")
        return self.apply_projector(np.eye(2 ** len(qubits), dtype=complex), qubits)

    def apply_projector(self, m: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
        """``P m`` using one signed row permutation per generator."""
        if len(qubits) > DENSE_QUBIT_CAP:
            raise ValueError(f"dense projector limited to {DENSE_QUBIT_CAP} qubits")
        p = np.array(m, dtype=complex)
        for g in self.generators:
            perm, phase = g.signed_permutation(qubits)
            p = (p + phase[:, None] * p[perm]) / 2
        return p


def canonical_group(generators: Sequence[PauliString], n: int) -> tuple:
    """``(rows, signs)`` for the group generated by commuting Hermitian Paulis.

    ``rows`` is the rref of the symplectic rows; ``signs`` lists the phase
    exponent of the group element matching each row.
    """
    gens = list(generators)
    rows = [g.symplectic() for g in gens]
    reduced = gf2.rref(rows)
    signs = []
    for r in reduced:
        combo = gf2.solve_combination(rows, r)
        signs.append(product(_select(gens, combo), n).m)
    return tuple(reduced), tuple(signs)


def _all_commute(c1: StabilizerCode, c2: StabilizerCode) -> bool:
    shared = c1.qubits & c2.qubits
    if not shared:
        return True
    # per shared qubit: which generators of c2 carry X (resp. Z) there
    hx: dict = {}
    hz: dict = {}
    for i, h in enumerate(c2.generators):
        bit = 1 << i
        for j in gf2.bit_indices(h.x & shared):
            hx[j] = hx.get(j, 0) | bit
        for j in gf2.bit_indices(h.z & shared):
            hz[j] = hz.get(j, 0) | bit
    for g in c1.generators:
        acc = 0
        for j in gf2.bit_indices(g.x & shared):
            acc ^= hz.get(j, 0)
        for j in gf2.bit_indices(g.z & shared):
            acc ^= hx.get(j, 0)
        if acc:
            return False
    return True


def codes_commute(c1: StabilizerCode, c2: StabilizerCode) -> bool:
    """Whether the two code projectors commute.

    If every generator pair commutes the projectors commute. Otherwise they
    commute exactly when ``P1 P2 = 0``, which happens iff some Pauli lies in
    both groups with opposite signs.
    """
    if _all_commute(c1, c2):
        return True
    g1, g2 = list(c1.generators), list(c2.generators)
    rows = [g.symplectic() for g in g1 + g2]
    k1 = len(g1)
    low = (1 << k1) - 1
    for dep in gf2.dependencies(rows):
        a = product(_select(g1, dep & low), c1.n)
        b = product(_select(g2, dep >> k1), c1.n)
        if a.m != b.m:
            return True
    return False


def logical_operator_in_region(code: StabilizerCode, region_qubits: int) -> bool:
    """Whether a logical operator of ``code`` is supported on ``region_qubits``.

    Counts Paulis on the region commuting with the code against code elements
    supported on the region.
    """
    a = region_qubits & code.qubits
    na = popcount(a)
    if na == 0:
        return False
    rows_a = [g.restrict(a).symplectic() for g in code.generators]
    rank_a = gf2.rank(rows_a)
    comp = code.qubits & ~a
    rank_comp = gf2.rank(g.restrict(comp).symplectic() for g in code.generators)
    inside = code.k - rank_comp
    commuting = 2 * na - rank_a
    # qubits in the region outside the code's support are free and irrelevant here
    return commuting > inside


# --- states ------------------------------------------------------------------


@dataclass
class StabilizerState:
    """A pure stabilizer state with qubits assigned to lattice faces.

    ``qubit_to_face`` lists the face of each qubit. ``extent`` wraps plane
    coordinates onto the finite lattice. ``model`` is optional metadata used
    by the builders (for example edge indexing of the toric code).
    """

    n: int
    generators: list
    qubit_to_face: list
    extent: Extent | None = None
    model: dict = field(default_factory=dict)
    _face_qubits: dict = field(default_factory=dict, init=False, repr=False)
    _qubit_gens: list = field(default_factory=list, init=False, repr=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self.qubit_to_face = [FaceCoord(*f) for f in self.qubit_to_face]
        if len(self.qubit_to_face) != self.n:
            raise ValueError("every qubit needs a face")
        fq: dict = {}
        for j, f in enumerate(self.qubit_to_face):
            fq.setdefault(f, []).append(j)
        self._face_qubits = {f: tuple(v) for f, v in fq.items()}
        self._qubit_gens = [[] for _ in range(self.n)]
        for i, g in enumerate(self.generators):
            for j in gf2.bit_indices(g.support):
                self._qubit_gens[j].append(i)

    # -- validation / structure --

    def validate(self) -> None:
        gens = self.generators
        if len(gens) != self.n:
            raise ValueError(f"{len(gens)} generators for {self.n} qubits")
        for g in gens:
            if g.n != self.n or not g.is_hermitian():
                raise ValueError("generators must be Hermitian Paulis on n qubits")
        for i, g in enumerate(gens):
            for j in self._generators_touching(g.support):
                if j > i and not g.commutes(gens[j]):
                    raise ValueError(f"generators {i} and {j} anticommute")
        if gf2.rank(g.symplectic() for g in gens) != self.n:
            raise ValueError("generators are not independent")
        if self.extent is not None:
            for f in self._face_qubits:
                if self.extent.wrap(f) != f:
                    raise ValueError(f"face {f} is not a canonical lattice face")

    @property
    def faces(self) -> list:
        return sorted(self._face_qubits)

    def face_qubits(self, f) -> tuple:
        return self._face_qubits.get(FaceCoord(*f), ())

    def wrap(self, region: Iterable) -> frozenset:
        if self.extent is None:
            return frozenset(FaceCoord(*f) for f in region)
        return self.extent.wrap_region(region)

    def qubit_mask(self, region: Iterable) -> int:
        m = 0
        for f in self.wrap(region):
            qs = self._face_qubits.get(f)
            if qs is None:
                raise ValueError(f"face {tuple(f)} carries no qubits")
            for q in qs:
                m |= 1 << q
        return m

    def _generators_touching(self, mask: int) -> list:
        out = set()
        for j in gf2.bit_indices(mask):
            out.update(self._qubit_gens[j])
        return sorted(out)

    # -- entropies --

    def entropy_of_mask(self, mask: int) -> int:
        if mask == 0:
            return 0
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        n = self.n
        rows = []
        for i in self._generators_touching(mask):
            g = self.generators[i]
            rows.append((g.x & mask) | ((g.z & mask) << n))
        val = gf2.rank(rows) - popcount(mask)
        if len(self._cache) > 500_000:
            self._cache.clear()
        self._cache[mask] = val
        return val

    def entropy(self, region: Iterable) -> int:
        return self.entropy_of_mask(self.qubit_mask(region))

    # -- local groups --

    def local_group(self, mask: int) -> list[PauliString]:
        """Independent signed generators of ``{g in G : supp g ⊆ mask}``."""
        qs = gf2.bit_indices(mask)
        pos = {q: i for i, q in enumerate(qs)}
        na = len(qs)
        touching = self._generators_touching(mask)
        # Constraint rows in local coordinates, halves swapped so that the
        # plain dot product equals the symplectic form.
        rows = []
        for i in touching:
            g = self.generators[i]
            lx = lz = 0
            for q in gf2.bit_indices((g.x | g.z) & mask):
                if (g.x >> q) & 1:
                    lx |= 1 << pos[q]
                if (g.z >> q) & 1:
                    lz |= 1 << pos[q]
            rows.append(lz | (lx << na))
        basis = gf2.nullspace(rows, 2 * na)
        out = []
        for v in basis:
            lx, lz = v & ((1 << na) - 1), v >> na
            x = z = 0
            for j in gf2.bit_indices(lx):
                x |= 1 << qs[j]
            for j in gf2.bit_indices(lz):
                z |= 1 << qs[j]
            out.append(self.signed_element(x, z))
        return out

    def signed_element(self, x: int, z: int) -> PauliString:
        """The group element with bit vectors ``(x, z)`` (with its sign)."""
        target = x | (z << self.n)
        supp = x | z
        # Try generators near the support first; the neighbourhood grows until solved.
        region = supp
        for _ in range(4):
            idx = self._generators_touching(region)
            gens = [self.generators[i] for i in idx]
            combo = gf2.solve_combination([g.symplectic() for g in gens], target)
            if combo is not None:
                p = product(_select(gens, combo), self.n)
                return p
            for i in idx:
                region |= self.generators[i].support
        gens = self.generators
        combo = gf2.solve_combination([g.symplectic() for g in gens], target)
        if combo is None:
            raise ValueError("Pauli is not in the stabilizer group")
        return product(_select(gens, combo), self.n)

    def support_code(self, region: Iterable) -> StabilizerCode:
        region = self.wrap(region)
        mask = self.qubit_mask(region)
        return StabilizerCode(self.n, tuple(self.local_group(mask)), frozenset(region), mask)

    # -- dense bridge --

    def region_qubits(self, region: Iterable) -> list[int]:
        """Qubits of ``region`` ordered by face, then by index."""
        out = []
        for f in sorted(self.wrap(region)):
            out.extend(self._face_qubits[f])
        return out

    def densify(self, region: Iterable, by_face: bool = True) -> DensityOperator:
        region = sorted(self.wrap(region))
        qubits = self.region_qubits(region)
        if len(qubits) > DENSE_QUBIT_CAP:
            raise ValueError(f"densify limited to {DENSE_QUBIT_CAP} qubits, got {len(qubits)}")
        mask = _mask(qubits)
        d = 2 ** len(qubits)
        rho = np.eye(d, dtype=complex) / d
        for g in self.local_group(mask):
            perm, phase = g.signed_permutation(qubits)
            rho = rho + phase[:, None] * rho[perm]
        if by_face:
            labels = tuple(region)
            dims = tuple(2 ** len(self._face_qubits[f]) for f in region)
        else:
            labels = tuple(qubits)
            dims = (2,) * len(qubits)
        return DensityOperator(FactorSpace(labels, dims), rho)

    # -- serialisation --

    def to_text(self) -> str:
        lines = [f"n {self.n}"]
        lines += [g.to_text() for g in self.generators]
        lines += [f"map {j} {f.q} {f.r}" for j, f in enumerate(self.qubit_to_face)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, extent: Extent | None = None) -> "StabilizerState":
        n = None
        gens, mapping = [], {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("n "):
                n = int(line.split()[1])
            elif line.startswith("map "):
                _, j, q, r = line.split()
                mapping[int(j)] = FaceCoord(int(q), int(r))
            else:
                gens.append(PauliString.from_text(line))
        if n is None:
            raise ValueError("missing 'n <qubits>' header")
        if sorted(mapping) != list(range(n)):
            raise ValueError("every qubit needs one map line")
        for g in gens:
            if g.n != n:
                raise ValueError("generator length differs from n")
        state = cls(n, gens, [mapping[j] for j in range(n)], extent)
        state.validate()
        return state


# --- public functional API ---------------------------------------------------


def region_entropy(state: StabilizerState, region: Iterable) -> int:
    return state.entropy(region)


def region_cmi(state: StabilizerState, a: Iterable, b: Iterable, c: Iterable) -> int:
    ma, mb, mc = state.qubit_mask(a), state.qubit_mask(b), state.qubit_mask(c)
    if ma & mb or mb & mc or ma & mc:
        raise ValueError("regions must be disjoint")
    s = state.entropy_of_mask
    return s(ma | mb) + s(mb | mc) - s(mb) - s(ma | mb | mc)


def region_support_code(state: StabilizerState, region: Iterable) -> StabilizerCode:
    return state.support_code(region)


def densify(state: StabilizerState, region: Iterable, by_face: bool = True) -> DensityOperator:
    return state.densify(region, by_face)


def code_projector(code: StabilizerCode, qubits: Sequence[int], labels=None, dims=None) -> Projector:
    mat = code.dense_projector(qubits)
    if labels is None:
        labels, dims = tuple(qubits), (2,) * len(qubits)
    return Projector(FactorSpace(tuple(labels), tuple(dims)), mat, rank=2 ** code.projector_rank_log2())


# --- builders ----------------------------------------------------------------


def toric_h(q: int, r: int, cols: int) -> int:
    """Qubit on the edge from vertex ``(q, r)`` to ``(q+1, r)``."""
    return 2 * (r * cols + q)


def toric_v(q: int, r: int, cols: int) -> int:
    """Qubit on the edge from vertex ``(q, r)`` to ``(q, r+1)``."""
    return 2 * (r * cols + q) + 1


def make_toric_code(rows: int, cols: int) -> StabilizerState:
    """Toric code on a ``rows x cols`` torus, coarse-grained onto hex faces.

    Square-lattice vertex ``(q, r)`` is identified with hex face ``(q, r)``,
    which owns the two edges leaving it in the ``+q`` and ``+r`` directions.
    Both logical ``Z`` loops are fixed to ``+1`` so the state is pure.
    """
    if rows < 2 or cols < 2:
        raise ValueError("toric code needs at least a 2x2 torus")
    n = 2 * rows * cols
    h = lambda q, r: toric_h(q % cols, r % rows, cols)  # noqa: E731
    v = lambda q, r: toric_v(q % cols, r % rows, cols)  # noqa: E731
    gens = []
    for r in range(rows):
        for q in range(cols):
            if (q, r) != (cols - 1, rows - 1):
                gens.append(PauliString.from_support(n, [h(q, r), v(q, r), h(q - 1, r), v(q, r - 1)], "X"))
    for r in range(rows):
        for q in range(cols):
            if (q, r) != (cols - 1, rows - 1):
                gens.append(PauliString.from_support(n, [h(q, r), v(q + 1, r), h(q, r + 1), v(q, r)], "Z"))
    gens.append(PauliString.from_support(n, [h(q, 0) for q in range(cols)], "Z"))
    gens.append(PauliString.from_support(n, [v(0, r) for r in range(rows)], "Z"))
    faces = []
    for j in range(n):
        cell = j // 2
        faces.append(FaceCoord(cell % cols, cell // cols))
    return StabilizerState(
        n, gens, faces, Extent(rows, cols, True), {"kind": "toric", "rows": rows, "cols": cols}
    )


def make_wall_state(rows: int, cols: int, wall_row: int) -> StabilizerState:
    """Toric code on rows ``wall_row..rows-1`` next to a product region.

    The lattice is a torus; rows ``0..wall_row-1`` hold qubits in ``|0>``.
    The toric strip has smooth boundaries on both sides, so there are two
    walls: between rows ``wall_row-1`` and ``wall_row``, and between
    ``rows-1`` and ``0``. The top row's vertical edges belong to the
    product region.
    """
    if not 1 <= wall_row <= rows - 3:
        raise ValueError("wall_row must leave at least three toric rows")
    n = 2 * rows * cols
    h = lambda q, r: toric_h(q % cols, r, cols)  # noqa: E731
    v = lambda q, r: toric_v(q % cols, r, cols)  # noqa: E731
    top = rows - 1
    toric = set()
    for r in range(wall_row, rows):
        for q in range(cols):
            toric.add(h(q, r))
            if r < top:
                toric.add(v(q, r))
    gens = []
    for j in range(n):
        if j not in toric:
            gens.append(PauliString.single(n, j, "Z"))
    # Stars at every toric vertex, restricted to toric edges; one is dependent.
    stars = []
    for r in range(wall_row, rows):
        for q in range(cols):
            edges = [h(q, r), h(q - 1, r)]
            if r < top:
                edges.append(v(q, r))
            if r > wall_row:
                edges.append(v(q, r - 1))
            stars.append(PauliString.from_support(n, edges, "X"))
    gens.extend(stars[:-1])
    for r in range(wall_row, top):
        for q in range(cols):
            gens.append(PauliString.from_support(n, [h(q, r), v(q + 1, r), h(q, r + 1), v(q, r)], "Z"))
    gens.append(PauliString.from_support(n, [h(q, wall_row) for q in range(cols)], "Z"))
    faces = [FaceCoord((j // 2) % cols, (j // 2) // cols) for j in range(n)]
    return StabilizerState(
        n,
        gens,
        faces,
        Extent(rows, cols, True),
        {"kind": "wall", "rows": rows, "cols": cols, "wall_row": wall_row},
    )


def make_product_state(faces: Iterable, extent: Extent | None = None) -> StabilizerState:
    faces = sorted(FaceCoord(*f) for f in faces)
    n = len(faces)
    gens = [PauliString.single(n, j, "Z") for j in range(n)]
    return StabilizerState(n, gens, faces, extent, {"kind": "product"})


def make_ghz_state(faces: Iterable, extent: Extent | None = None) -> StabilizerState:
    faces = sorted(FaceCoord(*f) for f in faces)
    n = len(faces)
    if n < 2:
        raise ValueError("GHZ needs at least two faces")
    gens = [PauliString.from_support(n, range(n), "X")]
    gens += [PauliString.from_support(n, [j, j + 1], "Z") for j in range(n - 1)]
    return StabilizerState(n, gens, faces, extent, {"kind": "ghz"})


def make_cluster_state(faces: Iterable, extent: Extent | None = None) -> StabilizerState:
    """Graph state on the face adjacency graph: ``X_f Π_{g ~ f} Z_g``."""
    faces = sorted(FaceCoord(*f) for f in faces)
    n = len(faces)
    if extent is not None:
        faces = sorted(extent.wrap(f) for f in faces)
    index = {f: j for j, f in enumerate(faces)}
    gens = []
    for j, f in enumerate(faces):
        nb = []
        for g in ring(f):
            g = extent.wrap(g) if extent is not None and extent.contains(g) else g
            if g in index:
                nb.append(index[g])
        z = _mask(nb)
        gens.append(PauliString(n, 1 << j, z))
    return StabilizerState(n, gens, faces, extent, {"kind": "cluster"})


def apply_pauli(state: StabilizerState, p: PauliString) -> StabilizerState:
    """The state ``p σ p†``: generators anticommuting with ``p`` flip sign."""
    gens = [(-g if not g.commutes(p) else g) for g in state.generators]
    return StabilizerState(state.n, gens, list(state.qubit_to_face), state.extent, dict(state.model))


def anyon_string(state: StabilizerState, kind: str, path: Sequence) -> PauliString:
    """Pauli string creating an anyon pair at the ends of ``path``.

    ``e`` paths run over vertices (faces) joined by edges, with ``Z`` on each
    edge. ``m`` paths run over plaquettes, labelled by their lower-left
    vertex, with ``X`` on each crossed edge. Steps must be ``(±1, 0)`` or
    ``(0, ±1)`` in face coordinates.
    """
    info = state.model
    if info.get("kind") not in ("toric", "wall"):
        raise ValueError("anyon insertion needs a toric-code state")
    rows, cols = info["rows"], info["cols"]
    if kind not in ("e", "m"):
        raise ValueError("anyon kind must be 'e' or 'm'")
    mask = 0
    pts = [FaceCoord(*f) for f in path]
    for a, b in zip(pts, pts[1:]):
        dq, dr = b.q - a.q, b.r - a.r
        if kind == "e":
            if (dq, dr) == (1, 0):
                j = toric_h(a.q % cols, a.r % rows, cols)
            elif (dq, dr) == (-1, 0):
                j = toric_h(b.q % cols, b.r % rows, cols)
            elif (dq, dr) == (0, 1):
                j = toric_v(a.q % cols, a.r % rows, cols)
            elif (dq, dr) == (0, -1):
                j = toric_v(b.q % cols, b.r % rows, cols)
            else:
                raise ValueError(f"path step {(dq, dr)} is not a lattice edge")
        else:
            if (dq, dr) == (1, 0):
                j = toric_v((a.q + 1) % cols, a.r % rows, cols)
            elif (dq, dr) == (-1, 0):
                j = toric_v(a.q % cols, a.r % rows, cols)
            elif (dq, dr) == (0, 1):
                j = toric_h(a.q % cols, (a.r + 1) % rows, cols)
            elif (dq, dr) == (0, -1):
                j = toric_h(a.q % cols, a.r % rows, cols)
            else:
                raise ValueError(f"path step {(dq, dr)} is not a dual-lattice edge")
        mask ^= 1 << j
    letter = "Z" if kind == "e" else "X"
    return PauliString(state.n, mask if letter == "X" else 0, mask if letter == "Z" else 0)


def insert_anyon_pair(state: StabilizerState, kind: str, path: Sequence) -> StabilizerState:
    if len(path) < 2:
        return state
    return apply_pauli(state, anyon_string(state, kind, path))
