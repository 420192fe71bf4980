"""Dense Hermitian operators over labelled tensor factors.

Matrices use the Kronecker convention: the first label of a
:class:`FactorSpace` is the most significant tensor index. Entropies are in
bits; modular Hamiltonians use the natural logarithm.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

DENSE_CAP = 2**20
EIGEN_CAP = 2**13
TAU_RANK = 1e-10
EPS_CMI = 1e-8

MAGIC = b"BPMAT1\n"


class CapExceeded(ValueError):
    """Raised when a dense dimension exceeds the configured cap."""


@dataclass(frozen=True)
class FactorSpace:
    labels: tuple
    dims: tuple
    cap: int = DENSE_CAP

    def __post_init__(self):
        labels = tuple(self.labels)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dims", dims)
        if len(labels) != len(dims):
            raise ValueError("labels and dims differ in length")
        if len(set(labels)) != len(labels):
            raise ValueError("factor labels must be unique")
        if any(d < 1 for d in dims):
            raise ValueError("factor dimensions must be >= 1")
        if self.dim > self.cap:
            raise CapExceeded(f"dimension {self.dim} exceeds cap {self.cap}")

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def dim_of(self, labels: Iterable[Hashable]) -> int:
        index = self.index
        return math.prod(self.dims[index[l]] for l in labels)

    @property
    def index(self) -> dict:
        return {l: i for i, l in enumerate(self.labels)}

    def subspace(self, keep: Iterable[Hashable]) -> "FactorSpace":
        keep = set(keep)
        missing = keep - set(self.labels)
        if missing:
            raise ValueError(f"labels not in space: {sorted(map(str, missing))}")
        pairs = [(l, d) for l, d in zip(self.labels, self.dims) if l in keep]
        return FactorSpace(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs), self.cap)


@dataclass(frozen=True)
class DensityOperator:
    space: FactorSpace
    matrix: np.ndarray
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        d = self.space.dim
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match dimension {d}")
        if self.validate:
            scale = max(1.0, float(np.abs(m).max(initial=0.0)))
            if np.abs(m - m.conj().T).max(initial=0.0) > 1e-9 * scale:
                raise ValueError("density operator is not Hermitian")

    @property
    def labels(self) -> tuple:
        return self.space.labels

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))


@dataclass(frozen=True)
class Projector:
    space: FactorSpace
    matrix: np.ndarray
    rank: int | None = None
    ill_conditioned: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValueError("projector shape does not match its space")
        if self.rank is None:
            object.__setattr__(self, "rank", int(round(float(np.real(np.trace(m))))))

    def idempotency_error(self) -> float:
        return op_norm(self.matrix @ self.matrix - self.matrix)


# --- helpers -------------------------------------------------------------------


def op_norm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of ``a - b`` for Hermitian inputs."""
    diff = np.asarray(a) - np.asarray(b)
    diff = (diff + diff.conj().T) / 2
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())


def _check_eigen_cap(dim: int):
    if dim > EIGEN_CAP:
        raise CapExceeded(f"eigendecomposition dimension {dim} exceeds cap {EIGEN_CAP}")


def _eigh(m: np.ndarray):
    _check_eigen_cap(m.shape[0])
    h = (m + m.conj().T) / 2
    return np.linalg.eigh(h)


def product_state(*ops: DensityOperator) -> DensityOperator:
    labels, dims = [], []
    mat = np.ones((1, 1), dtype=complex)
    for op in ops:
        labels.extend(op.space.labels)
        dims.extend(op.space.dims)
        mat = np.kron(mat, op.matrix)
    return DensityOperator(FactorSpace(tuple(labels), tuple(dims)), mat)


def pure_state(space: FactorSpace, vector: np.ndarray) -> DensityOperator:
    v = np.asarray(vector, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return DensityOperator(space, np.outer(v, v.conj()))


def maximally_mixed(space: FactorSpace) -> DensityOperator:
    return DensityOperator(space, np.eye(space.dim, dtype=complex) / space.dim)


def _permute(matrix: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a square matrix: new factor ``i`` is old ``perm[i]``."""
    k = len(dims)
    t = matrix.reshape(tuple(dims) * 2)
    axes = list(perm) + [k + p for p in perm]
    d = matrix.shape[0]
    return t.transpose(axes).reshape(d, d)


# --- operations ----------------------------------------------------------------


def embed(op, target: FactorSpace):
    """Tensor ``op`` with identities on the missing factors of ``target``."""
    src = op.space
    tindex = target.index
    for l, d in zip(src.labels, src.dims):
        if l not in tindex:
            raise ValueError(f"label {l!r} missing from target space")
        if target.dims[tindex[l]] != d:
            raise ValueError(f"dimension mismatch on label {l!r}")
    extra = [l for l in target.labels if l not in set(src.labels)]
    extra_dim = target.dim_of(extra)
    mat = np.kron(op.matrix, np.eye(extra_dim, dtype=complex))
    order = list(src.labels) + extra
    dims = [target.dims[tindex[l]] for l in order]
    pos = {l: i for i, l in enumerate(order)}
    perm = [pos[l] for l in target.labels]
    mat = _permute(mat, dims, perm)
    if isinstance(op, Projector):
        return Projector(target, mat, rank=op.rank * extra_dim, ill_conditioned=op.ill_conditioned)
    return DensityOperator(target, mat, validate=False)


def reorder(state: DensityOperator, labels: Sequence[Hashable]) -> DensityOperator:
    """The same operator with factors listed in ``labels`` order."""
    idx = state.space.index
    if sorted(map(repr, labels)) != sorted(map(repr, state.space.labels)):
        raise ValueError("reorder needs a permutation of the labels")
    perm = [idx[l] for l in labels]
    dims = [state.space.dims[i] for i in perm]
    mat = _permute(state.matrix, state.space.dims, perm)
    return DensityOperator(FactorSpace(tuple(labels), tuple(dims), state.space.cap), mat, validate=False)


def partial_trace(state: DensityOperator, keep: Iterable[Hashable]) -> DensityOperator:
    keep = set(keep)
    space = state.space
    unknown = keep - set(space.labels)
    if unknown:
        raise ValueError(f"labels not in state: {sorted(map(str, unknown))}")
    k = len(space.labels)
    kept = [i for i, l in enumerate(space.labels) if l in keep]
    traced = [i for i in range(k) if i not in kept]
    if not traced:
        return state
    t = state.matrix.reshape(space.dims * 2)
    # einsum with explicit subscripts; k <= 20 factors so two letters per factor fit
    letters = [chr(ord("a") + i) for i in range(2 * k)] if 2 * k <= 26 else None
    if letters is None:
        perm = kept + traced
        dk = math.prod(space.dims[i] for i in kept)
        dt = math.prod(space.dims[i] for i in traced)
        m = _permute(state.matrix, space.dims, perm).reshape(dk, dt, dk, dt)
        out = np.einsum("ajbj->ab", m)
    else:
        row = letters[:k]
        col = [letters[k + i] if i in kept else letters[i] for i in range(k)]
        res = [row[i] for i in kept] + [col[i] for i in kept]
        out = np.einsum("".join(row + col) + "->" + "".join(res), t)
        d = math.prod(space.dims[i] for i in kept)
        out = out.reshape(d, d)
    return DensityOperator(space.subspace(keep), out, validate=False)


def eigenvalues(state: DensityOperator) -> np.ndarray:
    _check_eigen_cap(state.space.dim)
    h = (state.matrix + state.matrix.conj().T) / 2
    return np.linalg.eigvalsh(h)


def entropy_of_spectrum(evals: np.ndarray, tau: float = TAU_RANK) -> float:
    lam = np.asarray(evals, dtype=float)
    lam = lam[lam > tau]
    return float(-(lam * np.log2(lam)).sum()) + 0.0


def entropy(state: DensityOperator, tau: float = TAU_RANK) -> float:
    """Von Neumann entropy in bits."""
    evals = eigenvalues(state)
    scale = max(1.0, float(np.abs(evals).max(initial=0.0)))
    if evals.min(initial=0.0) < -1e-8 * scale:
        raise ValueError(f"state is not positive semidefinite (min eigenvalue {evals.min():.3g})")
    return entropy_of_spectrum(evals, tau)


def marginal_entropy(state: DensityOperator, labels: Iterable[Hashable], tau: float = TAU_RANK) -> float:
    labels = set(labels)
    if not labels:
        return 0.0
    return entropy(partial_trace(state, labels), tau)


def _disjoint(*groups):
    seen = set()
    for g in groups:
        g = set(g)
        if seen & g:
            raise ValueError("subsystems must be disjoint")
        seen |= g


def cmi(state: DensityOperator, a, b, c, tau: float = TAU_RANK) -> float:
    """``I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC)`` in bits."""
    a, b, c = set(a), set(b), set(c)
    _disjoint(a, b, c)
    s = lambda x: marginal_entropy(state, x, tau)  # noqa: E731
    return s(a | b) + s(b | c) - s(b) - s(a | b | c)


def weak_monotonicity_slack(state: DensityOperator, a, b, c, tau: float = TAU_RANK) -> float:
    """``S(A|B) + S(A|C)`` in bits."""
    a, b, c = set(a), set(b), set(c)
    _disjoint(a, b, c)
    s = lambda x: marginal_entropy(state, x, tau)  # noqa: E731
    return s(a | b) - s(b) + s(a | c) - s(c)


def support_projector(state: DensityOperator, tau: float = TAU_RANK) -> Projector:
    """Projector onto eigenvectors with eigenvalue above ``tau * λ_max``.

    ``ill_conditioned`` is set when the spectral gap around the cutoff is
    below ``10 * tau * λ_max``.
    """
    evals, vecs = _eigh(state.matrix)
    lmax = float(evals.max(initial=0.0))
    cut = tau * lmax
    keep = evals > cut
    v = vecs[:, keep]
    above = evals[keep]
    below = evals[~keep]
    gap = (above.min(initial=np.inf) - max(below.max(initial=0.0), 0.0)) if above.size else np.inf
    ill = bool(below.size and above.size and gap < 10 * cut) or bool(
        np.any((np.abs(evals) > cut / 10) & (np.abs(evals) < 10 * cut))
    )
    return Projector(state.space, v @ v.conj().T, rank=int(keep.sum()), ill_conditioned=ill)


def commutator_norm(p, q) -> float:
    if p.space.labels != q.space.labels or p.space.dims != q.space.dims:
        raise ValueError("operators act on different spaces; embed first")
    return op_norm(p.matrix @ q.matrix - q.matrix @ p.matrix)


def _modular_hamiltonian(rho: np.ndarray, tau: float) -> np.ndarray:
    evals, vecs = _eigh(rho)
    lmax = float(evals.max(initial=0.0))
    keep = evals > tau * lmax
    v = vecs[:, keep]
    return (v * -np.log(evals[keep])) @ v.conj().T


def modular_commutator(state: DensityOperator, a, b, c, tau: float = TAU_RANK) -> float:
    """``J(A,B,C) = i Tr(ρ_ABC [K_AB, K_BC])`` with natural-log modular Hamiltonians.

    Modular Hamiltonians are taken on the support of each marginal.
    """
    a, b, c = set(a), set(b), set(c)
    _disjoint(a, b, c)
    labels = state.space.labels
    la, lb, lc = ([l for l in labels if l in g] for g in (a, b, c))
    rho = reorder(partial_trace(state, a | b | c), la + lb + lc)
    da, db, dc = (int(np.prod([rho.space.dims[rho.space.index[l]] for l in g])) for g in (la, lb, lc))
    kab = _modular_hamiltonian(reorder(partial_trace(rho, a | b), la + lb).matrix, tau)
    kbc = _modular_hamiltonian(reorder(partial_trace(rho, b | c), lb + lc).matrix, tau)
    # t = Tr(ρ K_AB K_BC) by contraction; J = i (t - t*) = -2 Im t
    r = rho.matrix.reshape(da, db, dc, da, db, dc)
    x = kab.reshape(da, db, da, db)
    y = kbc.reshape(db, dc, db, dc)
    t = np.einsum("abcABC,ABae,eCbc->", r, x, y, optimize=True)
    return float(-2.0 * t.imag) + 0.0


# --- binary format -------------------------------------------------------------


def _label_to_json(l):
    if isinstance(l, tuple):
        return list(l)
    return l


def _label_from_json(l):
    if isinstance(l, list):
        return tuple(_label_from_json(x) for x in l)
    return l


def write_matrix(path, op, kind: str | None = None) -> None:
    """Write ``op`` as magic, ``uint32`` header length, JSON header, complex128 data.

    Data is little-endian and row-major.
    """
    if kind is None:
        kind = "projector" if isinstance(op, Projector) else "density"
    header = json.dumps(
        {"labels": [_label_to_json(l) for l in op.space.labels], "dims": list(op.space.dims), "kind": kind},
        sort_keys=True,
    ).encode()
    data = np.ascontiguousarray(op.matrix, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(data)


def read_matrix(path):
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ValueError("not a matrix file")
        (n,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(n))
        data = fh.read()
    space = FactorSpace(tuple(_label_from_json(l) for l in header["labels"]), tuple(header["dims"]))
    mat = np.frombuffer(data, dtype="<c16").reshape(space.dim, space.dim).copy()
    if header["kind"] == "projector":
        return Projector(space, mat)
    return DensityOperator(space, mat, validate=False)
