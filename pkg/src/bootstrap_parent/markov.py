"""Quantum Markov chains: block structure of ``B`` and the projector lemmas.

A state with ``I(A:C|B) = 0`` splits ``H_B`` into orthogonal blocks
``b_j^L ⊗ b_j^R`` with ``ρ_ABC = ⊕_j q_j ρ_{A b_j^L} ⊗ ρ_{b_j^R C}``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .tensor import (
    EPS_CMI,
    TAU_RANK,
    DensityOperator,
    FactorSpace,
    cmi,
    commutator_norm,
    embed,
    marginal_entropy,
    op_norm,
    partial_trace,
    read_matrix,
    reorder,
    support_projector,
    trace_distance,
    write_matrix,
)


class NotMarkov(ValueError):
    """The input's conditional mutual information exceeds the tolerance."""


class DecompositionError(RuntimeError):
    """The algebra refinement did not settle on a consistent block structure."""


# --- grouped views -------------------------------------------------------------


def _group(state: DensityOperator, a, b, c) -> tuple[DensityOperator, tuple[int, int, int]]:
    """Fuse label groups into three factors ``A``, ``B``, ``C``."""
    a, b, c = (tuple(x) for x in (a, b, c))
    keep = a + b + c
    rho = partial_trace(state, keep) if set(keep) != set(state.labels) else state
    rho = reorder(rho, keep)
    sp = rho.space
    dims = (sp.dim_of(a), sp.dim_of(b), sp.dim_of(c))
    return DensityOperator(FactorSpace(("A", "B", "C"), dims), rho.matrix, validate=False), dims


def _abc(state, groups):
    if groups is None:
        if set(state.labels) == {"A", "B", "C"}:
            return reorder(state, ("A", "B", "C")), tuple(
                state.space.dims[state.space.index[l]] for l in "ABC"
            )
        raise ValueError("label groups are required unless the labels are A, B, C")
    return _group(state, *groups)


def _ptrace(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    k = len(dims)
    t = m.reshape(tuple(dims) * 2)
    row = list(range(k))
    col = [k + i if i in keep else i for i in range(k)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return np.einsum(t, row + col, out).reshape(d, d)


# --- generator -----------------------------------------------------------------


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@dataclass
class MarkovSpec:
    """Blocks ``(dim b^L, dim b^R)`` with weights; ``pad`` adds unused ``B`` dimensions."""

    dim_a: int
    dim_c: int
    blocks: list
    weights: list | None = None
    seed: int = 0
    pad: int = 0
    scramble: bool = True

    @property
    def dim_b(self) -> int:
        return sum(l * r for l, r in self.blocks) + self.pad


@dataclass
class MarkovBlock:
    weight: float
    isometry: np.ndarray  # H_{b^L} ⊗ H_{b^R} -> H_B
    left: np.ndarray  # ρ_{A b^L}
    right: np.ndarray  # ρ_{b^R C}
    dims: tuple  # (dim b^L, dim b^R)


@dataclass
class MarkovDecomposition:
    dims: tuple  # (dim A, dim B, dim C)
    blocks: list = field(default_factory=list)

    @property
    def weights(self) -> list[float]:
        return [b.weight for b in self.blocks]

    def block_dims(self) -> list[tuple]:
        return [b.dims for b in self.blocks]

    def reconstruct(self) -> np.ndarray:
        da, db, dc = self.dims
        out = np.zeros((da * db * dc,) * 2, dtype=complex)
        for blk in self.blocks:
            inner = blk.weight * np.kron(blk.left, blk.right)
            v = np.kron(np.kron(np.eye(da), blk.isometry), np.eye(dc))
            out += v @ inner @ v.conj().T
        return out

    def state(self) -> DensityOperator:
        return DensityOperator(FactorSpace(("A", "B", "C"), self.dims), self.reconstruct(), validate=False)

    def without(self, j: int) -> "MarkovDecomposition":
        return MarkovDecomposition(self.dims, [b for i, b in enumerate(self.blocks) if i != j])

    def invariant_errors(self) -> dict:
        w = sum(self.weights)
        worst = 0.0
        for i, x in enumerate(self.blocks):
            for y in self.blocks[i + 1:]:
                worst = max(worst, op_norm(x.isometry.conj().T @ y.isometry))
        iso = max(
            (op_norm(b.isometry.conj().T @ b.isometry - np.eye(b.isometry.shape[1])) for b in self.blocks),
            default=0.0,
        )
        return {"weight_sum": abs(w - 1.0), "block_overlap": worst, "isometry": iso}

    # -- serialization: JSON index plus one binary matrix per array --

    def save(self, directory) -> None:
        os.makedirs(directory, exist_ok=True)
        meta = {"dims": list(self.dims), "blocks": []}
        for j, b in enumerate(self.blocks):
            names = {}
            for key, mat in (("isometry", b.isometry), ("left", b.left), ("right", b.right)):
                name = f"block{j}_{key}.bin"
                rows, cols = mat.shape
                sq = np.zeros((max(rows, cols),) * 2, dtype=complex)
                sq[:rows, :cols] = mat
                write_matrix(
                    os.path.join(directory, name),
                    DensityOperator(FactorSpace((key,), (sq.shape[0],)), sq, validate=False),
                    kind=key,
                )
                names[key] = {"file": name, "shape": [rows, cols]}
            meta["blocks"].append({"weight": b.weight, "dims": list(b.dims), **names})
        with open(os.path.join(directory, "decomposition.json"), "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)

    @classmethod
    def load(cls, directory) -> "MarkovDecomposition":
        with open(os.path.join(directory, "decomposition.json")) as fh:
            meta = json.load(fh)
        blocks = []
        for b in meta["blocks"]:
            mats = {}
            for key in ("isometry", "left", "right"):
                rows, cols = b[key]["shape"]
                mats[key] = read_matrix(os.path.join(directory, b[key]["file"])).matrix[:rows, :cols]
            blocks.append(MarkovBlock(b["weight"], mats["isometry"], mats["left"], mats["right"], tuple(b["dims"])))
        return cls(tuple(meta["dims"]), blocks)


def markov_truth(spec: MarkovSpec) -> MarkovDecomposition:
    """The decomposition the generator uses for ``spec``."""
    rng = np.random.default_rng(spec.seed)
    k = len(spec.blocks)
    if spec.weights is None:
        w = rng.uniform(0.2, 1.0, size=k)
    else:
        w = np.asarray(spec.weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("block weights must be positive")
    w = w / w.sum()
    db = spec.dim_b
    u = random_unitary(db, rng) if spec.scramble else np.eye(db, dtype=complex)
    blocks = []
    start = 0
    for (dl, dr), q in zip(spec.blocks, w):
        cols = u[:, start:start + dl * dr]
        start += dl * dr
        left = random_density(spec.dim_a * dl, rng)
        right = random_density(dr * spec.dim_c, rng)
        blocks.append(MarkovBlock(float(q), cols, left, right, (dl, dr)))
    return MarkovDecomposition((spec.dim_a, db, spec.dim_c), blocks)


def make_markov_state(spec: MarkovSpec) -> DensityOperator:
    """Random state ``⊕_j q_j ρ_{A b_j^L} ⊗ ρ_{b_j^R C}`` with factors ``A, B, C``."""
    return markov_truth(spec).state()


# --- algebra tools -------------------------------------------------------------


def _orth_basis(mats: list[np.ndarray], tol: float) -> list[np.ndarray]:
    if not mats:
        return []
    d = mats[0].shape[0]
    v = np.stack([m.reshape(-1) for m in mats], axis=1)
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    r = int((s > tol * max(1.0, s[0])).sum())
    return [u[:, i].reshape(d, d) for i in range(r)]


def generate_algebra(gens: list[np.ndarray], tol: float = 1e-9, max_rounds: int = 64) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of the unital *-algebra generated by ``gens``."""
    d = gens[0].shape[0] if gens else 1
    letters = list(gens) + [g.conj().T for g in gens]
    basis = _orth_basis([np.eye(d, dtype=complex)] + letters, tol)
    for _ in range(max_rounds):
        # words grow by one letter per round
        new = _orth_basis(basis + [x @ g for x in basis for g in letters], tol)
        if len(new) == len(basis):
            return basis
        basis = new
    raise DecompositionError("algebra generation did not close")


def algebra_center(basis: list[np.ndarray], tol: float = 1e-9) -> list[np.ndarray]:
    """Basis of ``{z in span(basis) : [z, a] = 0 for all a}``."""
    if not basis:
        return []
    cols = []
    for b in basis:
        cols.append(np.concatenate([(b @ a - a @ b).reshape(-1) for a in basis]))
    m = np.stack(cols, axis=1)
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    rank = int((s > tol * max(1.0, s[0] if s.size else 1.0)).sum())
    null = vh[rank:].conj()
    return [sum(c * b for c, b in zip(vec, basis)) for vec in null]


def _clusters(values: np.ndarray, gap: float) -> list[np.ndarray]:
    order = np.argsort(values)
    groups = [[order[0]]]
    for i, j in zip(order[:-1], order[1:]):
        if values[j] - values[i] > gap:
            groups.append([j])
        else:
            groups[-1].append(j)
    return [np.array(g) for g in groups]


def _random_hermitian(basis: list[np.ndarray], rng) -> np.ndarray:
    coef = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    x = sum(c * b for c, b in zip(coef, basis))
    return (x + x.conj().T) / 2


def _central_blocks(center: list[np.ndarray], rng, gap: float) -> list[np.ndarray]:
    h = _random_hermitian(center, rng)
    evals, vecs = np.linalg.eigh(h)
    return [vecs[:, g] for g in _clusters(evals, gap)]


def _split_blocks(center, rng, gap, attempts=5):
    for _ in range(attempts):
        first = _central_blocks(center, rng, gap)
        second = _central_blocks(center, rng, gap)
        if len(first) == len(second) and all(
            min(op_norm(x @ x.conj().T - y @ y.conj().T) for y in second) < 1e-6 for x in first
        ):
            return first
    raise DecompositionError("random central elements disagree on the block structure")


def _factor_block(basis: list[np.ndarray], w: np.ndarray, rng, gap: float, attempts: int = 5):
    """Write the algebra restricted to ``range(w)`` as ``L(C^e) ⊗ 1_f``.

    Returns the isometry ``C^e ⊗ C^f -> H`` and ``(e, f)``.
    """
    local = _orth_basis([w.conj().T @ a @ w for a in basis], 1e-9)
    n = w.shape[1]
    for _ in range(attempts):
        h = _random_hermitian(local, rng)
        evals, vecs = np.linalg.eigh(h)
        groups = _clusters(evals, gap)
        e = len(groups)
        sizes = {len(g) for g in groups}
        if len(sizes) != 1 or e * e != len(local):
            continue
        f = n // e
        projs = [vecs[:, g] for g in groups]
        x = sum((rng.normal() + 1j * rng.normal()) * a for a in local)
        u1 = projs[0]
        cols = []
        ok = True
        for k, pk in enumerate(projs):
            if k == 0:
                wk = u1
            else:
                # matrix unit from sector 1 to sector k
                m = pk @ (pk.conj().T @ x @ u1)
                norm = np.sqrt(op_norm(m.conj().T @ m))
                if norm < 1e-6:
                    ok = False
                    break
                wk = m / norm
            cols.append(wk)
        if not ok:
            continue
        v = np.concatenate(cols, axis=1)
        if op_norm(v.conj().T @ v - np.eye(n)) > 1e-6:
            continue
        return w @ v, (e, f)
    raise DecompositionError("block is not a full matrix algebra tensor identity")


# --- decomposition -------------------------------------------------------------


def markov_decompose(
    state: DensityOperator,
    tol: float = EPS_CMI,
    groups: tuple | None = None,
    seed: int = 0,
    tau: float = TAU_RANK,
) -> MarkovDecomposition:
    """Block decomposition of ``B`` for a Markov chain ``A - B - C``.

    The algebra generated by ``ρ_B^{-1/2} Tr_A[(X_A ⊗ 1) ρ_AB] ρ_B^{-1/2}``
    on ``supp ρ_B`` sits inside ``⊕_j L(b_j^L) ⊗ 1``; the ``C`` side gives
    the commuting partner inside ``⊕_j 1 ⊗ L(b_j^R)``. The centre of their
    join fixes the blocks and a matrix-unit system of the left algebra
    inside each block fixes the tensor split.
    """
    rho, (da, db, dc) = _abc(state, groups)
    value = cmi(rho, {"A"}, {"B"}, {"C"}, tau)
    if value > tol:
        raise NotMarkov(f"not Markov: I(A:C|B) = {value:.3g} bits exceeds {tol:g}")
    rng = np.random.default_rng(seed)
    m = rho.matrix
    rab = _ptrace(m, (da, db, dc), [0, 1])
    rbc = _ptrace(m, (da, db, dc), [1, 2])
    rb = _ptrace(m, (da, db, dc), [1])
    evals, vecs = np.linalg.eigh(rb)
    keep = evals > tau * evals.max()
    s = vecs[:, keep]
    inv = s @ np.diag(evals[keep] ** -0.5) @ s.conj().T
    tab = rab.reshape(da, db, da, db)
    tbc = rbc.reshape(db, dc, db, dc)
    left_gens, right_gens = [], []
    for i in range(da):
        for k in range(da):
            # Tr_A[(|i><k| ⊗ 1) ρ_AB]
            left_gens.append(s.conj().T @ inv @ tab[k, :, i, :] @ inv @ s)
    for i in range(dc):
        for k in range(dc):
            right_gens.append(s.conj().T @ inv @ tbc[:, k, :, i] @ inv @ s)
    left = generate_algebra(_orth_basis(left_gens, 1e-9))
    right = generate_algebra(_orth_basis(right_gens, 1e-9))
    # the two algebras commute; the centre of their join refines both centres
    joint = _orth_basis([x @ y for x in left for y in right], 1e-9)
    center = algebra_center(joint)
    gap = 1e-6
    sectors = _split_blocks(center, rng, gap) if len(center) > 1 else [np.eye(s.shape[1], dtype=complex)]
    basis = left
    blocks = []
    for w in sectors:
        iso, (e, f) = _factor_block(basis, w, rng, gap)
        iso = s @ iso
        v = np.kron(np.kron(np.eye(da), iso), np.eye(dc))
        rj = v.conj().T @ m @ v
        q = float(np.trace(rj).real)
        if q <= 0:
            continue
        rj = rj / q
        dims = (da, e, f, dc)
        left = _ptrace(rj, dims, [0, 1])
        right = _ptrace(rj, dims, [2, 3])
        blocks.append(MarkovBlock(q, iso, left, right, (e, f)))
    dec = MarkovDecomposition((da, db, dc), blocks)
    err = trace_distance(dec.reconstruct(), m)
    if err > max(10 * tol, 1e-8):
        raise DecompositionError(f"reconstruction error {err:.3g} exceeds tolerance")
    return dec


# --- projector identities ------------------------------------------------------


def _proj(m: np.ndarray, tau: float = TAU_RANK) -> np.ndarray:
    evals, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    keep = evals > tau * max(evals.max(), 0.0)
    v = vecs[:, keep]
    return v @ v.conj().T


@dataclass
class ProjectorReport:
    name: str
    values: dict
    passed: bool
    applicable: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "values": self.values, "pass": self.passed, "applicable": self.applicable}


def verify_projector_factorization(dec: MarkovDecomposition, state: DensityOperator, groups=None, tol: float = 1e-8):
    """Compare ``P_AB`` and ``P_BC`` against the block sums built from ``dec``."""
    rho, (da, db, dc) = _abc(state, groups)
    m = rho.matrix
    pab = _proj(_ptrace(m, (da, db, dc), [0, 1]))
    pbc = _proj(_ptrace(m, (da, db, dc), [1, 2]))
    sab = np.zeros_like(pab)
    sbc = np.zeros_like(pbc)
    for b in dec.blocks:
        e, f = b.dims
        pl = _proj(b.left)
        pr = _proj(_ptrace(b.right, (f, dc), [0]))
        pbl = _proj(_ptrace(b.left, (da, e), [1]))
        prc = _proj(b.right)
        va = np.kron(np.eye(da), b.isometry)
        vc = np.kron(b.isometry, np.eye(dc))
        sab += va @ np.kron(pl, pr) @ va.conj().T
        sbc += vc @ np.kron(pbl, prc) @ vc.conj().T
    dev_ab = op_norm(pab - sab)
    dev_bc = op_norm(pbc - sbc)
    return ProjectorReport("projector-factorization", {"AB": dev_ab, "BC": dev_bc}, max(dev_ab, dev_bc) < tol)


def _support_ops(state, groups, tau=TAU_RANK):
    rho, dims = _abc(state, groups)
    space = rho.space
    pab = support_projector(partial_trace(rho, {"A", "B"}), tau)
    pbc = support_projector(partial_trace(rho, {"B", "C"}), tau)
    pabc = support_projector(rho, tau)
    return rho, embed(pab, space), embed(pbc, space), pabc


def check_commutation(state: DensityOperator, tol: float = EPS_CMI, groups=None) -> ProjectorReport:
    """``‖[P_AB, P_BC]‖`` for the support projectors."""
    rho, pab, pbc, _ = _support_ops(state, groups)
    value = cmi(rho, {"A"}, {"B"}, {"C"})
    norm = commutator_norm(pab, pbc)
    markov = value <= tol
    return ProjectorReport(
        "commutation",
        {"cmi": value, "commutator_norm": norm, "ill_conditioned": pab.ill_conditioned or pbc.ill_conditioned},
        (norm < 1e-8) if markov else True,
        markov,
    )


def check_product_lemma(state: DensityOperator, tol: float = EPS_CMI, groups=None) -> ProjectorReport:
    """``‖P_ABC - P_AB P_BC‖`` and the union bound it implies."""
    rho, pab, pbc, pabc = _support_ops(state, groups)
    value = cmi(rho, {"A"}, {"B"}, {"C"})
    prod = pab.matrix @ pbc.matrix
    dev = op_norm(pabc.matrix - prod)
    one = np.eye(prod.shape[0])
    q = one - prod
    idem = op_norm(q @ q - q)
    gapop = (one - pab.matrix) + (one - pbc.matrix) - q
    min_eig = float(np.linalg.eigvalsh((gapop + gapop.conj().T) / 2).min())
    markov = value <= tol
    return ProjectorReport(
        "product-lemma",
        {"cmi": value, "deviation": dev, "idempotency": idem, "union_min_eig": min_eig},
        dev < 1e-8 and idem < 1e-8 and min_eig >= -1e-8,
        markov,
    )


def check_sandwich_lemma(
    state: DensityOperator,
    b=("B",),
    c=("C",),
    samples: int = 20,
    seed: int = 0,
    tol: float = EPS_CMI,
) -> ProjectorReport:
    """States supported inside ``supp ρ_BC`` share the ``C`` marginal.

    Applies when ``S(C) + S(C|B) = 0``. Random ``τ_BC = P X P / Tr`` with
    ``X`` positive and ``P`` the support projector are sampled.
    """
    rho, (_, db, dc) = _group(state, (), b, c)
    m = rho.matrix
    rc = _ptrace(m, (1, db, dc), [2])
    pre = marginal_entropy(rho, {"C"}) + marginal_entropy(rho, {"B", "C"}) - marginal_entropy(rho, {"B"})
    p = _proj(m)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = random_density(m.shape[0], rng)
        t = p @ x @ p
        t /= np.trace(t).real
        worst = max(worst, trace_distance(_ptrace(t, (1, db, dc), [2]), rc))
    applicable = abs(pre) <= tol
    return ProjectorReport(
        "sandwich-lemma",
        {"precondition": pre, "max_trace_distance": worst},
        worst < 1e-8 if applicable else False,
        applicable,
    )


def check_merge_lemma(rho: DensityOperator, sigma: DensityOperator, tol: float = EPS_CMI, groups=None) -> ProjectorReport:
    """Markov chains with equal ``AB`` and ``BC`` marginals coincide."""
    r, dims = _abc(rho, groups)
    s, dims2 = _abc(sigma, groups)
    if dims != dims2:
        raise ValueError("states live on different spaces")
    c1 = cmi(r, {"A"}, {"B"}, {"C"})
    c2 = cmi(s, {"A"}, {"B"}, {"C"})
    dab = trace_distance(_ptrace(r.matrix, dims, [0, 1]), _ptrace(s.matrix, dims, [0, 1]))
    dbc = trace_distance(_ptrace(r.matrix, dims, [1, 2]), _ptrace(s.matrix, dims, [1, 2]))
    dist = trace_distance(r.matrix, s.matrix)
    applicable = max(c1, c2) <= tol and max(dab, dbc) <= tol
    return ProjectorReport(
        "merge-lemma",
        {"cmi": [c1, c2], "marginal_AB": dab, "marginal_BC": dbc, "distance": dist},
        dist <= max(10 * tol, 1e-8) if applicable else False,
        applicable,
    )


def matched_markov_pair(spec: MarkovSpec, phase_seed: int = 1) -> tuple[DensityOperator, DensityOperator]:
    """Two builds of ``spec`` differing by a block-diagonal unitary on ``B``.

    The unitary acts as a phase on each block, so the two states share every
    marginal and must coincide.
    """
    dec = markov_truth(spec)
    rng = np.random.default_rng(phase_seed)
    other = MarkovDecomposition(
        dec.dims,
        [
            MarkovBlock(b.weight, b.isometry * np.exp(2j * np.pi * rng.uniform()), b.left, b.right, b.dims)
            for b in dec.blocks
        ],
    )
    return dec.state(), other.state()


def ghz3() -> DensityOperator:
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1 / np.sqrt(2)
    return DensityOperator(FactorSpace(("A", "B", "C"), (2, 2, 2)), np.outer(v, v.conj()))


__all__ = [
    "DecompositionError",
    "MarkovBlock",
    "MarkovDecomposition",
    "MarkovSpec",
    "NotMarkov",
    "ProjectorReport",
    "check_commutation",
    "check_merge_lemma",
    "check_product_lemma",
    "check_sandwich_lemma",
    "generate_algebra",
    "ghz3",
    "make_markov_state",
    "markov_decompose",
    "markov_truth",
    "matched_markov_pair",
    "verify_projector_factorization",
]
