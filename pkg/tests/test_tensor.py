import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bootstrap_parent.markov import random_density
from bootstrap_parent.tensor import (
    CapExceeded,
    DensityOperator,
    FactorSpace,
    cmi,
    commutator_norm,
    embed,
    entropy,
    marginal_entropy,
    maximally_mixed,
    modular_commutator,
    partial_trace,
    product_state,
    pure_state,
    read_matrix,
    reorder,
    support_projector,
    trace_distance,
    weak_monotonicity_slack,
    write_matrix,
)


def rand_state(dims, seed, rank=None):
    rng = np.random.default_rng(seed)
    labels = tuple("ABCDE"[: len(dims)])
    return DensityOperator(FactorSpace(labels, dims), random_density(int(np.prod(dims)), rng, rank))


def bell():
    return pure_state(FactorSpace(("A", "B"), (2, 2)), [1, 0, 0, 1])


def test_bell_entropies():
    rho = bell()
    assert entropy(rho) == pytest.approx(0, abs=1e-12)
    assert marginal_entropy(rho, {"A"}) == pytest.approx(1, abs=1e-12)


def test_maximally_mixed_entropy():
    sp = FactorSpace(("x", "y"), (3, 4))
    assert entropy(maximally_mixed(sp)) == pytest.approx(np.log2(12))


def test_partial_trace_against_einsum():
    rho = rand_state((2, 3, 2), 0)
    t = rho.matrix.reshape(2, 3, 2, 2, 3, 2)
    want = np.einsum("abcdbf->acdf", t).reshape(4, 4)
    got = partial_trace(rho, {"A", "C"})
    assert got.space.labels == ("A", "C")
    assert np.allclose(got.matrix, want)


def test_embed_and_reorder_roundtrip():
    a = rand_state((2,), 1)
    b = rand_state((3,), 2)
    b = DensityOperator(FactorSpace(("B",), (3,)), b.matrix)
    prod = product_state(a, b)
    target = FactorSpace(("B", "A"), (3, 2))
    e = embed(a, target)
    assert np.allclose(e.matrix, np.kron(np.eye(3), a.matrix))
    back = reorder(reorder(prod, ["B", "A"]), ["A", "B"])
    assert np.allclose(back.matrix, prod.matrix)


def test_product_state_has_zero_cmi():
    a, b, c = (rand_state((2,), s) for s in range(3))
    prod = product_state(
        DensityOperator(FactorSpace(("A",), (2,)), a.matrix),
        DensityOperator(FactorSpace(("B",), (2,)), b.matrix),
        DensityOperator(FactorSpace(("C",), (2,)), c.matrix),
    )
    assert cmi(prod, {"A"}, {"B"}, {"C"}) == pytest.approx(0, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=1, max_value=12))
def test_strong_subadditivity_and_weak_monotonicity(seed, rank):
    rho = rand_state((2, 2, 3), seed, rank)
    assert cmi(rho, {"A"}, {"B"}, {"C"}) >= -1e-9
    assert weak_monotonicity_slack(rho, {"A"}, {"B"}, {"C"}) >= -1e-9


def test_support_projector_rank():
    rho = rand_state((2, 3), 5, rank=2)
    p = support_projector(rho)
    assert p.rank == 2
    assert p.idempotency_error() < 1e-10
    assert np.allclose(p.matrix @ rho.matrix, rho.matrix)


def test_commutator_norm_pauli():
    sp = FactorSpace(("q",), (2,))
    x = DensityOperator(sp, np.array([[0, 1], [1, 0]]), validate=False)
    z = DensityOperator(sp, np.array([[1, 0], [0, -1]]), validate=False)
    assert commutator_norm(x, z) == pytest.approx(2)


def test_trace_distance_orthogonal():
    assert trace_distance(np.diag([1, 0]), np.diag([0, 1])) == pytest.approx(1)


def _modular_oracle(rho, a, b, c):
    from scipy.linalg import logm

    sp = rho.space
    sub = partial_trace(rho, a | b | c)
    kab = DensityOperator(sp.subspace(a | b), -logm(partial_trace(sub, a | b).matrix), validate=False)
    kbc = DensityOperator(sp.subspace(b | c), -logm(partial_trace(sub, b | c).matrix), validate=False)
    x = embed(kab, sub.space).matrix
    y = embed(kbc, sub.space).matrix
    return float(np.real(1j * np.trace(sub.matrix @ (x @ y - y @ x))))


@pytest.mark.parametrize("seed", range(4))
def test_modular_commutator_matches_logm(seed):
    rho = rand_state((2, 2, 3), seed)  # full rank so logm is defined
    want = _modular_oracle(rho, {"A"}, {"B"}, {"C"})
    assert modular_commutator(rho, {"A"}, {"B"}, {"C"}) == pytest.approx(want, abs=1e-9)


def test_modular_commutator_product_is_zero():
    a = DensityOperator(FactorSpace(("A",), (2,)), rand_state((2,), 1).matrix)
    b = DensityOperator(FactorSpace(("B",), (2,)), rand_state((2,), 2).matrix)
    c = DensityOperator(FactorSpace(("C",), (2,)), rand_state((2,), 3).matrix)
    assert abs(modular_commutator(product_state(a, b, c), {"A"}, {"B"}, {"C"})) < 1e-12


def test_matrix_file_roundtrip(tmp_path):
    sp = FactorSpace(((0, 1), (1, 1)), (2, 3))
    rho = DensityOperator(sp, rand_state((2, 3), 3).matrix)
    path = tmp_path / "rho.bin"
    write_matrix(path, rho)
    back = read_matrix(path)
    assert back.space == sp
    assert np.array_equal(back.matrix, rho.matrix)


def test_caps():
    with pytest.raises(CapExceeded):
        FactorSpace(tuple(range(21)), (2,) * 21)
    with pytest.raises(ValueError):
        FactorSpace(("a", "a"), (2, 2))
