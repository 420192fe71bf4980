import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bootstrap_parent import lattice as lat
from bootstrap_parent.lattice import FaceCoord as F
from bootstrap_parent.stabilizer import (
    PauliString,
    StabilizerCode,
    StabilizerState,
    anyon_string,
    codes_commute,
    insert_anyon_pair,
    logical_operator_in_region,
    make_cluster_state,
    make_ghz_state,
    make_product_state,
    make_toric_code,
    make_wall_state,
    region_cmi,
)
from bootstrap_parent.tensor import entropy, marginal_entropy

N = 4
pauli_st = st.builds(
    lambda x, z, s: PauliString(N, x, z, 2 * s),
    st.integers(0, 2**N - 1),
    st.integers(0, 2**N - 1),
    st.integers(0, 1),
)


@given(pauli_st, pauli_st)
def test_product_matches_dense(p, q):
    qubits = list(range(N))
    assert np.allclose((p * q).matrix(qubits), p.matrix(qubits) @ q.matrix(qubits))


@given(pauli_st, pauli_st)
def test_commutes_matches_dense(p, q):
    qubits = list(range(N))
    a, b = p.matrix(qubits), q.matrix(qubits)
    assert p.commutes(q) == np.allclose(a @ b, b @ a)


@given(pauli_st, st.permutations(range(N)))
def test_signed_permutation_matches_matrix(p, order):
    qubits = list(order)
    m = np.random.default_rng(0).normal(size=(2**N, 3))
    perm, phase = p.signed_permutation(qubits)
    assert np.allclose(phase[:, None] * m[perm], p.matrix(qubits) @ m)


@given(pauli_st)
def test_text_roundtrip(p):
    assert PauliString.from_text(p.to_text()) == p


def dense_state(state: StabilizerState):
    qubits = list(range(state.n))
    d = 2**state.n
    rho = np.eye(d, dtype=complex) / d
    for g in state.generators:
        rho = rho @ (np.eye(d) + g.matrix(qubits))
    return rho


def test_densify_matches_generator_product():
    ext = lat.Extent(2, 3, True)
    s = make_cluster_state(ext.faces(), ext)
    rho = s.densify(ext.faces(), by_face=False)
    assert rho.space.labels == tuple(range(s.n))
    assert np.allclose(rho.matrix, dense_state(s))


def test_entropies_match_dense_cluster():
    ext = lat.Extent(2, 3, True)
    s = make_cluster_state(ext.faces(), ext)
    s.validate()
    rho = s.densify(ext.faces())
    for region in ([F(0, 0)], [F(0, 0), F(1, 0)], [F(0, 0), F(1, 1), F(2, 0)]):
        labels = set(region)
        assert s.entropy(region) == pytest.approx(marginal_entropy(rho, labels), abs=1e-9)


def test_ghz_entropies():
    ext = lat.Extent(3, 3, True)
    s = make_ghz_state(ext.faces(), ext)
    assert s.entropy([F(0, 0)]) == 1
    assert s.entropy([F(0, 0), F(1, 1)]) == 1
    assert s.entropy(ext.faces()) == 0


def test_product_state_zero_entropy():
    ext = lat.Extent(3, 3, True)
    s = make_product_state(ext.faces(), ext)
    assert s.entropy([F(0, 0), F(1, 0)]) == 0


@pytest.mark.parametrize("radius", [0, 1, 2])
def test_toric_entropy_boundary_law(radius):
    s = make_toric_code(12, 12)
    a = lat.ball(F(6, 6), radius)
    assert s.entropy(a) == lat.boundary_length(a) // 2 - 1


def test_toric_torus_pure_and_valid():
    s = make_toric_code(6, 6)
    s.validate()
    assert s.entropy(s.extent.faces()) == 0


def test_toric_dense_against_stabilizer_marginal():
    s = make_toric_code(6, 6)
    region = [F(2, 2), F(3, 2), F(2, 3)]
    rho = s.densify(region)
    assert entropy(rho) == pytest.approx(s.entropy(region), abs=1e-9)
    assert np.trace(rho.matrix).real == pytest.approx(1)


def test_support_code_dense_projector_annihilates_complement():
    s = make_toric_code(6, 6)
    region = [F(2, 2), F(3, 2), F(2, 3), F(3, 3)]
    code = s.support_code(region)
    qubits = s.region_qubits(region)
    p = code.dense_projector(qubits)
    rho = s.densify(region, by_face=False).matrix
    assert np.allclose(p @ rho, rho)
    assert np.trace(p).real == pytest.approx(2 ** code.projector_rank_log2())


def test_codes_commute_and_logical_detection():
    s = make_toric_code(8, 8)
    c1 = s.support_code(lat.ball(F(3, 3), 1))
    c2 = s.support_code(lat.ball(F(4, 3), 1))
    assert codes_commute(c1, c2)
    bad = StabilizerCode(2, (PauliString(2, 1, 0),), frozenset(), 0b11)
    other = StabilizerCode(2, (PauliString(2, 0, 1),), frozenset(), 0b11)
    assert not codes_commute(bad, other)
    # a single X on qubit 0 of the code Z0Z1 is a logical
    code = StabilizerCode(2, (PauliString(2, 0, 0b11),), frozenset(), 0b11)
    assert logical_operator_in_region(code, 0b01)


def test_anyon_pair_twice_is_identity_and_flips_two():
    s = make_toric_code(8, 8)
    path = [F(1, 1), F(2, 1), F(3, 1), F(3, 2)]
    once = insert_anyon_pair(s, "e", path)
    flipped = [i for i, (g, h) in enumerate(zip(s.generators, once.generators)) if g.m != h.m]
    assert len(flipped) == 2
    twice = insert_anyon_pair(once, "e", path)
    assert [g.m for g in twice.generators] == [g.m for g in s.generators]
    assert anyon_string(s, "m", [F(1, 1), F(1, 2)]).weight() == 1


def test_abelian_anyon_keeps_entropies():
    s = make_toric_code(12, 12)
    t = insert_anyon_pair(s, "e", [F(q, 4) for q in range(2, 9)])
    for r in range(3):
        a = lat.ball(F(2, 4), r)
        assert t.entropy(a) == s.entropy(a)
    assert region_cmi(t, [F(2, 4)], lat.neighborhood([F(2, 4)]), [F(6, 8)]) == 0


def test_wall_state():
    s = make_wall_state(12, 12, 6)
    s.validate()
    assert s.entropy(s.extent.faces()) == 0
    # product side carries no entanglement
    assert s.entropy(lat.ball(F(6, 2), 1)) == 0
    assert s.entropy(lat.ball(F(6, 9), 1)) > 0


def test_state_text_roundtrip():
    s = make_toric_code(6, 6)
    back = StabilizerState.from_text(s.to_text(), s.extent)
    a = lat.ball(F(3, 3), 1)
    assert back.entropy(a) == s.entropy(a)


@settings(max_examples=20, deadline=None)
@given(st.sets(st.sampled_from(lat.Extent(4, 4).faces()), min_size=1, max_size=4))
def test_cluster_entropy_matches_dense(region):
    ext = lat.Extent(4, 4, True)
    s = make_cluster_state(ext.faces(), ext)
    rho = s.densify(region)
    assert entropy(rho) == pytest.approx(s.entropy(region), abs=1e-9)
