import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bootstrap_parent.markov import (
    MarkovSpec,
    NotMarkov,
    check_commutation,
    check_merge_lemma,
    check_product_lemma,
    check_sandwich_lemma,
    ghz3,
    make_markov_state,
    markov_decompose,
    markov_truth,
    matched_markov_pair,
    random_density,
    verify_projector_factorization,
)
from bootstrap_parent.tensor import DensityOperator, FactorSpace, cmi, trace_distance

SPEC = MarkovSpec(2, 2, [(2, 1), (1, 2), (2, 2)], seed=1)


def test_generated_state_is_markov():
    rho = make_markov_state(SPEC)
    assert cmi(rho, {"A"}, {"B"}, {"C"}) == pytest.approx(0, abs=1e-9)
    assert np.trace(rho.matrix).real == pytest.approx(1)


def test_decompose_recovers_blocks():
    rho = make_markov_state(SPEC)
    dec = markov_decompose(rho)
    truth = markov_truth(SPEC)
    assert sorted(dec.block_dims()) == sorted(truth.block_dims())
    assert sorted(dec.weights) == pytest.approx(sorted(truth.weights))
    assert trace_distance(dec.reconstruct(), rho.matrix) < 1e-10
    errs = dec.invariant_errors()
    assert max(errs.values()) < 1e-9


def test_dropping_a_block_is_detected():
    rho = make_markov_state(SPEC)
    dec = markov_decompose(rho)
    assert verify_projector_factorization(dec, rho).passed
    assert not verify_projector_factorization(dec.without(0), rho).passed


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 3),
    st.lists(st.tuples(st.integers(1, 2), st.integers(1, 2)), min_size=1, max_size=3),
    st.integers(0, 1),
    st.integers(0, 10_000),
)
def test_roundtrip_random_specs(da, dc, blocks, pad, seed):
    spec = MarkovSpec(da, dc, blocks, seed=seed, pad=pad)
    rho = make_markov_state(spec)
    dec = markov_decompose(rho)
    assert trace_distance(dec.reconstruct(), rho.matrix) < 1e-8
    if da > 1 or dc > 1:
        # with one-dimensional A and C the block count is not observable
        assert len(dec.blocks) == len(blocks)
    assert check_commutation(rho).values["commutator_norm"] < 1e-8
    p = check_product_lemma(rho)
    assert p.passed and p.values["union_min_eig"] >= -1e-8


def test_ghz_rejected():
    g = ghz3()
    assert cmi(g, {"A"}, {"B"}, {"C"}) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(NotMarkov):
        markov_decompose(g)
    assert not check_product_lemma(g).applicable


def test_save_load(tmp_path):
    rho = make_markov_state(SPEC)
    dec = markov_decompose(rho)
    dec.save(tmp_path / "dec")
    back = type(dec).load(tmp_path / "dec")
    assert np.allclose(back.reconstruct(), dec.reconstruct())
    assert back.block_dims() == dec.block_dims()


def test_merge_lemma():
    a, b = matched_markov_pair(SPEC)
    r = check_merge_lemma(a, b)
    assert r.applicable and r.passed


def test_sandwich_lemma_applicability():
    # S(C) + S(C|B) = 0 holds when C is purified inside B
    v = np.zeros(16, dtype=complex)
    for i in range(4):
        v[i * 4 + i] = 0.5  # maximally entangled B-C pair, B of dim 4, C of dim 4
    sp = FactorSpace(("B", "C"), (4, 4))
    rho = DensityOperator(sp, np.outer(v, v.conj()))
    r = check_sandwich_lemma(rho)
    assert r.applicable and r.passed
    rng = np.random.default_rng(0)
    generic = DensityOperator(sp, random_density(16, rng))
    assert not check_sandwich_lemma(generic).applicable
