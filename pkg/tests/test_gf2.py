import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from bootstrap_parent import gf2

rows_st = st.lists(st.integers(min_value=0, max_value=(1 << 7) - 1), max_size=7)


def span(rows):
    out = {0}
    for r in rows:
        out |= {x ^ r for x in out}
    return out


def brute_rank(rows):
    return len(span(rows)).bit_length() - 1


@given(rows_st)
def test_rank_matches_span_size(rows):
    assert gf2.rank(rows) == brute_rank(rows)


@given(rows_st)
def test_rref_spans_same_space(rows):
    r = gf2.rref(rows)
    assert span(r) == span(rows)
    assert len(r) == gf2.rank(rows)
    # each pivot appears in exactly one row
    pivots = [gf2.lowbit(x) for x in r]
    for p, x in zip(pivots, r):
        assert sum(bool(y & p) for y in r) == 1


@given(rows_st)
def test_nullspace_is_orthogonal_complement(rows):
    null = gf2.nullspace(rows, 7)
    for v in null:
        for row in rows:
            assert bin(v & row).count("1") % 2 == 0
    assert len(null) == 7 - gf2.rank(rows)
    assert gf2.rank(null) == len(null)


@given(rows_st, st.integers(min_value=0, max_value=127))
def test_solve_combination(rows, target):
    combo = gf2.solve_combination(rows, target)
    if target in span(rows):
        acc = 0
        for i in gf2.bit_indices(combo):
            acc ^= rows[i]
        assert acc == target
    else:
        assert combo is None


@settings(max_examples=50)
@given(rows_st)
def test_dependencies(rows):
    deps = gf2.dependencies(rows)
    assert len(deps) == len(rows) - gf2.rank(rows)
    for d in deps:
        acc = 0
        for i in gf2.bit_indices(d):
            acc ^= rows[i]
        assert acc == 0 and d


def test_in_span_and_bits():
    piv = gf2.echelon([0b011, 0b110])
    assert gf2.in_span(piv, 0b101)
    assert not gf2.in_span(piv, 0b001)
    assert gf2.bit_indices(0b10110) == [1, 2, 4]
    assert gf2.lowbit(0b10100) == 0b100


def test_rank_of_identity_and_all_pairs():
    assert gf2.rank([1 << i for i in range(10)]) == 10
    pairs = [(1 << i) | (1 << j) for i, j in itertools.combinations(range(5), 2)]
    assert gf2.rank(pairs) == 4
