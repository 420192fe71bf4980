"""Linear algebra over GF(2) on bit-packed rows.

Rows are Python integers; bit ``j`` of a row is column ``j``. CPython stores
integers as packed machine-word digits, so XOR of two rows costs one pass over
the words and elimination never touches individual bits in Python.

Pivoting is deterministic: every pivot is the lowest set column of its row,
and rows are consumed in input order.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def lowbit(x: int) -> int:
    return x & -x


def bit_indices(x: int) -> list[int]:
    out = []
    while x:
        b = x & -x
        out.append(b.bit_length() - 1)
        x ^= b
    return out


def rank(rows: Iterable[int]) -> int:
    """Rank of the row space."""
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            lb = row & -row
            p = pivots.get(lb)
            if p is None:
                pivots[lb] = row
                break
            row ^= p
    return len(pivots)


def echelon(rows: Iterable[int]) -> dict[int, int]:
    """Echelon basis keyed by pivot bit (``1 << column``)."""
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            lb = row & -row
            p = pivots.get(lb)
            if p is None:
                pivots[lb] = row
                break
            row ^= p
    return pivots


def rref(rows: Iterable[int]) -> list[int]:
    """Fully reduced row echelon form, sorted by pivot column.

    The result is canonical: two row sets span the same space iff their
    ``rref`` lists are equal.
    """
    pivots = echelon(rows)
    keys = sorted(pivots)
    for i in range(len(keys) - 1, -1, -1):
        row = pivots[keys[i]]
        for c in keys[i + 1:]:
            if row & c:
                row ^= pivots[c]
        pivots[keys[i]] = row
    return [pivots[k] for k in keys]


def nullspace(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of ``{v : popcount(v & row) even for every row}``."""
    reduced = rref(rows)
    pivot_cols = {}
    for row in reduced:
        pivot_cols[(row & -row).bit_length() - 1] = row
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = 1 << f
        fb = 1 << f
        for c, row in pivot_cols.items():
            if row & fb:
                v |= 1 << c
        basis.append(v)
    return basis


def solve_combination(rows: Sequence[int], target: int) -> int | None:
    """Find a subset of ``rows`` XOR-ing to ``target``.

    Returns a bitmask over row indices, or ``None`` when ``target`` is not in
    the span.
    """
    pivots: dict[int, tuple[int, int]] = {}
    for i, row in enumerate(rows):
        hist = 1 << i
        while row:
            lb = row & -row
            p = pivots.get(lb)
            if p is None:
                pivots[lb] = (row, hist)
                break
            row ^= p[0]
            hist ^= p[1]
    hist = 0
    t = target
    while t:
        lb = t & -t
        p = pivots.get(lb)
        if p is None:
            return None
        t ^= p[0]
        hist ^= p[1]
    return hist


def dependencies(rows: Sequence[int]) -> list[int]:
    """Basis of linear relations among ``rows`` as bitmasks over row indices."""
    pivots: dict[int, tuple[int, int]] = {}
    out = []
    for i, row in enumerate(rows):
        hist = 1 << i
        while row:
            lb = row & -row
            p = pivots.get(lb)
            if p is None:
                pivots[lb] = (row, hist)
                break
            row ^= p[0]
            hist ^= p[1]
        if not row:
            out.append(hist)
    return out


def in_span(pivots: dict[int, int], v: int) -> bool:
    while v:
        p = pivots.get(v & -v)
        if p is None:
            return False
        v ^= p
    return True
