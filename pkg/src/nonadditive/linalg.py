"""Exact linear algebra over the integers and rationals. No floating point."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix by fraction-free elimination.

    Every intermediate entry is a minor of the input, so the divisions by the
    previous pivot are exact and entries stay integral.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    if any(len(r) != ncols for r in a):
        raise ValueError("ragged matrix")
    m = len(a)
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, m) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for r in range(rank + 1, m):
            row = a[r]
            f = row[col]
            for c in range(col + 1, ncols):
                row[c] = (row[c] * p - f * prow[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def sparse_rank(vectors: Iterable[Mapping[int, int]]) -> int:
    """Rank over Q of sparse integer vectors (``{column: value}``).

    The columns are split into connected components (two columns are linked
    when some vector touches both); the matrix is block diagonal in that
    split, so the rank is the sum of the blocks' Bareiss ranks.
    """
    vecs = []
    seen = set()
    for v in vectors:
        key = tuple(sorted((c, x) for c, x in v.items() if x))
        if key and key not in seen:
            seen.add(key)
            vecs.append(dict(key))
    if not vecs:
        return 0

    parent: dict[int, int] = {}

    def find(c):
        root = c
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    for v in vecs:
        cols = list(v)
        r0 = find(cols[0])
        for c in cols[1:]:
            rc = find(c)
            if rc != r0:
                parent[rc] = r0

    blocks: dict[int, list[dict[int, int]]] = {}
    for v in vecs:
        blocks.setdefault(find(next(iter(v))), []).append(v)

    total = 0
    for block in blocks.values():
        cols = sorted({c for v in block for c in v})
        pos = {c: i for i, c in enumerate(cols)}
        dense = []
        for v in block:
            row = [0] * len(cols)
            for c, x in v.items():
                row[pos[c]] = x
            dense.append(row)
        total += bareiss_rank(dense)
    return total


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``a y = b`` exactly; ``a`` must be square and nonsingular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n] for row in m]


def projected_norm2(gram: Sequence[Sequence[int]], overlaps: Sequence[int]) -> Fraction:
    """``o^T G^{-1} o`` for real integer Gram ``G`` and overlaps ``o = <basis|phi>``."""
    if not overlaps:
        return Fraction(0)
    y = solve_rational(gram, overlaps)
    return sum((Fraction(o) * yi for o, yi in zip(overlaps, y)), Fraction(0))
