"""Slow, independent reference implementations used to freeze test values.

Nothing here imports the package under test.
"""

from __future__ import annotations

import itertools
from typing import Sequence


def poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], q: int) -> list[int]:
    """Schoolbook product reduced by a monic modulus f (lowest degree first)."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % q
    m = len(f) - 1
    for i in range(len(prod) - 1, m - 1, -1):
        c = prod[i]
        if c:
            for j in range(m + 1):
                prod[i - m + j] = (prod[i - m + j] - c * f[j]) % q
    out = prod[:m] + [0] * max(0, m - len(prod))
    return out


def is_irreducible_trial(f: Sequence[int], q: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    m = len(f) - 1
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(q), repeat=deg):
            g = list(low) + [1]
            rem = list(f)
            for i in range(len(rem) - 1, deg - 1, -1):
                c = rem[i]
                if c:
                    for j in range(deg + 1):
                        rem[i - deg + j] = (rem[i - deg + j] - c * g[j]) % q
            if not any(rem[:deg]):
                return False
    return True


def span_set(rows: Sequence[Sequence[int]], q: int, n: int) -> frozenset:
    """All F_q-linear combinations of the rows, as a set of tuples."""
    vecs = {tuple([0] * n)}
    for row in rows:
        new = set()
        for v in vecs:
            for c in range(q):
                new.add(tuple((v[i] + c * row[i]) % q for i in range(n)))
        vecs = new
    return frozenset(vecs)


def dim_from_size(size: int, q: int) -> int:
    d = 0
    while q**d < size:
        d += 1
    assert q**d == size
    return d


def rank_by_enumeration(rows: Sequence[Sequence[int]], q: int, n: int) -> int:
    return dim_from_size(len(span_set(rows, q, n)), q)


def all_matrices(q: int, rows: int, cols: int):
    for entries in itertools.product(range(q), repeat=rows * cols):
        yield [list(entries[i * cols : (i + 1) * cols]) for i in range(rows)]


def matmul(a, b, q):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) % q for j in range(len(b[0]))] for i in range(len(a))]


def ferrers_naive(n: int, k: int) -> list[tuple[int, ...]]:
    """Non-increasing sequences of length k with entries in [0, n], by filtering the full box."""
    return [c for c in itertools.product(range(n + 1), repeat=k) if all(c[i] >= c[i + 1] for i in range(k - 1))]


def gauss_binom_subspaces(n: int, k: int, q: int) -> int:
    """Number of k-dim subspaces of F_q^n, by collecting distinct spans (tiny n only)."""
    vecs = list(itertools.product(range(q), repeat=n))
    spans = set()
    for combo in itertools.combinations(vecs, k):
        s = span_set(combo, q, n)
        if len(s) == q**k:
            spans.add(s)
    return len(spans)
