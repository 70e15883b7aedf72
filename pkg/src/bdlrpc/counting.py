"""Counting pairs (Z, A) by the dimension of Omega_t(Z, A).

Omega_t(Z, A) is the row space of Z, ZA, ..., ZA^(t-1) for Z in F_q^{u x r}
and A in F_q^{r x r}. This module has the exact q-analog helpers, the
greedy basis generator, brute-force enumeration, the closed-form counts and
probabilities, Ferrers-diagram sums, the structured and companion builders
for A, and the polynomial gcd criterion for companion matrices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import poly
from .errors import DimensionMismatch, OddU, OutOfRange, ShapeMismatch, TooLarge, WrongShape
from .fqmatrix import Echelon, FqMatrix, FqSubspaceN, inverse_table, rref_array
from .poly import FqPolynomial, poly_gcd

BRUTE_LIMIT = 2**24
FERRERS_LIMIT = 10**6

__all__ = [
    "gauss_binom", "aq", "hq", "omega_t", "omega_t_recursive", "seqgen", "SeqGenResult",
    "mt_rank", "mt_rank_batch", "batch_rank", "brute_count", "brute_histogram", "seqgen_fibers", "formula_count",
    "prob_full", "prob_dim_k", "prob_full_bound", "lower_bound_t", "prob_t_bound",
    "FerrersDiagram", "enumerate_ferrers", "ferrers_weight_sum", "ferrers_above_sum",
    "ferrers_above_brute", "build_structured_A", "build_companion_A", "poly_gcd",
    "companion_full_test", "companion_poly", "companion_batch", "structured_batch", "stacked", "FqPolynomial",
]


# ---- q-analogs ----


def _check_nk(n: int, k: int) -> None:
    if not 0 <= k <= n:
        raise OutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")


def aq(n: int, k: int, q: int) -> int:
    """A_q(n, k) = prod_{i<k} (q^n - q^i): number of full-rank k x n matrices."""
    _check_nk(n, k)
    out = 1
    for i in range(k):
        out *= q**n - q**i
    return out


def gauss_binom(n: int, k: int, q: int) -> int:
    _check_nk(n, k)
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def hq(n: int, q: int) -> Fraction:
    """H_q(n) = prod_{i=1}^n (1 - q^-i), exact."""
    if n < 0:
        raise OutOfRange(f"n={n} must be >= 0")
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= 1 - Fraction(1, q**i)
    return out


# ---- Omega_t and the greedy basis ----


def _check_za(z: FqMatrix, a: FqMatrix, t: int) -> None:
    if a.rows != a.cols:
        raise DimensionMismatch(f"A must be square, got {a.shape}")
    if z.cols != a.rows:
        raise DimensionMismatch(f"cols(Z)={z.cols} != dim(A)={a.rows}")
    if z.q != a.q:
        raise DimensionMismatch("Z and A over different fields")
    if t < 1:
        raise OutOfRange(f"t={t} must be >= 1")


def stacked(z: FqMatrix, a: FqMatrix, t: int) -> FqMatrix:
    """M_t(Z, A): Z, ZA, ..., ZA^(t-1) stacked vertically."""
    _check_za(z, a, t)
    q = z.q
    blocks = [z.data]
    cur = z.data
    for _ in range(t - 1):
        cur = cur @ a.data % q
        blocks.append(cur)
    return FqMatrix(q, np.vstack(blocks).reshape(-1, z.cols))


def omega_t(z: FqMatrix, a: FqMatrix, t: int) -> FqSubspaceN:
    return FqSubspaceN.from_rows(z.q, stacked(z, a, t).data, z.cols)


def omega_t_recursive(z: FqMatrix, a: FqMatrix, t: int) -> FqSubspaceN:
    """Omega_{j+1} = Omega_j + Omega_j A, starting from the row space of Z."""
    _check_za(z, a, t)
    q = z.q
    om = FqSubspaceN.from_rows(q, z.data, z.cols)
    for _ in range(t - 1):
        if om.dim == 0:
            break
        om = FqSubspaceN.from_rows(q, np.vstack([om.basis, om.basis @ a.data % q]), z.cols)
    return om


@dataclass(frozen=True)
class SeqGenResult:
    blocks: tuple[FqMatrix, ...]

    @property
    def G(self) -> FqMatrix:
        q = self.blocks[0].q
        cols = self.blocks[0].cols
        rows = [b.data for b in self.blocks if b.rows]
        if not rows:
            return FqMatrix(q, np.zeros((0, cols), dtype=np.int64))
        return FqMatrix(q, np.vstack(rows))

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(b.rows for b in self.blocks)


def seqgen(z: FqMatrix, a: FqMatrix, t: int) -> SeqGenResult:
    """Greedy basis of Omega_t: block j keeps the rows of Z A^j, in order,
    that are independent of everything kept before them."""
    _check_za(z, a, t)
    q, n = z.q, z.cols
    ech = Echelon(q, n)
    cur = z.data
    blocks = []
    for j in range(t):
        if j:
            cur = cur @ a.data % q
        kept = [row for row in cur if ech.add(row)]
        arr = np.array(kept, dtype=np.int64).reshape(-1, n)
        blocks.append(FqMatrix(q, arr, cols=n))
    return SeqGenResult(tuple(blocks))


def mt_rank(z: FqMatrix, a: FqMatrix, t: int) -> int:
    """rank(M_t(Z, A)) = dim Omega_t(Z, A).

    Grows the echelon form block by block; a block that adds nothing means
    Omega is A-invariant and no later block can add anything either.
    """
    _check_za(z, a, t)
    q, n = z.q, z.cols
    basis = np.zeros((0, n), dtype=np.int64)
    cur = z.data
    for j in range(t):
        if j:
            cur = cur @ a.data % q
        nxt, _ = rref_array(np.vstack([basis, cur]), q)
        if nxt.shape[0] == basis.shape[0] or nxt.shape[0] == n:
            basis = nxt
            break
        basis = nxt
    return basis.shape[0]


def batch_rank(m: np.ndarray, q: int) -> np.ndarray:
    """Ranks of a stack of matrices, shape (B, R, C), by batched elimination."""
    m = np.array(m, dtype=np.int64) % q
    bsz, rows, cols = m.shape
    inv = inverse_table(q)
    rank = np.zeros(bsz, dtype=np.int64)
    ridx = np.arange(rows)
    bidx = np.arange(bsz)
    for c in range(cols):
        cand = (m[:, :, c] != 0) & (ridx[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        sel = bidx[has]
        p = piv[has]
        r = rank[has]
        sub = m[sel]
        prow = sub[np.arange(sel.size), p].copy()
        sub[np.arange(sel.size), p] = sub[np.arange(sel.size), r]
        prow = prow * inv[prow[:, c]][:, None] % q
        sub[np.arange(sel.size), r] = prow
        factor = sub[:, :, c].copy()
        factor[np.arange(sel.size), r] = 0
        sub = (sub - factor[:, :, None] * prow[:, None, :]) % q
        m[sel] = sub
        rank[sel] += 1
        if rows and (rank >= rows).all():
            break
    return rank


def mt_rank_batch(z: np.ndarray, a: np.ndarray, t: int, q: int) -> np.ndarray:
    """mt_rank over a batch: z has shape (B, u, N), a has shape (B, N, N)."""
    z = np.asarray(z, dtype=np.int64) % q
    a = np.asarray(a, dtype=np.int64) % q
    if z.ndim != 3 or a.ndim != 3 or a.shape[1] != a.shape[2] or z.shape[2] != a.shape[1]:
        raise DimensionMismatch(f"bad batch shapes {z.shape}, {a.shape}")
    blocks = [z]
    cur = z
    for _ in range(t - 1):
        cur = np.matmul(cur, a) % q
        blocks.append(cur)
    return batch_rank(np.concatenate(blocks, axis=1), q)


# ---- exhaustive counting ----


def _all_matrices(q: int, rows: int, cols: int) -> np.ndarray:
    """Every rows x cols matrix over F_q, in row-major lexicographic order."""
    n = rows * cols
    if n == 0:
        return np.zeros((1, rows, cols), dtype=np.int64)
    idx = np.arange(q**n, dtype=np.int64)
    digits = np.zeros((q**n, n), dtype=np.int64)
    for pos in range(n - 1, -1, -1):
        digits[:, pos] = idx % q
        idx //= q
    return digits.reshape(-1, rows, cols)


def _guard(u: int, r: int, q: int) -> None:
    if q ** (u * r + r * r) > BRUTE_LIMIT:
        raise TooLarge(f"q^(ur+r^2) = {q}^{u * r + r * r} exceeds {BRUTE_LIMIT}")


@lru_cache(maxsize=64)
def _histogram(u: int, r: int, t: int, q: int) -> tuple[int, ...]:
    _guard(u, r, q)
    zs = _all_matrices(q, u, r)
    As = _all_matrices(q, r, r)
    counts = np.zeros(r + 1, dtype=np.int64)
    chunk = max(1, (1 << 16) // max(1, As.shape[0]))
    for start in range(0, zs.shape[0], chunk):
        zc = zs[start : start + chunk]
        zb = np.repeat(zc, As.shape[0], axis=0)
        ab = np.tile(As, (zc.shape[0], 1, 1))
        ranks = mt_rank_batch(zb, ab, t, q)
        counts += np.bincount(ranks, minlength=r + 1)
    return tuple(int(c) for c in counts)


def brute_histogram(u: int, r: int, t: int, q: int) -> tuple[int, ...]:
    """Counts of pairs (Z, A) by dim Omega_t, indexed by k = 0..r."""
    if u < 1 or r < 1 or t < 1:
        raise OutOfRange("u, r, t must be >= 1")
    return _histogram(u, r, t, q)


def brute_count(u: int, r: int, k: int, t: int, q: int) -> int:
    """|C_k^{(u,r,t)}| by exhausting all q^(ur + r^2) pairs."""
    if not 0 <= k <= r:
        raise OutOfRange(f"k={k} outside [0, {r}]")
    return brute_histogram(u, r, t, q)[k]


def seqgen_fibers(u: int, r: int, t: int, q: int) -> dict[bytes, int]:
    """Number of pairs (Z, A) per SeqGen output G, keyed by G's bytes (shape implied by k)."""
    _guard(u, r, q)
    zs = _all_matrices(q, u, r)
    As = _all_matrices(q, r, r)
    fibers: dict[bytes, int] = {}
    for z in zs:
        zm = FqMatrix(q, z)
        for a in As:
            g = seqgen(zm, FqMatrix(q, a), t).G.data
            key = g.tobytes()
            fibers[key] = fibers.get(key, 0) + 1
    return fibers


# ---- closed forms ----


def formula_count(u: int, r: int, k: int, q: int) -> int:
    """A_q(r,k) * [k+u-1, u-1]_q * q^(r(r-k)+k)."""
    if u < 1:
        raise OutOfRange(f"u={u} must be >= 1")
    if not 0 <= k <= r:
        raise OutOfRange(f"k={k} outside [0, {r}]")
    return aq(r, k, q) * gauss_binom(k + u - 1, u - 1, q) * q ** (r * (r - k) + k)


def prob_dim_k(u: int, r: int, k: int, q: int) -> Fraction:
    return Fraction(formula_count(u, r, k, q), q ** (r * (r + u)))


def prob_full(u: int, r: int, q: int) -> Fraction:
    return prob_dim_k(u, r, r, q)


def prob_full_bound(u: int, q: int) -> Fraction:
    """1 - q^(-u+1)/(q-1), the lower bound on prob_full for every r."""
    return 1 - Fraction(1, q ** (u - 1) * (q - 1))


def lower_bound_t(u: int, r: int, q: int) -> int | Fraction:
    """[u + u/2, u/2]_q * q^(ur - u^2/2); only defined for even u.

    The value is an integer whenever ur >= u^2/2, which is the case of interest.
    """
    if u % 2:
        raise OddU(f"u={u} is odd")
    h = u // 2
    exp = u * r - u * h
    base = gauss_binom(u + h, h, q)
    return base * q**exp if exp >= 0 else Fraction(base, q**-exp)


def prob_t_bound(u: int, q: int) -> Fraction | float:
    """1 - q^(-u/2)/(q-1). Exact for even u; a float otherwise."""
    if u < 1:
        raise OutOfRange(f"u={u} must be >= 1")
    if u % 2 == 0:
        return 1 - Fraction(1, q ** (u // 2) * (q - 1))
    return 1.0 - q ** (-u / 2) / (q - 1)


# ---- Ferrers diagrams ----


@dataclass(frozen=True)
class FerrersDiagram:
    """Non-increasing column heights, each at most n."""

    cols: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        c = tuple(int(x) for x in self.cols)
        object.__setattr__(self, "cols", c)
        if any(x < 0 or x > self.n for x in c) or any(c[i] < c[i + 1] for i in range(len(c) - 1)):
            raise WrongShape(f"{list(c)} is not an {self.n} x {len(c)} Ferrers diagram")

    @property
    def k(self) -> int:
        return len(self.cols)

    @property
    def weight(self) -> int:
        return sum(self.cols)

    def __le__(self, other: FerrersDiagram) -> bool:
        return self.k == other.k and all(a <= b for a, b in zip(self.cols, other.cols))


def enumerate_ferrers(n: int, k: int) -> list[FerrersDiagram]:
    """All n x k diagrams, in lexicographic order of the height sequence."""
    if n < 0 or k < 0:
        raise OutOfRange("n and k must be >= 0")
    if math.comb(n + k, k) > FERRERS_LIMIT:
        raise TooLarge(f"{math.comb(n + k, k)} diagrams exceed {FERRERS_LIMIT}")
    out = []
    for c in itertools.combinations_with_replacement(range(n, -1, -1), k):
        out.append(FerrersDiagram(c, n))
    out.sort(key=lambda f: f.cols)
    return out


def ferrers_weight_sum(n: int, k: int, q: int) -> int:
    return sum(q**f.weight for f in enumerate_ferrers(n, k))


def _block_shape(f: FerrersDiagram) -> tuple[int, int, int]:
    u = f.n
    values = sorted(set(f.cols), reverse=True)
    if len(values) == 1 and values[0] == u:
        return u, 0, 0
    if len(values) == 1:
        return u, u - values[0], f.k
    if len(values) == 2 and values[0] == u:
        return u, u - values[1], f.cols.count(values[1])
    raise WrongShape(f"{list(f.cols)} is not of the form [u,...,u,u-s,...,u-s] with u={u}")


def ferrers_above_sum(f: FerrersDiagram, q: int) -> int:
    """Closed form of sum over F' >= F of q^|F'| for F = [u,..,u,u-s,..,u-s]."""
    u, s, t = _block_shape(f)
    return gauss_binom(s + t, s, q) * q ** (u * f.k - s * t)


def ferrers_above_brute(f: FerrersDiagram, q: int) -> int:
    return sum(q**g.weight for g in enumerate_ferrers(f.n, f.k) if f <= g)


# ---- structured and companion A ----


def build_structured_A(blocks: Sequence[FqMatrix]) -> FqMatrix:
    """Top block-row (A_1 ... A_{d-1}), I_r on the block subdiagonal, zeros elsewhere."""
    if not blocks:
        raise ShapeMismatch("need at least one block")
    q = blocks[0].q
    r = blocks[0].rows
    for b in blocks:
        if b.shape != (r, r) or b.q != q:
            raise ShapeMismatch("blocks must be square, of equal size and over the same field")
    d1 = len(blocks)
    out = np.zeros((d1 * r, d1 * r), dtype=np.int64)
    for i, b in enumerate(blocks):
        out[:r, i * r : (i + 1) * r] = b.data
    for i in range(1, d1):
        out[i * r : (i + 1) * r, (i - 1) * r : i * r] = np.eye(r, dtype=np.int64)
    return FqMatrix(q, out)


def build_companion_A(coeffs: Sequence[int], q: int) -> FqMatrix:
    """Companion matrix: ones on the superdiagonal, bottom row a_0 ... a_{N-1}.

    With row vectors z, z A is the coefficient vector of x z(x) mod p_A where
    p_A(x) = x^N - sum_j a_j x^j.
    """
    c = [int(x) % q for x in coeffs]
    if not c:
        raise ShapeMismatch("coefficient vector must be nonempty")
    n = len(c)
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        out[i, i + 1] = 1
    out[n - 1] = c
    return FqMatrix(q, out)


def companion_batch(coeffs: np.ndarray, q: int) -> np.ndarray:
    """Companion matrices for rows of a (B, N) coefficient array."""
    bsz, n = coeffs.shape
    out = np.zeros((bsz, n, n), dtype=np.int64)
    idx = np.arange(n - 1)
    out[:, idx, idx + 1] = 1
    out[:, n - 1, :] = coeffs % q
    return out


def structured_batch(blocks: np.ndarray, q: int) -> np.ndarray:
    """Structured A for a (B, d-1, r, r) block array."""
    bsz, d1, r, _ = blocks.shape
    n = d1 * r
    out = np.zeros((bsz, n, n), dtype=np.int64)
    for i in range(d1):
        out[:, :r, i * r : (i + 1) * r] = blocks[:, i]
    for i in range(1, d1):
        out[:, i * r : (i + 1) * r, (i - 1) * r : i * r] = np.eye(r, dtype=np.int64)
    return out % q


def companion_poly(coeffs: Sequence[int], q: int) -> FqPolynomial:
    """p_A(x) = x^N - sum_j a_j x^j for the companion matrix built from coeffs."""
    c = [(-int(x)) % q for x in coeffs] + [1]
    return FqPolynomial(q, tuple(c))


def companion_full_test(z: FqMatrix, coeffs: Sequence[int]) -> bool:
    """gcd(p_A, z_1, ..., z_u) == 1, with z_i(x) = sum_j Z[i, j] x^j."""
    q = z.q
    if z.cols != len(coeffs):
        raise DimensionMismatch(f"cols(Z)={z.cols} != N={len(coeffs)}")
    g = companion_poly(coeffs, q).coeffs
    for row in z.data:
        zi = poly.trim(row, q)
        if zi:
            g = poly.gcd(g, zi, q)
        if len(g) == 1:
            return True
    return len(g) == 1
