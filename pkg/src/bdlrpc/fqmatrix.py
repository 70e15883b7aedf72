"""Dense linear algebra over a prime field F_q.

Matrices are int64 numpy arrays with entries in [0, q). ``FqMatrix`` wraps a
read-only array together with q; the free functions accept either an
``FqMatrix`` or a raw array plus q where that is more convenient.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import AmbientMismatch, DimensionMismatch, InvalidParameters


@lru_cache(maxsize=None)
def inverse_table(q: int) -> np.ndarray:
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, -1, q)
    return inv


class FqMatrix:
    """Immutable dense matrix over F_q."""

    __slots__ = ("q", "data")

    def __init__(self, q: int, data: np.ndarray | Sequence[Sequence[int]], cols: int | None = None):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1:
            if cols is None:
                arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
            else:
                arr = arr.reshape(-1, cols)
        elif arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {arr.shape}")
        arr %= q
        arr.setflags(write=False)
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("FqMatrix is immutable")

    @classmethod
    def zeros(cls, q: int, rows: int, cols: int) -> FqMatrix:
        return cls(q, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, q: int, n: int) -> FqMatrix:
        return cls(q, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.data.ravel())

    def rank(self) -> int:
        return rank(self)

    def __matmul__(self, other: FqMatrix) -> FqMatrix:
        return mat_mul(self, other)

    def __add__(self, other: FqMatrix) -> FqMatrix:
        _same_q(self, other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return FqMatrix(self.q, self.data + other.data)

    def __sub__(self, other: FqMatrix) -> FqMatrix:
        _same_q(self, other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return FqMatrix(self.q, self.data - other.data)

    def __getitem__(self, idx) -> np.ndarray:
        return self.data[idx]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self.q == other.q and self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self) -> int:
        return hash((self.q, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FqMatrix(q={self.q}, shape={self.shape}, data={self.data.tolist()})"

    def to_text(self) -> str:
        return format_matrix(self)


MatrixLike = Union[FqMatrix, np.ndarray]


def _same_q(a: FqMatrix, b: FqMatrix) -> None:
    if a.q != b.q:
        raise InvalidParameters(f"q mismatch: {a.q} vs {b.q}")


def _arr(m: MatrixLike, q: int | None = None) -> tuple[np.ndarray, int]:
    if isinstance(m, FqMatrix):
        return m.data, m.q
    if q is None:
        raise InvalidParameters("q is required for raw arrays")
    return np.asarray(m, dtype=np.int64) % q, q


def rref_array(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an int array mod q (zero rows dropped)."""
    a = np.array(a, dtype=np.int64) % q
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {a.shape}")
    rows, cols = a.shape
    inv = inverse_table(q)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        if a[r, c] != 1:
            a[r] = a[r] * inv[a[r, c]] % q
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % q
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rref(m: FqMatrix) -> tuple[FqMatrix, int, list[int]]:
    """(R, rank, pivots). R keeps the row count of m, zero rows at the bottom."""
    red, piv = rref_array(m.data, m.q)
    full = np.zeros(m.shape, dtype=np.int64)
    full[: len(piv)] = red
    return FqMatrix(m.q, full), len(piv), piv


def rank(m: MatrixLike, q: int | None = None) -> int:
    a, q = _arr(m, q)
    if a.size == 0:
        return 0
    return len(rref_array(a, q)[1])


def kernel_array(a: np.ndarray, q: int) -> np.ndarray:
    """Basis (as rows) of the right kernel {x : a x = 0}."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    red, piv = rref_array(a, q)
    pset = set(piv)
    free = [c for c in range(cols) if c not in pset]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(piv):
            basis[i, p] = (-red[row, f]) % q
    return basis


def kernel(m: FqMatrix) -> FqMatrix:
    return FqMatrix(m.q, kernel_array(m.data, m.q).reshape(-1, m.cols))


@dataclass(frozen=True)
class UniqueSolution:
    x: np.ndarray


@dataclass(frozen=True)
class NoSolution:
    pass


@dataclass(frozen=True)
class Underdetermined:
    particular: np.ndarray
    kernel: np.ndarray


SolveResult = Union[UniqueSolution, NoSolution, Underdetermined]


def solve_array(a: np.ndarray, b: np.ndarray, q: int) -> SolveResult:
    a = np.asarray(a, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64).ravel() % q
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise DimensionMismatch(f"rhs length {b.shape[0]} != rows {rows}")
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    red, piv = rref_array(aug, q)
    if piv and piv[-1] == cols:
        return NoSolution()
    x = np.zeros(cols, dtype=np.int64)
    for row, p in enumerate(piv):
        x[p] = red[row, cols]
    if len(piv) == cols:
        return UniqueSolution(x)
    ker = kernel_array(red[:, :cols], q)
    return Underdetermined(x, ker)


def solve(m: FqMatrix, b: Sequence[int] | np.ndarray) -> SolveResult:
    return solve_array(m.data, np.asarray(b), m.q)


def mat_mul(a: FqMatrix, b: FqMatrix) -> FqMatrix:
    _same_q(a, b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return FqMatrix(a.q, (a.data @ b.data) % a.q)


def mat_pow(a: FqMatrix, e: int) -> FqMatrix:
    if a.rows != a.cols:
        raise DimensionMismatch(f"mat_pow needs a square matrix, got {a.shape}")
    if e < 0:
        raise InvalidParameters("negative exponent")
    q = a.q
    result = np.eye(a.rows, dtype=np.int64)
    base = a.data.copy()
    while e:
        if e & 1:
            result = result @ base % q
        base = base @ base % q
        e >>= 1
    return FqMatrix(q, result)


def sample_uniform(q: int, rows: int, cols: int, rng: np.random.Generator) -> FqMatrix:
    return FqMatrix(q, rng.integers(0, q, size=(rows, cols), dtype=np.int64))


class Echelon:
    """Incrementally grown reduced basis; used for greedy independence filters."""

    def __init__(self, q: int, ambient: int):
        self.q = q
        self.ambient = ambient
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []
        self._inv = inverse_table(q)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.q
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = (v - c * row) % self.q
        return v

    def add(self, v: np.ndarray) -> bool:
        """Insert v; return True iff it was independent of the current span."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        p = int(nz[0])
        v = v * self._inv[v[p]] % self.q
        self.rows.append(v)
        self.pivots.append(p)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def subspace(self) -> FqSubspaceN:
        if not self.rows:
            return FqSubspaceN.zero(self.q, self.ambient)
        return FqSubspaceN.from_rows(self.q, np.array(self.rows), self.ambient)


class FqSubspaceN:
    """Subspace of F_q^N held as its canonical RREF basis (no zero rows)."""

    __slots__ = ("q", "ambient", "basis")

    def __init__(self, q: int, ambient: int, basis: np.ndarray):
        # callers should go through from_rows; basis is assumed canonical here
        basis = np.asarray(basis, dtype=np.int64).reshape(-1, ambient)
        basis.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("FqSubspaceN is immutable")

    @classmethod
    def from_rows(cls, q: int, rows: np.ndarray | Iterable[Sequence[int]], ambient: int | None = None) -> FqSubspaceN:
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, ambient if ambient is not None else arr.shape[0])
        if ambient is None:
            ambient = arr.shape[1]
        if arr.size == 0:
            return cls.zero(q, ambient)
        if arr.shape[1] != ambient:
            raise AmbientMismatch(f"rows of length {arr.shape[1]} in ambient {ambient}")
        red, _ = rref_array(arr, q)
        return cls(q, ambient, red)

    @classmethod
    def zero(cls, q: int, ambient: int) -> FqSubspaceN:
        return cls(q, ambient, np.zeros((0, ambient), dtype=np.int64))

    @classmethod
    def full(cls, q: int, ambient: int) -> FqSubspaceN:
        return cls(q, ambient, np.eye(ambient, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def basis_matrix(self) -> FqMatrix:
        return FqMatrix(self.q, self.basis.reshape(-1, self.ambient))

    def _check(self, other: FqSubspaceN) -> None:
        if self.q != other.q or self.ambient != other.ambient:
            raise AmbientMismatch(f"(q={self.q}, N={self.ambient}) vs (q={other.q}, N={other.ambient})")

    def contains(self, v: Sequence[int] | np.ndarray) -> bool:
        v = np.asarray(v, dtype=np.int64).ravel() % self.q
        if v.shape[0] != self.ambient:
            raise AmbientMismatch(f"vector of length {v.shape[0]} in ambient {self.ambient}")
        if self.dim == 0:
            return not v.any()
        return rank(np.vstack([self.basis, v]), self.q) == self.dim

    def contains_all(self, rows: np.ndarray) -> bool:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.ambient)
        if rows.shape[0] == 0:
            return True
        return rank(np.vstack([self.basis, rows]), self.q) == self.dim

    def issubspace(self, other: FqSubspaceN) -> bool:
        self._check(other)
        return other.contains_all(self.basis)

    def __add__(self, other: FqSubspaceN) -> FqSubspaceN:
        return span_sum(self, other)

    def __and__(self, other: FqSubspaceN) -> FqSubspaceN:
        return span_intersect(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FqSubspaceN):
            return NotImplemented
        return (
            self.q == other.q
            and self.ambient == other.ambient
            and self.basis.shape == other.basis.shape
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self) -> int:
        return hash((self.q, self.ambient, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"FqSubspaceN(q={self.q}, N={self.ambient}, dim={self.dim})"


def row_space(m: FqMatrix) -> FqSubspaceN:
    return FqSubspaceN.from_rows(m.q, m.data, m.cols)


def span_sum(u: FqSubspaceN, v: FqSubspaceN) -> FqSubspaceN:
    u._check(v)
    if v.dim == 0:
        return u
    if u.dim == 0:
        return v
    return FqSubspaceN.from_rows(u.q, np.vstack([u.basis, v.basis]), u.ambient)


def intersect_rows(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Zassenhaus: rows spanning rowspace(a) ∩ rowspace(b), in RREF."""
    n = a.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    top = np.concatenate([a, a], axis=1)
    bot = np.concatenate([b, np.zeros_like(b)], axis=1)
    red, piv = rref_array(np.vstack([top, bot]), q)
    keep = [i for i, p in enumerate(piv) if p >= n]
    if not keep:
        return np.zeros((0, n), dtype=np.int64)
    return rref_array(red[keep, n:], q)[0]


def span_intersect(u: FqSubspaceN, v: FqSubspaceN) -> FqSubspaceN:
    u._check(v)
    return FqSubspaceN(u.q, u.ambient, intersect_rows(u.basis, v.basis, u.q))


def format_matrix(m: FqMatrix) -> str:
    lines = [f"{m.q} {m.rows} {m.cols}"]
    lines += [" ".join(str(int(x)) for x in row) for row in m.data]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> FqMatrix:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise InvalidParameters("empty matrix text")
    head = lines[0].split()
    if len(head) != 3:
        raise InvalidParameters(f"bad header {lines[0]!r}")
    q, rows, cols = (int(x) for x in head)
    body = [[int(x) for x in ln.split()] for ln in lines[1:]]
    if len(body) != rows or any(len(r) != cols for r in body):
        raise DimensionMismatch(f"header says {rows}x{cols}, body disagrees")
    if any(not 0 <= x < q for r in body for x in r):
        raise InvalidParameters("entries must lie in [0, q)")
    return FqMatrix(q, np.array(body, dtype=np.int64).reshape(rows, cols))
