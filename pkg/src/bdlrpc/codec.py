"""BD-LRPC codes: construction, error sampling, syndromes and decoding.

Vectors and matrices over F_{q^m} are integer arrays whose last axis holds
the m coordinates: a length-n vector has shape (n, m) and the parity-check
matrix H has shape (n-k, n, m).

Decoding for a syndrome s of an error of rank r runs in three phases:
  1. expand S = <s> to W_t = V_{alpha,t}.S until dim W_t = (d+t-1) r,
  2. recover the support as W_t ∩ alpha^{-(t+d-2)} W_t,
  3. solve the F_q-linear syndrome equations for the error coordinates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .counting import build_structured_A, mt_rank
from .errors import (
    BdlrpcError,
    DimensionMismatch,
    InvalidParameters,
    RankRetryExhausted,
)
from .field import (
    FieldElement,
    FieldParams,
    ff_inv,
    format_element,
    format_params,
    in_proper_subfield,
    mul_arrays,
    mult_matrix,
    parse_element,
    parse_params,
    power_vectors,
)
from .fqmatrix import (
    Echelon,
    FqMatrix,
    NoSolution,
    UniqueSolution,
    rank,
    rref_array,
    solve_array,
)
from .subspace import Subspace, expand_step, intersect

RETRY_BUDGET = 64


# ---- typed failures ----


class ExpansionFailure(BdlrpcError):
    def __init__(self, t_reached: int, dim_reached: int, reason: str, dims: tuple[int, ...] = ()):
        super().__init__(f"expansion failed at t={t_reached}, dim={dim_reached}: {reason}")
        self.t_reached = t_reached
        self.dim_reached = dim_reached
        self.reason = reason
        self.dims = dims


class SupportFailure(BdlrpcError):
    def __init__(self, dim: int, expected: int):
        super().__init__(f"intersection has dim {dim}, expected {expected}")
        self.dim = dim
        self.expected = expected


class SolveFailure(BdlrpcError):
    NOT_UNIQUE = "NotUnique"
    INCONSISTENT = "Inconsistent"

    def __init__(self, kind: str):
        super().__init__(f"syndrome system: {kind}")
        self.kind = kind


class Status(str, enum.Enum):
    SUCCESS = "Success"
    EXPANSION_FAILURE = "ExpansionFailure"
    SUPPORT_FAILURE = "SupportFailure"
    SOLVE_FAILURE = "SolveFailure"


# ---- parameters and code ----


@dataclass(frozen=True)
class CodeParams:
    field: FieldParams
    n: int
    k: int
    d: int
    alpha: FieldElement

    def __post_init__(self) -> None:
        if not 0 < self.k < self.n:
            raise InvalidParameters(f"need 0 < k < n, got n={self.n}, k={self.k}")
        if self.d < 2:
            raise InvalidParameters(f"d={self.d} must be >= 2")
        if self.d > self.field.m:
            raise InvalidParameters(f"d={self.d} exceeds m={self.field.m}")
        if self.d * (self.n - self.k) < self.n:
            raise InvalidParameters(f"d(n-k) = {self.d * (self.n - self.k)} < n = {self.n}")
        if self.alpha.field != self.field:
            raise InvalidParameters("alpha is not in the code's field")
        if in_proper_subfield(self.alpha):
            raise InvalidParameters("alpha lies in a proper subfield")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def redundancy(self) -> int:
        return self.n - self.k


def make_params(field: FieldParams, n: int, k: int, d: int, alpha: FieldElement | None = None) -> CodeParams:
    """CodeParams with alpha defaulting to the class of x (a root of the modulus),
    which generates the whole field and so avoids every proper subfield."""
    return CodeParams(field, n, k, d, field.gen() if alpha is None else alpha)


@dataclass(frozen=True, eq=False)
class BdlrpcCode:
    params: CodeParams
    H: np.ndarray  # (n-k, n, m)
    G: np.ndarray  # (k, n, m)
    H_parts: np.ndarray  # (d, n-k, n) with H = sum_j alpha^j H_parts[j]

    def entries_support(self) -> Subspace:
        f = self.params.field
        return Subspace.from_vectors(f, self.H.reshape(-1, f.m))


def _ext_inverse(field: FieldParams, v: np.ndarray) -> np.ndarray:
    return ff_inv(FieldElement(field, tuple(int(c) for c in v))).vec


def ext_rref(field: FieldParams, mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """RREF of a matrix over F_{q^m}, shape (rows, cols, m); zero rows dropped."""
    q = field.q
    a = np.array(mat, dtype=np.int64) % q
    rows, cols = a.shape[:2]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if a[i, c].any()]
        if not nz:
            continue
        p = nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        inv = _ext_inverse(field, a[r, c])
        a[r] = mul_arrays(field, a[r], inv)
        for i in range(rows):
            if i != r and a[i, c].any():
                a[i] = (a[i] - mul_arrays(field, a[r], a[i, c])) % q
        pivots.append(c)
        r += 1
    return a[:r], pivots


def ext_rank(field: FieldParams, mat: np.ndarray) -> int:
    return len(ext_rref(field, mat)[1])


def ext_kernel(field: FieldParams, mat: np.ndarray) -> np.ndarray:
    """Rows x with mat x^T = 0, shape (cols - rank, cols, m)."""
    q, m = field.q, field.m
    red, piv = ext_rref(field, mat)
    cols = mat.shape[1]
    pset = set(piv)
    free = [c for c in range(cols) if c not in pset]
    out = np.zeros((len(free), cols, m), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f, 0] = 1
        for row, p in enumerate(piv):
            out[i, p] = (-red[row, f]) % q
    return out


def gen_code(params: CodeParams, rng: np.random.Generator) -> BdlrpcCode:
    """H with entries uniform over V_{alpha,d}, resampled until rank n-k."""
    f = params.field
    q, n, nk, d = f.q, params.n, params.redundancy, params.d
    powers = power_vectors(f, params.alpha, d)  # (d, m)
    for _ in range(RETRY_BUDGET):
        parts = rng.integers(0, q, size=(d, nk, n), dtype=np.int64)
        H = np.einsum("jab,jc->abc", parts, powers) % q
        if ext_rank(f, H) == nk:
            G = ext_kernel(f, H)
            return BdlrpcCode(params, H, G, parts)
    raise RankRetryExhausted(f"no full-rank H after {RETRY_BUDGET} draws")


@dataclass(frozen=True, eq=False)
class ErrorSample:
    r: int
    support: Subspace
    epsilon: np.ndarray  # (r, m) ordered basis of the support
    coords: FqMatrix  # r x n, rank r
    e: np.ndarray  # (n, m)


def gen_error(params: CodeParams, r: int, rng: np.random.Generator) -> ErrorSample:
    f = params.field
    q, m, n = f.q, f.m, params.n
    if r < 0 or r > params.redundancy - 1 or r > m:
        raise InvalidParameters(f"rank r={r} must satisfy 0 <= r <= min(n-k-1, m)")
    if r == 0:
        return ErrorSample(0, Subspace.zero(f), np.zeros((0, m), dtype=np.int64),
                           FqMatrix(q, np.zeros((0, n), dtype=np.int64)), np.zeros((n, m), dtype=np.int64))
    eps = None
    for _ in range(RETRY_BUDGET):
        cand = rng.integers(0, q, size=(r, m), dtype=np.int64)
        if rank(cand, q) == r:
            eps = cand
            break
    if eps is None:
        raise RankRetryExhausted(f"no rank-{r} support after {RETRY_BUDGET} draws")
    coords = None
    for _ in range(RETRY_BUDGET):
        cand = rng.integers(0, q, size=(r, n), dtype=np.int64)
        if rank(cand, q) == r:
            coords = cand
            break
    if coords is None:
        raise RankRetryExhausted(f"no rank-{r} coordinate matrix after {RETRY_BUDGET} draws")
    e = coords.T @ eps % q  # e_j = sum_l coords[l, j] eps_l
    return ErrorSample(r, Subspace.from_vectors(f, eps), eps, FqMatrix(q, coords), e)


def syndrome(code: BdlrpcCode, e: np.ndarray) -> np.ndarray:
    """s = e H^T, returned with shape (n-k, m)."""
    f = code.params.field
    e = np.asarray(e, dtype=np.int64)
    if e.shape != (code.params.n, f.m):
        raise DimensionMismatch(f"error of shape {e.shape}, expected {(code.params.n, f.m)}")
    return mul_arrays(f, code.H, e[None, :, :]).sum(axis=1) % f.q


def rank_weight(field: FieldParams, v: np.ndarray) -> int:
    return rank(np.asarray(v, dtype=np.int64).reshape(-1, field.m), field.q)


# ---- phases ----


@dataclass(frozen=True)
class Expansion:
    t_used: int
    F: Subspace
    dims: tuple[int, ...]  # dim W_1, ..., dim W_{t_used}


def phase1_expand(s: np.ndarray, params: CodeParams, r: int) -> Expansion:
    f = params.field
    d, m = params.d, f.m
    w = Subspace.from_vectors(f, s)
    alpha_mat = mult_matrix(f, params.alpha)
    t_max = (d - 1) * r
    dims = [w.dim]
    t = 1
    while True:
        target = (d + t - 1) * r
        if target > m:
            raise ExpansionFailure(t, w.dim, f"target dimension {target} exceeds m={m}", tuple(dims))
        if w.dim == target:
            return Expansion(t, w, tuple(dims))
        if w.dim > target:
            raise ExpansionFailure(t, w.dim, "dimension overshoots the worst-case target", tuple(dims))
        if t >= t_max:
            raise ExpansionFailure(t, w.dim, f"t would exceed (d-1)r = {t_max}", tuple(dims))
        nxt = expand_step(w, alpha_mat)
        if nxt.dim == w.dim:
            raise ExpansionFailure(t, w.dim, "expansion stalled", tuple(dims))
        w = nxt
        t += 1
        dims.append(w.dim)


def phase2_support(F: Subspace, params: CodeParams, t_used: int, r: int) -> Subspace:
    f = params.field
    shift = ff_inv(params.alpha) ** (t_used + params.d - 2)
    shifted = Subspace.from_vectors(f, F.basis @ mult_matrix(f, shift) % f.q) if F.dim else F
    out = intersect(F, shifted)
    if out.dim != r:
        raise SupportFailure(out.dim, r)
    return out


def syndrome_system(code: BdlrpcCode, basis: np.ndarray) -> np.ndarray:
    """F_q matrix of the map E -> vec(H (eps E)^T); unknown (l, j) at column l*n + j."""
    f = code.params.field
    nk, n = code.params.redundancy, code.params.n
    rr = basis.shape[0]
    # prods[i, j, l] = H_ij * eps_l
    prods = mul_arrays(f, code.H[:, :, None, :], basis[None, None, :, :])
    # rows (i, c), cols (l, j)
    return prods.transpose(0, 3, 2, 1).reshape(nk * f.m, rr * n)


def phase3_solve(code: BdlrpcCode, s: np.ndarray, support: Subspace) -> np.ndarray:
    f = code.params.field
    q, m, n = f.q, f.m, code.params.n
    basis = support.basis
    rr = basis.shape[0]
    if rr == 0:
        if np.asarray(s).any():
            raise SolveFailure(SolveFailure.INCONSISTENT)
        return np.zeros((n, m), dtype=np.int64)
    system = syndrome_system(code, basis)
    res = solve_array(system, np.asarray(s, dtype=np.int64).reshape(-1), q)
    if isinstance(res, NoSolution):
        raise SolveFailure(SolveFailure.INCONSISTENT)
    if not isinstance(res, UniqueSolution):
        raise SolveFailure(SolveFailure.NOT_UNIQUE)
    coords = res.x.reshape(rr, n)
    e = coords.T @ basis % q
    if not np.array_equal(syndrome(code, e), np.asarray(s) % q):  # pragma: no cover - solver guarantees this
        raise SolveFailure(SolveFailure.INCONSISTENT)
    return e


@dataclass(frozen=True, eq=False)
class DecodeOutcome:
    status: Status
    t_used: int = 0
    expanded_dim: int = 0
    recovered_support: Subspace | None = None
    error: np.ndarray | None = None
    dims: tuple[int, ...] = ()
    detail: str = ""
    rank_used: int = 0

    @property
    def ok(self) -> bool:
        return self.status is Status.SUCCESS


def decode(code: BdlrpcCode, s: np.ndarray, r: int) -> DecodeOutcome:
    f = code.params.field
    s = np.asarray(s, dtype=np.int64) % f.q
    if not s.any():
        return DecodeOutcome(Status.SUCCESS, error=np.zeros((code.params.n, f.m), dtype=np.int64),
                             recovered_support=Subspace.zero(f), rank_used=0)
    try:
        exp = phase1_expand(s, code.params, r)
    except ExpansionFailure as exc:
        return DecodeOutcome(Status.EXPANSION_FAILURE, t_used=exc.t_reached, expanded_dim=exc.dim_reached,
                             dims=exc.dims, detail=exc.reason, rank_used=r)
    try:
        sup = phase2_support(exp.F, code.params, exp.t_used, r)
    except SupportFailure as exc:
        return DecodeOutcome(Status.SUPPORT_FAILURE, t_used=exp.t_used, expanded_dim=exp.F.dim,
                             dims=exp.dims, detail=str(exc), rank_used=r)
    try:
        e = phase3_solve(code, s, sup)
    except SolveFailure as exc:
        return DecodeOutcome(Status.SOLVE_FAILURE, t_used=exp.t_used, expanded_dim=exp.F.dim,
                             recovered_support=sup, dims=exp.dims, detail=exc.kind, rank_used=r)
    return DecodeOutcome(Status.SUCCESS, t_used=exp.t_used, expanded_dim=exp.F.dim,
                         recovered_support=sup, error=e, dims=exp.dims, rank_used=r)


def decode_unknown_rank(code: BdlrpcCode, s: np.ndarray, r_max: int | None = None) -> DecodeOutcome:
    """Try candidate ranks in increasing order, starting from ceil(dim S / d)."""
    f = code.params.field
    s = np.asarray(s, dtype=np.int64) % f.q
    dim_s = rank_weight(f, s)
    if dim_s == 0:
        return decode(code, s, 0)
    r_max = code.params.redundancy - 1 if r_max is None else r_max
    last = None
    for r in range(-(-dim_s // code.params.d), r_max + 1):
        last = decode(code, s, r)
        if last.ok:
            return last
    if last is None:
        return DecodeOutcome(Status.EXPANSION_FAILURE, detail="no admissible rank candidate")
    return last


def correct_word(code: BdlrpcCode, y: np.ndarray, r: int) -> tuple[np.ndarray | None, DecodeOutcome]:
    """Return (codeword, outcome); the codeword is None unless decoding succeeded."""
    f = code.params.field
    y = np.asarray(y, dtype=np.int64) % f.q
    out = decode(code, syndrome(code, y), r)
    if not out.ok:
        return None, out
    return (y - out.error) % f.q, out


def encode(code: BdlrpcCode, msg: np.ndarray) -> np.ndarray:
    """Codeword msg G for a message of shape (k, m)."""
    f = code.params.field
    msg = np.asarray(msg, dtype=np.int64)
    return mul_arrays(f, msg[:, None, :], code.G).sum(axis=0) % f.q


# ---- instrumentation ----


@dataclass(frozen=True)
class RankConditionRecord:
    """Rank conditions derived from the known error support.

    ``applicable`` is False when V_{alpha,d}.E is degenerate (dim < d r); the
    X_i decomposition is then undefined and the other fields are unset.
    """

    applicable: bool
    rank_x1: int = 0
    z1_rank_by_t: tuple[int, ...] = ()
    mt_rank_by_t: tuple[int, ...] = ()
    t_condition: int | None = None  # smallest t with both rank conditions, if any
    equality_at_t: bool | None = None  # V_t.S == V_{d+t-1}.E at t_condition
    full_dim_at_t: bool | None = None  # dim V_{d+t-1}.E == (d+t-1) r at t_condition


def decompose_syndrome(code: BdlrpcCode, err: ErrorSample, s: np.ndarray) -> list[np.ndarray] | None:
    """X_1, ..., X_d with s_i = sum_{j,l} X_j[i, l] alpha^(j-1) eps_l, or None if degenerate."""
    p = code.params
    f = p.field
    q, d, r, nk = f.q, p.d, err.r, p.redundancy
    powers = power_vectors(f, p.alpha, d)
    gens = mul_arrays(f, powers[:, None, :], err.epsilon[None, :, :]).reshape(d * r, f.m)
    if rank(gens, q) < d * r:
        return None
    xs = np.zeros((nk, d * r), dtype=np.int64)
    for i in range(nk):
        res = solve_array(gens.T, s[i], q)
        if not isinstance(res, UniqueSolution):  # pragma: no cover - s lies in V_d.E
            return None
        xs[i] = res.x
    return [xs[:, j * r : (j + 1) * r] for j in range(d)]


def expansion_matrix(xs: Sequence[np.ndarray], t: int) -> np.ndarray:
    """Block Toeplitz M_t with block row i holding X_1..X_d starting at block column i."""
    d = len(xs)
    nk, r = xs[0].shape
    out = np.zeros((t * nk, (d + t - 1) * r), dtype=np.int64)
    for i in range(t):
        for j, x in enumerate(xs):
            out[i * nk : (i + 1) * nk, (i + j) * r : (i + j + 1) * r] = x
    return out


def reduced_pair(xs: Sequence[np.ndarray], q: int) -> tuple[FqMatrix, FqMatrix] | None:
    """(Z^(1), A) from X_1..X_d, or None when rank(X_1) < r."""
    x1 = xs[0]
    nk, r = x1.shape
    ech = Echelon(q, r)
    yrows = [i for i in range(nk) if ech.add(x1[i])]
    if len(yrows) < r:
        return None
    zrows = [i for i in range(nk) if i not in set(yrows)]
    y = [x[yrows] for x in xs]
    z = [x[zrows] for x in xs]
    y1_inv = _fq_inverse(y[0], q)
    blocks = [(-y1_inv @ y[i + 1]) % q for i in range(len(xs) - 1)]
    z1 = np.hstack([(z[0] @ blocks[i] + z[i + 1]) % q for i in range(len(xs) - 1)])
    A = build_structured_A([FqMatrix(q, b) for b in blocks])
    return FqMatrix(q, z1.reshape(len(zrows), -1)), A


def _fq_inverse(a: np.ndarray, q: int) -> np.ndarray:
    n = a.shape[0]
    red, piv = rref_array(np.hstack([a, np.eye(n, dtype=np.int64)]), q)
    if piv[:n] != list(range(n)) or len(piv) < n:  # pragma: no cover - caller checks rank
        raise InvalidParameters("matrix is singular")
    return red[:, n:]


def instrument(code: BdlrpcCode, err: ErrorSample, s: np.ndarray) -> RankConditionRecord:
    p = code.params
    f = p.field
    q, d, r = f.q, p.d, err.r
    xs = decompose_syndrome(code, err, s)
    if xs is None or r == 0:
        return RankConditionRecord(applicable=False)
    rank_x1 = rank(xs[0], q)
    t_max = max(1, (d - 1) * r)
    mts = tuple(rank(expansion_matrix(xs, t), q) for t in range(1, t_max + 1))
    pair = reduced_pair(xs, q)
    if pair is None:
        return RankConditionRecord(True, rank_x1, (), mts, None)
    z1, A = pair
    if z1.rows == 0:
        zr = tuple(0 for _ in range(t_max))
    else:
        zr = tuple(mt_rank(z1, A, t) for t in range(1, t_max + 1))
    t_cond = next((t for t in range(1, t_max + 1) if zr[t - 1] == (d - 1) * r), None)
    eq = full = None
    if t_cond is not None:
        alpha_mat = mult_matrix(f, p.alpha)
        w = Subspace.from_vectors(f, s)
        for _ in range(t_cond - 1):
            w = expand_step(w, alpha_mat)
        v = err.support
        for _ in range(d + t_cond - 2):
            v = expand_step(v, alpha_mat)
        eq = w == v
        full = v.dim == (d + t_cond - 1) * r
    return RankConditionRecord(True, rank_x1, zr, mts, t_cond, eq, full)


# ---- text bundle ----


def format_code(code: BdlrpcCode) -> str:
    p = code.params
    lines = [
        f"field {format_params(p.field)}",
        f"code n={p.n};k={p.k};d={p.d}",
        f"alpha {format_element(p.alpha)}",
    ]
    for row in code.H:
        lines.append(" ".join(",".join(str(int(c)) for c in ent) for ent in row))
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> BdlrpcCode:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 3 or not lines[0].startswith("field ") or not lines[1].startswith("code "):
        raise InvalidParameters("malformed code bundle")
    f = parse_params(lines[0][6:])
    kv = dict(part.split("=") for part in lines[1][5:].split(";"))
    n, k, d = int(kv["n"]), int(kv["k"]), int(kv["d"])
    alpha = parse_element(f, lines[2][6:])
    params = CodeParams(f, n, k, d, alpha)
    rows = lines[3:]
    if len(rows) != n - k:
        raise DimensionMismatch(f"expected {n - k} rows of H, got {len(rows)}")
    H = np.array([[parse_element(f, ent).coeffs for ent in row.split()] for row in rows], dtype=np.int64)
    if H.shape != (n - k, n, f.m):
        raise DimensionMismatch(f"H has shape {H.shape}")
    powers = power_vectors(f, alpha, d)
    parts = np.zeros((d, n - k, n), dtype=np.int64)
    for i in range(n - k):
        for j in range(n):
            res = solve_array(powers.T, H[i, j], f.q)
            if not isinstance(res, UniqueSolution):
                raise InvalidParameters(f"H[{i},{j}] is not in V_(alpha,d)")
            parts[:, i, j] = res.x
    if ext_rank(f, H) != n - k:
        raise InvalidParameters("H does not have full rank")
    return BdlrpcCode(params, H, ext_kernel(f, H), parts)
