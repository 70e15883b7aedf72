"""Arithmetic in F_q (q prime) and its extension F_{q^m}.

An element of F_{q^m} is a length-m coefficient vector over F_q with respect
to the power basis 1, x, ..., x^{m-1} modulo a monic irreducible polynomial.
Besides the scalar ``FieldElement`` API there are batch helpers that work on
integer arrays of shape (..., m); the codec uses those on hot paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import poly
from .errors import (
    DivisionByZero,
    FieldMismatch,
    InvalidParameters,
    LengthMismatch,
    NotPrime,
    ReducibleModulus,
    SearchExhausted,
)

# Random monic polynomials of degree m are irreducible with probability about
# 1/m, so this many draws per unit of degree leaves a negligible miss chance.
SEARCH_DRAWS_PER_DEGREE = 64


@dataclass(frozen=True)
class FieldParams:
    q: int
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if not poly.is_prime(self.q):
            raise NotPrime(f"q={self.q} is not prime")
        if self.m < 1:
            raise InvalidParameters(f"extension degree m={self.m} must be >= 1")
        mod = tuple(int(c) % self.q for c in self.modulus)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise InvalidParameters(f"modulus must be monic of degree {self.m}")
        object.__setattr__(self, "modulus", mod)
        if not poly.is_irreducible(mod, self.q):
            raise ReducibleModulus(f"modulus {mod} is reducible over F_{self.q}")

    @property
    def order(self) -> int:
        return self.q**self.m

    @cached_property
    def reduction(self) -> np.ndarray:
        """(2m-1) x m matrix whose row j is x^j reduced mod the modulus."""
        q, m = self.q, self.m
        red = np.zeros((2 * m - 1, m), dtype=np.int64)
        red[:m] = np.eye(m, dtype=np.int64)
        low = (-np.array(self.modulus[:m], dtype=np.int64)) % q  # x^m = low
        for j in range(m, 2 * m - 1):
            prev = red[j - 1]
            cur = np.zeros(m, dtype=np.int64)
            cur[1:] = prev[:-1]
            cur = (cur + prev[-1] * low) % q
            red[j] = cur
        return red

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.m)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, (1,) + (0,) * (self.m - 1))

    def gen(self) -> FieldElement:
        """The class of x, i.e. a root of the modulus."""
        if self.m == 1:
            return FieldElement(self, ((-self.modulus[0]) % self.q,))
        return FieldElement(self, (0, 1) + (0,) * (self.m - 2))

    def element(self, coeffs: Iterable[int]) -> FieldElement:
        return vec_to_elem(self, coeffs)

    def random_element(self, rng: np.random.Generator) -> FieldElement:
        return FieldElement(self, tuple(int(c) for c in rng.integers(0, self.q, self.m)))

    def __str__(self) -> str:
        return format_params(self)


@dataclass(frozen=True)
class FieldElement:
    field: FieldParams
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.field.m:
            raise LengthMismatch(f"expected {self.field.m} coefficients, got {len(self.coeffs)}")

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: FieldElement) -> FieldElement:
        return ff_add(self, other)

    def __sub__(self, other: FieldElement) -> FieldElement:
        return ff_sub(self, other)

    def __neg__(self) -> FieldElement:
        q = self.field.q
        return FieldElement(self.field, tuple((-c) % q for c in self.coeffs))

    def __mul__(self, other: FieldElement) -> FieldElement:
        return ff_mul(self, other)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return ff_mul(self, ff_inv(other))

    def __pow__(self, e: int) -> FieldElement:
        return ff_pow(self, e)

    def __str__(self) -> str:
        return format_element(self)


def make_field(
    q: int,
    m: int,
    modulus: Sequence[int] | None = None,
    rng: np.random.Generator | int | None = 0,
) -> FieldParams:
    """Validate (q, m, modulus) or search for a monic irreducible modulus.

    The search draws uniform monic polynomials of degree m from ``rng`` (a
    Generator or an integer seed) and keeps the first irreducible one.
    """
    if not poly.is_prime(q):
        raise NotPrime(f"q={q} is not prime")
    if m < 1:
        raise InvalidParameters(f"extension degree m={m} must be >= 1")
    if modulus is not None:
        return FieldParams(q, m, tuple(int(c) for c in modulus))
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    for _ in range(SEARCH_DRAWS_PER_DEGREE * m):
        low = tuple(int(c) for c in gen.integers(0, q, m))
        cand = low + (1,)
        if poly.is_irreducible(cand, q):
            return FieldParams(q, m, cand)
    raise SearchExhausted(f"no irreducible of degree {m} over F_{q} found")


def _check_same(a: FieldElement, b: FieldElement) -> None:
    if a.field != b.field:
        raise FieldMismatch("elements belong to different fields")


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    q = a.field.q
    return FieldElement(a.field, tuple((x + y) % q for x, y in zip(a.coeffs, b.coeffs)))


def ff_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    q = a.field.q
    return FieldElement(a.field, tuple((x - y) % q for x, y in zip(a.coeffs, b.coeffs)))


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    f = a.field
    out = mul_arrays(f, a.vec, b.vec)
    return FieldElement(f, tuple(int(c) for c in out))


def ff_inv(a: FieldElement) -> FieldElement:
    if a.is_zero():
        raise DivisionByZero("zero has no inverse")
    f = a.field
    g, s, _ = poly.xgcd(a.coeffs, f.modulus, f.q)
    # g == 1 because the modulus is irreducible and a != 0
    return _from_poly(f, poly.mod(s, f.modulus, f.q))


def ff_pow(a: FieldElement, e: int) -> FieldElement:
    f = a.field
    if e < 0:
        a = ff_inv(a)
        e = -e
    if not a.is_zero():
        e %= f.order - 1
        if e == 0:
            return f.one
    elif e == 0:
        return f.one
    result = f.one
    base = a
    while e:
        if e & 1:
            result = ff_mul(result, base)
        base = ff_mul(base, base)
        e >>= 1
    return result


def frobenius(a: FieldElement, times: int = 1) -> FieldElement:
    """a^(q^times)."""
    for _ in range(times):
        a = ff_pow(a, a.field.q)
    return a


def in_proper_subfield(a: FieldElement) -> bool:
    """True iff a lies in F_{q^m'} for some proper divisor m' of m."""
    m = a.field.m
    for p in poly.prime_factors(m):
        if frobenius(a, m // p) == a:
            return True
    return False


def elem_to_vec(a: FieldElement) -> np.ndarray:
    return a.vec


def vec_to_elem(field: FieldParams, v: Iterable[int]) -> FieldElement:
    vals = [int(c) % field.q for c in v]
    if len(vals) != field.m:
        raise LengthMismatch(f"vector of length {len(vals)} for m={field.m}")
    return FieldElement(field, tuple(vals))


def _from_poly(field: FieldParams, coeffs: Sequence[int]) -> FieldElement:
    """Element from a reduced polynomial (length <= m, padded with zeros)."""
    vals = list(coeffs) + [0] * (field.m - len(coeffs))
    return FieldElement(field, tuple(vals))


# ---- batch helpers on (..., m) integer arrays ----


def mul_arrays(field: FieldParams, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product of broadcastable arrays of field vectors."""
    q, m = field.q, field.m
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    a = np.broadcast_to(a, shape + (m,))
    b = np.broadcast_to(b, shape + (m,))
    full = np.zeros(shape + (2 * m - 1,), dtype=np.int64)
    for i in range(m):
        full[..., i : i + m] += a[..., i : i + 1] * b
    full %= q
    return (full @ field.reduction) % q


def mult_matrix(field: FieldParams, beta: np.ndarray | FieldElement) -> np.ndarray:
    """M with vec(beta * a) = vec(a) @ M (row i is beta * x^i)."""
    m = field.m
    bv = beta.vec if isinstance(beta, FieldElement) else np.asarray(beta, dtype=np.int64)
    shifted = np.zeros((m, 2 * m - 1), dtype=np.int64)
    for i in range(m):
        shifted[i, i : i + m] = bv
    return (shifted @ field.reduction) % field.q


def power_vectors(field: FieldParams, alpha: FieldElement, count: int) -> np.ndarray:
    """Rows vec(alpha^0), ..., vec(alpha^(count-1))."""
    out = np.zeros((count, field.m), dtype=np.int64)
    if count == 0:
        return out
    out[0, 0] = 1
    mat = mult_matrix(field, alpha)
    for i in range(1, count):
        out[i] = out[i - 1] @ mat % field.q
    return out


# ---- text formats ----


def format_element(a: FieldElement) -> str:
    return ",".join(str(c) for c in a.coeffs)


def parse_element(field: FieldParams, text: str) -> FieldElement:
    parts = [p for p in text.strip().split(",") if p.strip() != ""]
    return vec_to_elem(field, [int(p) for p in parts])


def format_params(field: FieldParams) -> str:
    mod = ",".join(str(c) for c in field.modulus)
    return f"q={field.q};m={field.m};mod={mod}"


def parse_params(text: str) -> FieldParams:
    kv = {}
    for part in text.strip().split(";"):
        if not part:
            continue
        key, _, val = part.partition("=")
        kv[key.strip()] = val.strip()
    try:
        q, m = int(kv["q"]), int(kv["m"])
        mod = tuple(int(c) for c in kv["mod"].split(","))
    except (KeyError, ValueError) as exc:
        raise InvalidParameters(f"cannot parse field params from {text!r}") from exc
    return FieldParams(q, m, mod)
