"""Univariate polynomials over a prime field F_q.

Coefficients are stored lowest degree first. The zero polynomial is the
empty tuple and has degree -1 (used as the "minus infinity" sentinel).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BothZero, DivisionByZero, FieldMismatch

Coeffs = tuple[int, ...]


def trim(coeffs: Iterable[int], q: int) -> Coeffs:
    c = [int(x) % q for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(a: Sequence[int]) -> int:
    return len(a) - 1


def add(a: Sequence[int], b: Sequence[int], q: int) -> Coeffs:
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return trim(out, q)


def sub(a: Sequence[int], b: Sequence[int], q: int) -> Coeffs:
    return add(a, [-x for x in b], q)


def scale(a: Sequence[int], c: int, q: int) -> Coeffs:
    return trim([x * c for x in a], q)


def mul(a: Sequence[int], b: Sequence[int], q: int) -> Coeffs:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out, q)


def divmod_poly(a: Sequence[int], b: Sequence[int], q: int) -> tuple[Coeffs, Coeffs]:
    b = trim(b, q)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = list(trim(a, q))
    inv_lead = pow(b[-1], -1, q)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (), tuple(rem)
    quo = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i] * inv_lead % q
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                rem[i - db + j] = (rem[i - db + j] - c * b[j]) % q
    return trim(quo, q), trim(rem[:db], q)


def mod(a: Sequence[int], b: Sequence[int], q: int) -> Coeffs:
    return divmod_poly(a, b, q)[1]


def monic(a: Sequence[int], q: int) -> Coeffs:
    a = trim(a, q)
    if not a:
        return a
    return scale(a, pow(a[-1], -1, q), q)


def gcd(a: Sequence[int], b: Sequence[int], q: int) -> Coeffs:
    """Monic gcd by Euclid. Raises BothZero when both inputs vanish."""
    a, b = trim(a, q), trim(b, q)
    if not a and not b:
        raise BothZero("gcd of two zero polynomials is undefined")
    while b:
        a, b = b, mod(a, b, q)
    return monic(a, q)


def xgcd(a: Sequence[int], b: Sequence[int], q: int) -> tuple[Coeffs, Coeffs, Coeffs]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = trim(a, q), trim(b, q)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        quo, rem = divmod_poly(r0, r1, q)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1, q), q)
        t0, t1 = t1, sub(t0, mul(quo, t1, q), q)
    if not r0:
        return (), s0, t0
    inv = pow(r0[-1], -1, q)
    return scale(r0, inv, q), scale(s0, inv, q), scale(t0, inv, q)


def powmod(a: Sequence[int], e: int, f: Sequence[int], q: int) -> Coeffs:
    result: Coeffs = (1,)
    base = mod(a, f, q)
    while e > 0:
        if e & 1:
            result = mod(mul(result, base, q), f, q)
        base = mod(mul(base, base, q), f, q)
        e >>= 1
    return mod(result, f, q)


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def is_irreducible(f: Sequence[int], q: int) -> bool:
    """Rabin's test for a polynomial of degree m >= 1 over F_q."""
    f = trim(f, q)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = (0, 1)

    def frob_power(i: int) -> Coeffs:
        h = mod(x, f, q)
        for _ in range(i):
            h = powmod(h, q, f, q)
        return h

    if sub(frob_power(m), mod(x, f, q), q):
        return False
    for p in prime_factors(m):
        h = sub(frob_power(m // p), x, q)
        if len(gcd(f, h, q)) > 1:
            return False
    return True


@dataclass(frozen=True)
class FqPolynomial:
    """A polynomial over F_q, canonical (no trailing zero coefficients)."""

    q: int
    coeffs: Coeffs

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", trim(self.coeffs, self.q))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: FqPolynomial) -> None:
        if other.q != self.q:
            raise FieldMismatch(f"q={self.q} vs q={other.q}")

    def __add__(self, other: FqPolynomial) -> FqPolynomial:
        self._check(other)
        return FqPolynomial(self.q, add(self.coeffs, other.coeffs, self.q))

    def __sub__(self, other: FqPolynomial) -> FqPolynomial:
        self._check(other)
        return FqPolynomial(self.q, sub(self.coeffs, other.coeffs, self.q))

    def __mul__(self, other: FqPolynomial) -> FqPolynomial:
        self._check(other)
        return FqPolynomial(self.q, mul(self.coeffs, other.coeffs, self.q))

    def __divmod__(self, other: FqPolynomial) -> tuple[FqPolynomial, FqPolynomial]:
        self._check(other)
        quo, rem = divmod_poly(self.coeffs, other.coeffs, self.q)
        return FqPolynomial(self.q, quo), FqPolynomial(self.q, rem)

    def __mod__(self, other: FqPolynomial) -> FqPolynomial:
        return divmod(self, other)[1]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)


def poly_gcd(a: FqPolynomial, b: FqPolynomial) -> FqPolynomial:
    """Monic gcd of two polynomials over the same F_q."""
    a._check(b)
    return FqPolynomial(a.q, gcd(a.coeffs, b.coeffs, a.q))
