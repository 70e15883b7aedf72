from __future__ import annotations

import numpy as np
import pytest

from bdlrpc.errors import DegreeOutOfRange, FieldMismatch, ZeroScalar
from bdlrpc.field import ff_inv, ff_pow, in_proper_subfield
from bdlrpc.subspace import (
    Subspace,
    bounded_degree,
    contains,
    equals,
    expand_step,
    intersect,
    is_subspace,
    parse_subspace,
    product,
    scalar_mul,
    span_of,
)
from bdlrpc.field import mult_matrix
from oracles import span_set


def _random_subspace(f, dim, rng):
    while True:
        S = span_of([f.random_element(rng) for _ in range(dim)], f)
        if S.dim == dim:
            return S


def test_span_of_zero(f8):
    assert span_of([f8.zero]).dim == 0


def test_span_of_dependent(f8):
    a = f8.gen()
    assert span_of([f8.one, a, f8.one + a]).dim == 2


def test_span_of_error_coordinates(f2_31):
    rng = np.random.default_rng(0)
    eps = [f2_31.random_element(rng) for _ in range(3)]
    E = np.array([[1, 0, 0, 1, 1], [0, 1, 0, 1, 0], [0, 0, 1, 0, 1]])
    e = [sum((eps[l] for l in range(3) if E[l, j]), f2_31.zero) for j in range(5)]
    assert span_of(e).dim == 3 == span_of(eps).dim


def test_bounded_degree_small(f8):
    assert bounded_degree(f8.gen(), 1) == span_of([f8.one])
    assert bounded_degree(f8.gen(), 2).dim == 2


def test_bounded_degree_full(f2_31, f16):
    for f in (f16, f2_31):
        assert bounded_degree(f.gen(), f.m) == Subspace.whole(f)


def test_bounded_degree_range(f8):
    with pytest.raises(DegreeOutOfRange):
        bounded_degree(f8.gen(), 4)
    with pytest.raises(DegreeOutOfRange):
        bounded_degree(f8.gen(), 0)


def test_product_identity_and_commutative(f2_31):
    rng = np.random.default_rng(1)
    V = _random_subspace(f2_31, 3, rng)
    U = _random_subspace(f2_31, 2, rng)
    assert product(span_of([f2_31.one]), V) == V
    assert product(U, V) == product(V, U)


def test_product_generic_dimension(f2_31):
    rng = np.random.default_rng(2)
    full = 0
    for _ in range(20):
        U, V = _random_subspace(f2_31, 2, rng), _random_subspace(f2_31, 3, rng)
        full += product(U, V).dim == 6
    assert full >= 18


def test_product_monotone(f2_31):
    rng = np.random.default_rng(3)
    U = _random_subspace(f2_31, 2, rng)
    U2 = U + span_of([f2_31.random_element(rng)])
    V = _random_subspace(f2_31, 2, rng)
    assert is_subspace(product(U, V), product(U2, V))


def test_bounded_degree_products(f2_31, f16):
    for f in (f16, f2_31):
        a = f.gen()
        assert not in_proper_subfield(a)
        for i in range(1, 5):
            for j in range(1, 5):
                if i + j - 1 <= f.m:
                    assert product(bounded_degree(a, i), bounded_degree(a, j)) == bounded_degree(a, i + j - 1)


def test_bounded_degree_chain(f16):
    a = f16.gen()
    mat = mult_matrix(f16, a)
    for i in range(1, f16.m):
        V = bounded_degree(a, i)
        assert expand_step(V, mat) == bounded_degree(a, i + 1)
        assert V + scalar_mul(a, V) == bounded_degree(a, i + 1)


def test_product_recursion_with_support(f2_31):
    rng = np.random.default_rng(4)
    a = f2_31.gen()
    E = _random_subspace(f2_31, 3, rng)
    for i in range(1, 5):
        lhs = product(bounded_degree(a, i + 1), E)
        W = product(bounded_degree(a, i), E)
        assert lhs == W + scalar_mul(a, W)


def test_dims_of_bounded_degree(f2_31):
    a = f2_31.gen()
    for d in range(1, f2_31.m + 1):
        assert bounded_degree(a, d).dim == d


def test_scalar_mul(f2_31):
    rng = np.random.default_rng(5)
    V = _random_subspace(f2_31, 4, rng)
    b = f2_31.random_element(rng)
    assert scalar_mul(f2_31.one, V) == V
    assert scalar_mul(b, Subspace.zero(f2_31)).dim == 0
    W = scalar_mul(b, V)
    assert W.dim == V.dim
    assert scalar_mul(ff_inv(b), W) == V
    a = f2_31.gen()
    assert is_subspace(scalar_mul(a, bounded_degree(a, 3)), bounded_degree(a, 4))
    with pytest.raises(ZeroScalar):
        scalar_mul(f2_31.zero, V)


def test_intersect_contains_equals(f2_31):
    a = f2_31.gen()
    V = bounded_degree(a, 3)
    assert intersect(V, V) == V
    assert contains(V, ff_pow(a, 2))
    assert not contains(V, ff_pow(a, 3))
    assert equals(V, bounded_degree(a, 3))


def test_intersection_recovers_support(f2_31):
    rng = np.random.default_rng(6)
    a = f2_31.gen()
    d = 2
    for t in (1, 2):
        E = _random_subspace(f2_31, 2, rng)
        F = product(bounded_degree(a, d + t - 1), E)
        sh = scalar_mul(ff_pow(ff_inv(a), t + d - 2), F)
        X = intersect(F, sh)
        assert is_subspace(E, X)
        assert X == E


def test_intersect_matches_enumeration(f8):
    rng = np.random.default_rng(7)
    for _ in range(20):
        U = span_of([f8.random_element(rng) for _ in range(2)], f8)
        V = span_of([f8.random_element(rng) for _ in range(2)], f8)
        I = intersect(U, V)
        assert span_set(I.basis.tolist(), 2, 3) == span_set(U.basis.tolist(), 2, 3) & span_set(V.basis.tolist(), 2, 3)


def test_field_mismatch(f8, f16):
    with pytest.raises(FieldMismatch):
        product(Subspace.whole(f8), Subspace.whole(f16))


def test_text_dump_roundtrip(f2_31):
    V = bounded_degree(f2_31.gen(), 3)
    assert parse_subspace(f2_31, V.to_text()) == V
    assert len(V.to_text().splitlines()) == 3
