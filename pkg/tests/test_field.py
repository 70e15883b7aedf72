from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdlrpc import poly
from bdlrpc.errors import DivisionByZero, FieldMismatch, LengthMismatch, NotPrime, ReducibleModulus, InvalidParameters
from bdlrpc.field import (
    elem_to_vec,
    ff_add,
    ff_inv,
    ff_mul,
    ff_pow,
    format_element,
    format_params,
    frobenius,
    in_proper_subfield,
    make_field,
    mul_arrays,
    mult_matrix,
    parse_element,
    parse_params,
    vec_to_elem,
)
from bdlrpc.fqmatrix import rank
from oracles import is_irreducible_trial, poly_mulmod

CONFIGS = [(2, 1), (2, 3), (2, 4), (2, 8), (3, 2), (3, 5), (5, 3), (7, 2), (2, 31)]


@pytest.fixture(scope="module")
def fields():
    return {qm: make_field(*qm, rng=11) for qm in CONFIGS}


# ---- polynomials ----


def test_poly_divmod_roundtrip():
    q = 5
    a = (3, 0, 4, 1, 2)
    b = (1, 2, 3)
    quo, rem = poly.divmod_poly(a, b, q)
    assert poly.add(poly.mul(quo, b, q), rem, q) == poly.trim(a, q)
    assert len(rem) < len(b)


def test_poly_gcd_is_monic_and_divides():
    q = 3
    g = poly.gcd(poly.mul((1, 1), (1, 0, 1), q), poly.mul((1, 1), (0, 2), q), q)
    assert g == (1, 1)
    assert poly.gcd((5,), (0, 1), 7) == (1,)


def test_poly_xgcd_bezout():
    q = 7
    a, b = (1, 2, 3, 4), (6, 0, 1)
    g, s, t = poly.xgcd(a, b, q)
    assert poly.add(poly.mul(s, a, q), poly.mul(t, b, q), q) == g


@pytest.mark.parametrize("q,deg", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_rabin_matches_trial_division(q, deg):
    import itertools

    for low in itertools.product(range(q), repeat=deg):
        f = list(low) + [1]
        assert poly.is_irreducible(f, q) == is_irreducible_trial(f, q), f


# ---- make_field ----


def test_make_field_degree_one():
    f = make_field(2, 1)
    assert f.m == 1 and len(f.modulus) == 2 and f.modulus[-1] == 1


def test_make_field_accepts_x3_x_1():
    f = make_field(2, 3, (1, 1, 0, 1))
    assert f.modulus == (1, 1, 0, 1)


def test_make_field_rejects_reducible():
    with pytest.raises(ReducibleModulus):
        make_field(2, 2, (1, 0, 1))


def test_make_field_rejects_composite_q():
    with pytest.raises(NotPrime):
        make_field(4, 2)


def test_make_field_rejects_non_monic():
    with pytest.raises(InvalidParameters):
        make_field(3, 2, (1, 0, 2))


def test_make_field_search_is_seeded():
    a = make_field(2, 13, rng=5)
    b = make_field(2, 13, rng=5)
    assert a == b
    assert is_irreducible_trial(a.modulus, 2)


# ---- arithmetic ----


def test_mul_x_times_x2(f8):
    x = f8.gen()
    assert ff_mul(x, ff_mul(x, x)) == vec_to_elem(f8, [1, 1, 0])


def test_mul_matches_schoolbook(fields):
    rng = np.random.default_rng(0)
    for f in fields.values():
        for _ in range(20):
            a, b = f.random_element(rng), f.random_element(rng)
            assert list(ff_mul(a, b).coeffs) == poly_mulmod(a.coeffs, b.coeffs, f.modulus, f.q)


def test_identity_and_order(fields):
    rng = np.random.default_rng(1)
    for f in fields.values():
        for _ in range(10):
            a = f.random_element(rng)
            assert ff_mul(a, f.one) == a
            if not a.is_zero():
                assert ff_pow(a, f.q**f.m - 1) == f.one
                assert ff_mul(a, ff_inv(a)) == f.one
                assert ff_pow(a, -1) == ff_inv(a)


def test_field_axioms_random(fields):
    rng = np.random.default_rng(2)
    for f in fields.values():
        for _ in range(15):
            a, b, c = (f.random_element(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a and a + b == b + a
            assert a - a == f.zero


def test_frobenius_additive(fields):
    rng = np.random.default_rng(3)
    for f in fields.values():
        for _ in range(10):
            a, b = f.random_element(rng), f.random_element(rng)
            assert ff_pow(a + b, f.q) == ff_pow(a, f.q) + ff_pow(b, f.q)


def test_inverse_of_zero(f8):
    with pytest.raises(DivisionByZero):
        ff_inv(f8.zero)


def test_field_mismatch(f8, f16):
    with pytest.raises(FieldMismatch):
        ff_add(f8.one, f16.one)


def test_batch_mul_matches_scalar(f2_31):
    rng = np.random.default_rng(4)
    a = rng.integers(0, 2, size=(5, 31))
    b = rng.integers(0, 2, size=(5, 31))
    got = mul_arrays(f2_31, a, b)
    for i in range(5):
        assert tuple(got[i]) == ff_mul(vec_to_elem(f2_31, a[i]), vec_to_elem(f2_31, b[i])).coeffs
    beta = vec_to_elem(f2_31, b[0])
    assert np.array_equal(a @ mult_matrix(f2_31, beta) % 2, mul_arrays(f2_31, a, b[0]))


# ---- subfields ----


def test_one_in_prime_subfield(fields):
    for (q, m), f in fields.items():
        assert in_proper_subfield(f.one) == (m > 1)


def test_primitive_of_f16_not_in_subfield(f16):
    x = f16.gen()
    assert x ** 2 != x and frobenius(x, 2) != x
    assert not in_proper_subfield(x)


def test_order3_element_in_f4(f16):
    a = f16.gen() ** 5  # order 15/5 = 3
    assert a ** 3 == f16.one and a != f16.one
    assert in_proper_subfield(a)


def test_subfield_count_f16(f16):
    # the proper subfields of F_16 are F_2 and F_4, together 4 elements
    import itertools

    inside = sum(in_proper_subfield(vec_to_elem(f16, v)) for v in itertools.product(range(2), repeat=4))
    assert inside == 4


def test_outside_subfield_powers_independent(fields):
    rng = np.random.default_rng(5)
    for f in fields.values():
        for _ in range(5):
            a = f.random_element(rng)
            if in_proper_subfield(a):
                continue
            pows = np.array([ff_pow(a, i).coeffs for i in range(f.m)])
            assert rank(pows, f.q) == f.m


# ---- vectors and text ----


def test_vec_roundtrip_and_linearity(f2_31):
    rng = np.random.default_rng(6)
    a, b = f2_31.random_element(rng), f2_31.random_element(rng)
    assert not elem_to_vec(f2_31.zero).any()
    assert vec_to_elem(f2_31, elem_to_vec(a)) == a
    assert np.array_equal(elem_to_vec(a + b), (elem_to_vec(a) + elem_to_vec(b)) % 2)


def test_vec_length_mismatch(f8):
    with pytest.raises(LengthMismatch):
        vec_to_elem(f8, [1, 0])


def test_text_formats(f8):
    a = vec_to_elem(f8, [1, 0, 1])
    assert format_element(a) == "1,0,1"
    assert parse_element(f8, "1,0,1") == a
    assert format_params(f8) == "q=2;m=3;mod=1,1,0,1"
    assert parse_params("q=2;m=3;mod=1,1,0,1") == f8


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=3, max_size=3), st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_property_inverse_q7(av, bv):
    f = make_field(7, 3, rng=0)
    a, b = vec_to_elem(f, av), vec_to_elem(f, bv)
    if not b.is_zero():
        assert (a / b) * b == a
