from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agdistill.gf2e import (
    FieldElement,
    FieldMismatchError,
    FieldSpec,
    UnsupportedFieldError,
    fe_add,
    fe_inv,
    fe_mul,
    fe_pow,
    fe_root7,
    fe_sqrt,
    get_field,
    is_irreducible,
    multinomial7_check,
    multinomial7_check_ints,
    poly_element,
    trace,
)

SUPPORTED = [5, 8, 10]


def test_default_moduli():
    assert get_field(10).modulus == (1 << 10) | (1 << 3) | 1
    assert get_field(5).modulus == (1 << 5) | (1 << 2) | 1
    assert get_field(8).modulus == 0x11D
    assert all(is_irreducible(get_field(s).modulus) for s in range(1, 13))


def test_reducible_modulus_rejected():
    with pytest.raises(UnsupportedFieldError):
        FieldSpec(4, 0b10101)  # (x^2+x+1)^2
    with pytest.raises(UnsupportedFieldError):
        FieldSpec(4, 0b11000)  # constant term missing


def test_worked_product():
    F = get_field(10)
    a = FieldElement(F, poly_element(0, 6, 8))
    b = FieldElement(F, poly_element(1, 5))
    assert fe_mul(a, b).bits == poly_element(3, 4, 5, 6, 7, 9)


def test_add_trivial():
    F = get_field(10)
    a = FieldElement(F, poly_element(0, 3))
    assert fe_add(a, a).bits == 0
    assert fe_add(a, FieldElement(F, 0)) == a
    assert fe_add(a, FieldElement(F, poly_element(3))).bits == 1


def test_mismatched_fields():
    with pytest.raises(FieldMismatchError):
        fe_add(FieldElement(get_field(5), 1), FieldElement(get_field(10), 1))


def test_inverse():
    F = get_field(10)
    alpha = FieldElement(F, 2)
    assert fe_inv(FieldElement(F, 1)).bits == 1
    assert fe_inv(alpha) == fe_pow(alpha, F.q - 2)
    assert fe_mul(alpha, fe_inv(alpha)).bits == 1
    with pytest.raises(ZeroDivisionError):
        fe_inv(FieldElement(F, 0))


@pytest.mark.parametrize("s", SUPPORTED)
def test_lagrange_by_iterated_multiplication(s):
    F = get_field(s)
    rng = np.random.default_rng(s)
    for a in F.random(rng, 5, nonzero=True):
        acc = 1
        for _ in range(F.q - 1):
            acc = F.mul_int(acc, int(a))
        assert acc == 1
        assert F.pow_int(int(a), 0) == 1 and F.pow_int(int(a), 1) == a


@pytest.mark.parametrize("s", SUPPORTED)
def test_sqrt(s):
    F = get_field(s)
    assert F.sqrt(0) == 0 and F.sqrt(1) == 1
    allv = np.arange(F.q)
    r = F.sqrt(allv)
    assert np.array_equal(F.mul(r, r), allv)
    assert np.array_equal(r, F.pow(allv, F.q // 2))


def test_root7_exponent_oracle():
    F = get_field(10)
    # independent oracle: modular inverse from the standard library
    assert F.root7_exponent == pow(7, -1, 1023) == 877
    assert 7 * 877 == 6 * 1023 + 1
    rng = np.random.default_rng(0)
    a = F.random(rng, 1000)
    assert np.array_equal(F.pow(F.root7(a), 7), a)
    assert F.root7(0) == 0 and F.root7(1) == 1


def test_root7_exhaustive_f32():
    F = get_field(5)
    allv = np.arange(32)
    assert np.array_equal(F.root7(F.pow(allv, 7)), allv)


@pytest.mark.parametrize("s", [3, 6, 9, 12])
def test_root7_unsupported(s):
    with pytest.raises(UnsupportedFieldError):
        get_field(s).require_root7()


@pytest.mark.parametrize("s", SUPPORTED + [4, 6])
def test_trace_balanced_and_linear(s):
    F = get_field(s)
    tr = F.trace(np.arange(F.q))
    assert set(np.unique(tr)) == {0, 1}
    assert int(tr.sum()) == F.q // 2
    assert F.trace(0) == 0
    rng = np.random.default_rng(1)
    a, b = F.random(rng, (2, 2000))
    assert np.array_equal(F.trace(a ^ b), F.trace(a) ^ F.trace(b))
    assert np.array_equal(F.trace(F.mul(a, a)), F.trace(a))


def test_trace_f1024_counts():
    tr = get_field(10).trace(np.arange(1024))
    assert int((tr == 0).sum()) == 512 and int((tr == 1).sum()) == 512


def test_trace_matches_definition():
    F = get_field(10)
    for a in (0, 1, 2, 3, 0x2AB, 1023):
        tot, x = 0, a
        for _ in range(10):
            tot ^= x
            x = F.mul_int(x, x)
        assert tot in (0, 1) and trace(FieldElement(F, a)) == tot


@pytest.mark.parametrize("s", SUPPORTED)
def test_field_axioms_sampled(s):
    F = get_field(s)
    rng = np.random.default_rng(2)
    a, b, c = F.random(rng, (3, 10_000))
    m = F.mul
    assert np.array_equal(m(m(a, b), c), m(a, m(b, c)))
    assert np.array_equal(m(a, b ^ c), m(a, b) ^ m(a, c))
    assert np.array_equal(m(a, b), m(b, a))
    assert np.array_equal(m(a, 1), a) and not m(a, 0).any()


def test_frobenius_additive_exhaustive_f32():
    F = get_field(5)
    a, b = np.meshgrid(np.arange(32), np.arange(32))
    assert np.array_equal(F.mul(a ^ b, a ^ b), F.mul(a, a) ^ F.mul(b, b))


def test_tables_agree_with_carryless_multiply():
    slow = FieldSpec(8, tables=False)
    fast = get_field(8)
    for a, b in itertools.product(range(0, 256, 7), range(0, 256, 11)):
        assert slow.mul_int(a, b) == fast.mul_int(a, b)
    assert np.array_equal(slow.trace_table, fast.trace_table)


def test_multinomial_single_and_pairs_exhaustive():
    F = get_field(5)
    assert multinomial7_check([FieldElement(F, 9)])
    for a in range(32):
        for b in range(32):
            assert multinomial7_check_ints(F, [a, b])


def test_multinomial_random_lists():
    F = get_field(10)
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        m = int(rng.integers(3, 7))
        assert multinomial7_check_ints(F, [int(x) for x in F.random(rng, m)])


def test_hex_roundtrip():
    F = get_field(10)
    assert F.to_hex(0x3FF) == "3ff" and F.to_hex(5) == "005"
    assert F.from_hex("1a2") == 0x1A2
    assert FieldElement(F, 9).hex() == "009"
    with pytest.raises(ValueError):
        F.from_hex("fff0")
    row = [0, 1, 1023, 77]
    assert list(F.row_from_hex(F.row_to_hex(row))) == row


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 1023), st.integers(0, 1023), st.integers(1, 1023))
def test_element_operators(a, b, c):
    F = get_field(10)
    A, B, C = FieldElement(F, a), FieldElement(F, b), FieldElement(F, c)
    assert (A + B) - B == A
    assert (A * C) / C == A
    assert (A * B) ** 2 == (A**2) * (B**2)
    assert fe_sqrt(A) ** 2 == A
    assert fe_root7(A) ** 7 == A
