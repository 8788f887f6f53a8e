from __future__ import annotations

import numpy as np
import pytest

from agdistill.gf2e import get_field, poly_element
from agdistill.selfdual import (
    BasisSearchError,
    SelfDualBasis,
    find_self_dual_basis,
    from_bits,
    gram_matrix,
    is_self_dual,
    paper_basis_s10,
    syndrome_to_bits,
    to_bits,
    to_bits_array,
)


def test_reference_basis():
    b = paper_basis_s10()
    assert is_self_dual(b)
    assert b.alphas[0] == poly_element(0, 2, 4, 5, 7, 8)
    assert b.alphas[8] == poly_element(0, 3, 7)
    assert b.alphas[9] == poly_element(0, 4, 6, 7)
    assert np.array_equal(gram_matrix(b), np.eye(10, dtype=np.uint8))


def test_polynomial_basis_not_self_dual():
    F = get_field(10)
    poly = SelfDualBasis(F, tuple(1 << i for i in range(10)))
    assert not np.array_equal(gram_matrix(poly), np.eye(10, dtype=np.uint8))
    assert not is_self_dual(poly)


def test_repeated_element_rejected():
    b = paper_basis_s10()
    rep = SelfDualBasis(b.spec, (b.alphas[0],) * 2 + b.alphas[2:])
    assert not is_self_dual(rep)


@pytest.mark.parametrize("s", [5, 8, 10])
@pytest.mark.parametrize("seed", [1, 2])
def test_search(s, seed):
    b = find_self_dual_basis(get_field(s), seed)
    assert is_self_dual(b)
    assert b == find_self_dual_basis(get_field(s), seed)


def test_search_budget():
    with pytest.raises(BasisSearchError):
        find_self_dual_basis(get_field(10), 0, max_tries=0)


def test_coordinates_exhaustive_s5():
    b = find_self_dual_basis(get_field(5), 1)
    seen = set()
    for beta in range(32):
        bits = to_bits(beta, b)
        assert from_bits(bits, b) == beta
        seen.add(tuple(bits))
    assert len(seen) == 32
    for i, a in enumerate(b.alphas):
        assert list(to_bits(a, b)) == [int(j == i) for j in range(5)]
    assert not to_bits(0, b).any() and from_bits([0] * 5, b) == 0


def test_coordinates_sampled_s10():
    b = paper_basis_s10()
    F = b.spec
    rng = np.random.default_rng(0)
    for beta in F.random(rng, 200):
        assert from_bits(to_bits(int(beta), b), b) == beta
        assert np.array_equal(syndrome_to_bits(int(beta), b), to_bits(int(beta), b))
    assert from_bits([1] + [0] * 9, b) == b.alphas[0]


def test_trace_form_is_dot_product():
    b = paper_basis_s10()
    F = b.spec
    rng = np.random.default_rng(1)
    x, y = F.random(rng, (2, 500))
    lhs = F.trace(F.mul(x, y))
    rhs = (to_bits_array(x, b).astype(int) * to_bits_array(y, b)).sum(axis=1) % 2
    assert np.array_equal(lhs, rhs)


def test_linear_bijection():
    b = paper_basis_s10()
    rng = np.random.default_rng(2)
    x, y = b.spec.random(rng, (2, 300))
    assert np.array_equal(to_bits_array(x ^ y, b), to_bits_array(x, b) ^ to_bits_array(y, b))


def test_hex_roundtrip():
    b = paper_basis_s10()
    assert SelfDualBasis.from_hex(b.spec, b.to_hex()) == b
