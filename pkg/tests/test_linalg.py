from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agdistill import linalg
from agdistill.gf2e import get_field

F = get_field(8)


def rand(shape, seed):
    return F.random(np.random.default_rng(seed), shape)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 9), st.integers(0, 10**6))
def test_nullspace_and_rank(r, c, seed):
    a = rand((r, c), seed)
    if seed % 3 == 0 and r > 1:
        a[-1] = F.mul(a[0], 7) ^ a[-1] * 0  # force a dependent row
    ns = linalg.nullspace(F, a)
    rk = linalg.rank(F, a)
    assert ns.shape == (c - rk, c)
    if ns.size:
        assert not F.matmul(a, ns.T).any()
        assert linalg.rank(F, ns) == ns.shape[0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 9), st.integers(0, 10**6))
def test_solve(r, c, seed):
    a = rand((r, c), seed)
    x = rand(c, seed + 1)
    b = F.matvec(a, x)
    y = linalg.solve(F, a, b)
    assert y is not None and np.array_equal(F.matvec(a, y), b)


def test_solve_inconsistent():
    a = np.array([[1, 2], [2, 4]])  # second row = 2 * first
    assert linalg.solve(F, a, np.array([1, 0])) is None


def test_inverse():
    m = rand((6, 6), 4)
    while linalg.rank(F, m) < 6:
        m = rand((6, 6), int(m.sum()))
    assert np.array_equal(F.matmul(m, linalg.inverse(F, m)), np.eye(6, dtype=np.int64))
    with pytest.raises(np.linalg.LinAlgError):
        linalg.inverse(F, np.zeros((3, 3), dtype=np.int64))


def test_full_row_rank_certificate():
    a = rand((5, 200), 5)
    assert linalg.full_row_rank(F, a)
    a[4] = a[0] ^ F.mul(a[1], 3)
    assert not linalg.full_row_rank(F, a)


@pytest.mark.parametrize("shape", [(40, 4, 6), (25, 5, 5), (30, 6, 3)])
def test_batched_matches_single(shape):
    mats = rand(shape, 6)
    mats[::3, -1] = 0  # some rank-deficient members
    ranks = linalg.batched_rank(F, mats)
    vecs, found = linalg.batched_first_kernel(F, mats)
    for i, m in enumerate(mats):
        assert ranks[i] == linalg.rank(F, m)
        ns = linalg.nullspace(F, m)
        assert found[i] == (ns.shape[0] > 0)
        if ns.shape[0]:
            assert np.array_equal(vecs[i], ns[0])


def test_batched_solve():
    mats = rand((50, 5, 4), 7)
    x = rand((50, 4), 8)
    rhs = np.array([F.matvec(m, v) for m, v in zip(mats, x)])
    rhs[0] ^= 1  # almost surely inconsistent for a 5x4 system
    sol, ok = linalg.batched_solve(F, mats, rhs)
    for i in range(50):
        single = linalg.solve(F, mats[i], rhs[i])
        assert ok[i] == (single is not None)
        if ok[i]:
            assert np.array_equal(F.matvec(mats[i], sol[i]), rhs[i])
    assert not ok[0]


def test_batched_matvec():
    m = rand((4, 9), 9)
    v = rand((7, 9), 10)
    out = linalg.batched_matvec(F, m, v)
    assert np.array_equal(out, np.array([F.matvec(m, x) for x in v]))
