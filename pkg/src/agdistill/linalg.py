"""Gaussian elimination over GF(2^s) on numpy integer arrays.

Pivoting always takes the first nonzero entry at or below the current row,
so every routine here is deterministic.  The batched variants run the same
elimination independently on a stack of equally shaped matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2e import FieldSpec

# elements per temporary block in row updates; bounds peak memory
_CHUNK = 1 << 22


@dataclass
class Echelon:
    matrix: np.ndarray  # reduced row echelon form
    pivots: list[int]  # pivot column of each of the first len(pivots) rows
    col_perm: np.ndarray  # column order applied before elimination

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(
    spec: FieldSpec,
    m: np.ndarray,
    *,
    max_pivots: int | None = None,
    ncols: int | None = None,
    reduced: bool = True,
) -> Echelon:
    """Row-reduce `m`, pivoting on columns left to right.

    `ncols` limits pivot search to the first `ncols` columns (the remaining
    columns are carried along, e.g. an augmented right-hand side).  With
    `reduced=False` only rows below each pivot are cleared.
    """
    a = np.array(m, dtype=np.int64, copy=True)
    rows, cols = a.shape
    search = cols if ncols is None else ncols
    limit = rows if max_pivots is None else min(rows, max_pivots)
    exp, log = spec.exp, spec.log
    pivots: list[int] = []
    r = 0
    for c in range(search):
        if r >= limit:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        inv_log = (spec.q - 1 - log[a[r, c]]) % (spec.q - 1)
        a[r, c:] = exp[log[a[r, c:]] + inv_log]
        col = a[:, c] if reduced else a[r + 1 :, c]
        offset = 0 if reduced else r + 1
        hit = np.flatnonzero(col)
        hit = hit[hit + offset != r] + offset
        if hit.size:
            lrow = log[a[r, c:]][None, :]
            step = max(1, _CHUNK // max(1, cols - c))
            for h0 in range(0, hit.size, step):
                hh = hit[h0 : h0 + step]
                a[hh, c:] ^= exp[log[a[hh, c]][:, None] + lrow]
        pivots.append(c)
        r += 1
    return Echelon(a, pivots, np.arange(cols))


def rank(spec: FieldSpec, m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if m.shape[0] > m.shape[1]:
        m = m.T
    return rref(spec, m, reduced=False).rank


def full_row_rank(spec: FieldSpec, m: np.ndarray, rng: np.random.Generator | None = None, extra: int = 16) -> bool:
    """Whether `m` has rank equal to its row count.

    A random set of rows+extra columns is tried first; full rank there
    certifies full rank of `m`.  Falls back to the whole matrix otherwise.
    """
    m = np.asarray(m)
    rows, cols = m.shape
    if rows > cols:
        return False
    if rows == 0:
        return True
    if cols > rows + extra:
        rng = rng or np.random.default_rng(0)
        sub = np.sort(rng.choice(cols, size=rows + extra, replace=False))
        if rref(spec, m[:, sub], reduced=False).rank == rows:
            return True
    return rref(spec, m, reduced=False).rank == rows


def nullspace(spec: FieldSpec, m: np.ndarray) -> np.ndarray:
    """Basis of {x : m x = 0}, one row per free column in ascending order.

    Each basis vector sets its free variable to 1 and the other free
    variables to 0.
    """
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    ech = rref(spec, m)
    pivset = set(ech.pivots)
    free = [c for c in range(cols) if c not in pivset]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, pc in enumerate(ech.pivots):
            out[i, pc] = ech.matrix[r, f]
    return out


def solve(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of a x = b (free variables zero), or None if inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(rows, 1)], axis=1)
    ech = rref(spec, aug, ncols=cols)
    r = ech.rank
    if np.any(ech.matrix[r:, cols] != 0):
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(ech.pivots):
        x[pc] = ech.matrix[i, cols]
    return x


def inverse(spec: FieldSpec, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    ech = rref(spec, np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1), ncols=n)
    if ech.rank != n:
        raise np.linalg.LinAlgError("singular matrix over GF(2^s)")
    return ech.matrix[:, n:]


def row_space_contains(spec: FieldSpec, basis: np.ndarray, vectors: np.ndarray) -> bool:
    """Whether every row of `vectors` lies in the row space of `basis`."""
    r0 = rank(spec, basis)
    return rank(spec, np.concatenate([basis, vectors], axis=0)) == r0


# --- batched elimination ------------------------------------------------------


def batched_rref(spec: FieldSpec, mats: np.ndarray, ncols: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduced row echelon form of each matrix in a (B, r, c) stack.

    Returns (reduced, pivot_cols, ranks); pivot_cols[b, i] is the pivot
    column of row i of batch b, or -1.
    """
    a = np.array(mats, dtype=np.int64, copy=True)
    nb, rows, cols = a.shape
    search = cols if ncols is None else ncols
    exp, log = spec.exp, spec.log
    ranks = np.zeros(nb, dtype=np.int64)
    pivcols = np.full((nb, rows), -1, dtype=np.int64)
    row_ids = np.arange(rows)
    for c in range(search):
        cand = (row_ids[None, :] >= ranks[:, None]) & (a[:, :, c] != 0)
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        p = cand[b].argmax(axis=1)
        t = ranks[b]
        row_p = a[b, p].copy()
        a[b, p] = a[b, t]
        a[b, t] = row_p
        inv_log = (spec.q - 1 - log[a[b, t, c]]) % (spec.q - 1)
        prow = exp[log[a[b, t]] + inv_log[:, None]]
        a[b, t] = prow
        f = a[b, :, c].copy()
        f[np.arange(b.size), t] = 0
        a[b] ^= exp[log[f][:, :, None] + log[prow][:, None, :]]
        pivcols[b, t] = c
        ranks[b] += 1
        if np.all(ranks >= rows):
            break
    return a, pivcols, ranks


def batched_first_kernel(spec: FieldSpec, mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First nullspace basis vector of each matrix (lowest free column set to 1).

    Returns (vectors, found); vectors are zero where the kernel is trivial.
    """
    mats = np.asarray(mats, dtype=np.int64)
    nb, rows, cols = mats.shape
    red, pivcols, ranks = batched_rref(spec, mats)
    is_pivot = np.zeros((nb, cols), dtype=bool)
    bi, ri = np.nonzero(pivcols >= 0)
    is_pivot[bi, pivcols[bi, ri]] = True
    free = ~is_pivot
    found = free.any(axis=1)
    first_free = free.argmax(axis=1)
    out = np.zeros((nb, cols), dtype=np.int64)
    out[np.arange(nb), first_free] = 1
    # x_pivot = entry of the pivot row in the free column (char 2: no sign)
    vals = red[np.arange(nb)[:, None], np.arange(rows)[None, :], first_free[:, None]]
    mask = pivcols >= 0
    bb, rr = np.nonzero(mask)
    out[bb, pivcols[bb, rr]] = vals[bb, rr]
    out[~found] = 0
    return out, found


def batched_solve(spec: FieldSpec, mats: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve mats[b] x = rhs[b] with free variables zero.

    Returns (solutions, consistent).
    """
    mats = np.asarray(mats, dtype=np.int64)
    nb, rows, cols = mats.shape
    aug = np.concatenate([mats, np.asarray(rhs, dtype=np.int64).reshape(nb, rows, 1)], axis=2)
    red, pivcols, ranks = batched_rref(spec, aug, ncols=cols)
    row_ids = np.arange(rows)
    beyond = row_ids[None, :] >= ranks[:, None]
    consistent = ~np.any(beyond & (red[:, :, cols] != 0), axis=1)
    x = np.zeros((nb, cols), dtype=np.int64)
    bb, rr = np.nonzero(pivcols >= 0)
    x[bb, pivcols[bb, rr]] = red[bb, rr, cols]
    return x, consistent


def batched_rank(spec: FieldSpec, mats: np.ndarray) -> np.ndarray:
    return batched_rref(spec, mats)[2]


def batched_matvec(spec: FieldSpec, m: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """(B, c) stack of vectors times a fixed (r, c) matrix -> (B, r)."""
    m = np.asarray(m, dtype=np.int64)
    vecs = np.asarray(vecs, dtype=np.int64)
    out = np.zeros((vecs.shape[0], m.shape[0]), dtype=np.int64)
    lm = spec.log[m]
    lv = spec.log[vecs]
    for j in range(m.shape[1]):
        out ^= spec.exp[lv[:, j][:, None] + lm[:, j][None, :]]
    return out
