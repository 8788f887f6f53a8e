"""Parameters, logical operators and syndromes of CSS(X, G_0; Z, G^perp)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .agcode import ParameterError
from .gf2e import FieldSpec
from .triortho import TriorthogonalMatrix, combine_rows


class CostCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuantumCodeParams:
    n: int
    k: int
    d_lower: int
    t: int
    t_max: int
    qubit_view: tuple[int, int]

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "d_lower": self.d_lower, "t": self.t, "qubit_view": list(self.qubit_view)}


def distance_lower_bound(a: int, k: int, g: int) -> int:
    return a - k - (2 * g - 2)


def max_radius(d_lower: int, g: int) -> int:
    return (d_lower - g - 1) // 2


def quantum_params(T: TriorthogonalMatrix, t: int | None = None) -> QuantumCodeParams:
    a = T.provenance["a"]
    g = T.provenance["genus"]
    d = distance_lower_bound(a, T.k, g)
    if d <= 0:
        raise ParameterError(f"d_lower = a-k-(2g-2) > 0 violated (got {d})")
    tmax = max_radius(d, g)
    if tmax <= 0:
        raise ParameterError(f"0 < t <= (d-g-1)/2 has no solution (d={d}, g={g})")
    if t is None:
        t = tmax
    if not 0 < t <= tmax:
        raise ParameterError(f"0 < t <= {tmax} violated (t={t})")
    s = T.spec.s
    return QuantumCodeParams(T.n, T.k, d, t, tmax, (T.n * s, T.k * s))


def logical_z_ops(T: TriorthogonalMatrix) -> np.ndarray:
    """Rows ghat^a_i = tau_a^-1 sigma_i g^a_i for a < k."""
    spec = T.spec
    scaled = spec.scale_cols(T.G1, T.sigma)
    return spec.scale_rows(scaled, spec.inv(T.tau))


def logical_pairing(T: TriorthogonalMatrix) -> np.ndarray:
    """Matrix <g^c, ghat^a> for every row c of G and every a < k."""
    spec = T.spec
    return spec.matmul(T.rows, logical_z_ops(T).T)


def syndrome(T: TriorthogonalMatrix, e: np.ndarray) -> np.ndarray:
    e = T.spec.asarray(e)
    if e.shape[-1] != T.n:
        raise ValueError(f"error vector has length {e.shape[-1]}, expected {T.n}")
    if e.ndim == 1:
        return T.spec.matvec(T.G0, e)
    return linalg.batched_matvec(T.spec, T.G0, e)


def full_syndrome(T: TriorthogonalMatrix, e: np.ndarray) -> np.ndarray:
    """G e for a single vector or a (B, n) batch."""
    e = T.spec.asarray(e)
    if e.ndim == 1:
        return T.spec.matvec(T.rows, e)
    return linalg.batched_matvec(T.spec, T.rows, e)


def is_stabilizer_equiv(T: TriorthogonalMatrix, r: np.ndarray) -> bool | np.ndarray:
    """Whether G r = 0, i.e. r lies in G^perp and acts trivially on the code space."""
    out = full_syndrome(T, r)
    if out.ndim == 1:
        return not out.any()
    return ~out.any(axis=1)


def certify_dual_distance(spec: FieldSpec, G0: np.ndarray, delta: int, cap: int = 10_000_000, batch: int = 8192) -> bool:
    """True iff every (delta-1)-subset of columns of G0 is independent.

    That is exactly the statement that ker(G0) has minimum distance >= delta.
    """
    G0 = spec.asarray(G0)
    rows, n = G0.shape
    r = delta - 1
    if r <= 0:
        return True
    if r > n or r > rows:
        return False
    total = comb(n, r)
    if total > cap:
        raise CostCapError(f"{total} column subsets exceed the cap of {cap}")
    cols = G0.T
    it = combinations(range(n), r)
    while True:
        chunk = np.array(list(_take(it, batch)), dtype=np.int64)
        if chunk.size == 0:
            return True
        mats = cols[chunk].transpose(0, 2, 1)
        if np.any(linalg.batched_rank(spec, mats) < r):
            return False


def _take(it, count):
    for _ in range(count):
        try:
            yield next(it)
        except StopIteration:
            return


def min_weight_outside_g0(T: TriorthogonalMatrix, cap: int = 1 << 22, batch: int = 1 << 14) -> int:
    """Smallest weight in span(G) minus span(G_0), by enumeration.

    Only G_1 coefficient vectors whose first nonzero entry is 1 are visited;
    scaling does not change weight.
    """
    spec = T.spec
    q, k, m = spec.q, T.k, T.m
    count = (q**k - 1) // (q - 1) * q ** (m - k)
    if count > cap:
        raise CostCapError(f"{count} coset vectors exceed the cap of {cap}")
    best = T.n + 1
    for lead in range(k):
        free_g1 = k - lead - 1
        nfree = free_g1 + (m - k)
        total = q**nfree
        for start in range(0, total, batch):
            idx = np.arange(start, min(total, start + batch), dtype=np.int64)
            digits = (idx[:, None] // (q ** np.arange(nfree, dtype=np.int64))[None, :]) % q
            u = np.zeros((idx.size, m), dtype=np.int64)
            u[:, lead] = 1
            u[:, lead + 1 :] = digits
            f = combine_rows(T, u)
            best = min(best, int(np.count_nonzero(f, axis=1).min()))
    return best
