"""Triorthogonal matrices from twisted one-point AG codes.

Pipeline: residue vector v on the evaluation places, drop its zeros,
w = v^(1/7), evaluate L(a P_inf) with columns scaled by w, row-reduce with
the first k columns as pivots, and cut those k columns off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import linalg
from .agcode import ParameterError, check_orthogonal, dual_residue_vector
from .curves import Curve, evaluation_matrix, place_indices
from .gf2e import FieldSpec


@dataclass
class TriorthogonalMatrix:
    spec: FieldSpec
    n: int
    k: int
    m: int
    rows: np.ndarray  # m x n; rows[:k] = G_1, rows[k:] = G_0
    sigma: np.ndarray  # length n
    tau: np.ndarray  # length k
    w: np.ndarray  # length N = n + k, column order of `places`
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def G1(self) -> np.ndarray:
        return self.rows[: self.k]

    @property
    def G0(self) -> np.ndarray:
        return self.rows[self.k :]

    @property
    def N(self) -> int:
        return self.n + self.k

    @property
    def w_tail(self) -> np.ndarray:
        return self.w[self.k :]


def preset(curve: Curve) -> tuple[int, int]:
    """Default (a, k): floor(9g/2), floor(5g/4) clamped to a-3g-1; genus 0 gives (4, 1)."""
    g = curve.genus
    if g == 0:
        return 4, 1
    a = 9 * g // 2
    return a, max(1, min(5 * g // 4, a - 3 * g - 1))


def default_places(curve: Curve) -> np.ndarray:
    """Evaluation places: all affine ones, except x = 0 on the rational curve.

    The rational curve keeps x = 0 out of D, mirroring the reserved place of the
    general construction, so a genus-0 instance over GF(32) has 31 places.
    """
    ids = np.arange(curve.num_affine)
    if curve.kind == "rational":
        return ids[curve.place_xy()[0] != 0]
    return ids


def check_parameters(curve: Curve, a: int, k: int, n_places: int) -> None:
    g = curve.genus
    curve.spec.require_root7()
    if a < 3 * g + 2:
        raise ParameterError(f"a >= 3g+2 violated (a={a}, g={g})")
    if k <= 0:
        raise ParameterError(f"k > 0 violated (k={k})")
    if k > a - 3 * g - 1:
        raise ParameterError(f"k <= a-3g-1 violated (k={k}, a-3g-1={a - 3 * g - 1})")
    if n_places - 2 + g - 7 * a < 0:
        raise ParameterError(f"deg E = n-2+g-7a >= 0 violated (n={n_places}, g={g}, a={a})")


def _pivot_prefix(spec: FieldSpec, gt: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduce so that the first k columns form [I_k; 0], permuting columns if needed."""
    ech = linalg.rref(spec, gt, max_pivots=k)
    if ech.rank < k:
        raise RuntimeError(f"twisted generator has fewer than k={k} independent columns")
    piv = ech.pivots
    perm = np.arange(gt.shape[1])
    if piv != list(range(k)):
        rest = np.setdiff1d(perm, piv)
        perm = np.concatenate([np.array(piv), rest])
    return ech.matrix[:, perm], perm


def construct(curve: Curve, a: int, k: int, seed: int = 0, places=None, route: str = "auto", verify_residue: int | None = 200) -> TriorthogonalMatrix:
    spec = curve.spec
    g = curve.genus
    idx = default_places(curve) if places is None else place_indices(curve, places)
    n2 = int(idx.size)
    check_parameters(curve, a, k, n2)
    deg7ae = n2 - 2 + g

    res = dual_residue_vector(curve, deg7ae, idx, seed, route)
    if res.zero_support.size > g:
        raise RuntimeError(f"residue vector has {res.zero_support.size} zeros, more than g={g}")
    sample = None if verify_residue is None else verify_residue
    if not check_orthogonal(curve, deg7ae, idx, res.values, sample=sample, seed=seed):
        raise RuntimeError("residue vector fails the orthogonality re-check")

    keep = np.flatnonzero(res.values)
    ids = idx[keep]
    N = int(ids.size)
    if N <= a:
        raise ParameterError(f"a < N violated (a={a}, N={N})")
    w = spec.root7(res.values[keep])
    gt = spec.scale_cols(evaluation_matrix(curve, a, ids), w)
    m = a + 1 - g
    if gt.shape[0] != m:
        raise RuntimeError("Riemann-Roch dimension mismatch")  # pragma: no cover
    red, perm = _pivot_prefix(spec, gt, k)
    del gt
    ids = ids[perm]
    w = w[perm]
    rows = np.ascontiguousarray(red[:, k:])
    del red
    sigma = spec.pow(w[k:], 5)
    tau = spec.pow(w[:k], 5)
    if not (sigma.all() and tau.all()):
        raise RuntimeError("zero weight in sigma or tau")  # pragma: no cover
    prov = {
        "curve": curve.descriptor,
        "genus": g,
        "a": a,
        "k": k,
        "seed": seed,
        "n_places": n2,
        "deg7AE": deg7ae,
        "residue_route": res.route,
        "residue_kernel_dim": res.kernel_dim,
        "residue_coeffs": res.coeffs,
        "residue_zeros": int(res.zero_support.size),
        "column_permuted": bool(not np.array_equal(perm, np.arange(N))),
        "places": [int(p) for p in ids],
    }
    return TriorthogonalMatrix(spec, N - k, k, m, rows, sigma, tau, w, prov)


# --- verification -------------------------------------------------------------


@dataclass
class VerificationReport:
    passed: bool
    mode: str
    triples_checked: int
    pairs_checked: int
    violations: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "mode": self.mode,
            "triples_checked": self.triples_checked,
            "pairs_checked": self.pairs_checked,
            "violations": self.violations,
        }


def _cubic_sums(T: TriorthogonalMatrix, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """sum_i (g^a_i)^4 (g^b_i)^2 g^c_i for index arrays a, b, c."""
    spec = T.spec
    lg = spec.log[T.rows]
    l4 = spec.pow_log(T.rows, 4)
    l2 = spec.pow_log(T.rows, 2)
    out = np.empty(a.size, dtype=np.int64)
    step = max(1, (1 << 21) // max(1, T.n))
    for s0 in range(0, a.size, step):
        sl = slice(s0, s0 + step)
        x = spec.exp[l4[a[sl]] + l2[b[sl]]]
        out[sl] = np.bitwise_xor.reduce(spec.exp[spec.log[x] + lg[c[sl]]], axis=1)
    return out


def _pair_sums(T: TriorthogonalMatrix, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    spec = T.spec
    lg = spec.log[T.rows]
    ls = spec.log[T.sigma][None, :]
    out = np.empty(a.size, dtype=np.int64)
    step = max(1, (1 << 21) // max(1, T.n))
    for s0 in range(0, a.size, step):
        sl = slice(s0, s0 + step)
        x = spec.exp[lg[a[sl]] + lg[b[sl]]]
        out[sl] = np.bitwise_xor.reduce(spec.exp[spec.log[x] + ls], axis=1)
    return out


def is_triorthogonal(T: TriorthogonalMatrix, mode: str = "auto", trials: int = 10_000, seed: int = 0, max_violations: int = 10) -> VerificationReport:
    """Check both defining identities, exhaustively or on random index tuples.

    Sampled mode always includes every diagonal case a=b=c<k and a=b<k.
    """
    m, k = T.m, T.k
    if mode == "auto":
        mode = "exhaustive" if m <= 50 else "sampled"
    if mode == "exhaustive":
        a, b, c = (x.ravel() for x in np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij"))
        pa, pb = (x.ravel() for x in np.meshgrid(np.arange(m), np.arange(m), indexing="ij"))
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        d = np.arange(k)
        r = rng.integers(0, m, size=(3, trials)) if trials else np.zeros((3, 0), dtype=np.int64)
        a = np.concatenate([d, r[0]])
        b = np.concatenate([d, r[1]])
        c = np.concatenate([d, r[2]])
        r2 = rng.integers(0, m, size=(2, trials)) if trials else np.zeros((2, 0), dtype=np.int64)
        pa = np.concatenate([d, r2[0]])
        pb = np.concatenate([d, r2[1]])
    else:
        raise ValueError(f"unknown mode {mode!r}")

    violations: list[dict] = []
    got = _cubic_sums(T, a, b, c)
    want = ((a == b) & (b == c) & (a < k)).astype(np.int64)
    for i in np.flatnonzero(got != want)[:max_violations]:
        violations.append({"kind": "cubic", "a": int(a[i]), "b": int(b[i]), "c": int(c[i]), "got": int(got[i]), "want": int(want[i])})
    got2 = _pair_sums(T, pa, pb)
    want2 = np.where((pa == pb) & (pa < k), T.tau[np.minimum(pa, max(k - 1, 0))], 0)
    for i in np.flatnonzero(got2 != want2)[: max(0, max_violations - len(violations))]:
        violations.append({"kind": "pair", "a": int(pa[i]), "b": int(pb[i]), "got": int(got2[i]), "want": int(want2[i])})
    n_bad = int(np.count_nonzero(got != want) + np.count_nonzero(got2 != want2))
    return VerificationReport(n_bad == 0, mode, int(a.size), int(pa.size), violations)


def combine_rows(T: TriorthogonalMatrix, u: np.ndarray) -> np.ndarray:
    """Row combinations u @ G for a (B, m) batch of coefficient vectors."""
    spec = T.spec
    u = np.atleast_2d(spec.asarray(u))
    out = np.zeros((u.shape[0], T.n), dtype=np.int64)
    lu = spec.log[u]
    lg = spec.log[T.rows]
    for j in range(T.m):
        out ^= spec.exp[lu[:, j][:, None] + lg[j][None, :]]
    return out


def transversality_check(T: TriorthogonalMatrix, trials: int = 1000, seed: int = 0, batch: int | None = None) -> bool:
    """sum_i f_i^7 == sum_{a<k} u_a^7 for f = u @ G, u uniform in F_q^m."""
    spec = T.spec
    rng = np.random.default_rng(seed)
    batch = batch or max(1, min(trials, (1 << 21) // max(1, T.n)))
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        u = spec.random(rng, (b, T.m))
        f = combine_rows(T, u)
        lhs = np.bitwise_xor.reduce(spec.pow(f, 7), axis=1)
        rhs = np.bitwise_xor.reduce(spec.pow(u[:, : T.k], 7), axis=1) if T.k else np.zeros(b, dtype=np.int64)
        if np.any(lhs != rhs):
            return False
        done += b
    return True


def structure_checks(T: TriorthogonalMatrix, rng_seed: int = 0) -> dict[str, bool]:
    """Rank facts: G_1 independent, span(G_1) and span(G_0) meet trivially,
    and sigma-scaled G_1 rows are orthogonal to G_0."""
    spec = T.spec
    rng = np.random.default_rng(rng_seed)
    out = {}
    out["G1_full_rank"] = linalg.full_row_rank(spec, T.G1, rng)
    out["G0_full_rank"] = linalg.full_row_rank(spec, T.G0, rng)
    # with both blocks independent, full rank of G is the trivial-intersection statement
    out["G_full_rank"] = linalg.full_row_rank(spec, T.rows, rng)
    sg1 = spec.scale_cols(T.G1, T.sigma)
    lg0 = spec.log[T.G0]
    ok = True
    for r in sg1:
        if np.any(np.bitwise_xor.reduce(spec.exp[lg0 + spec.log[r][None, :]], axis=1)):
            ok = False
            break
    out["sigma_G1_orthogonal_G0"] = ok
    return out
