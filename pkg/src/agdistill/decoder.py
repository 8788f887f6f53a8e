"""Syndrome decoding of ker(G_0) up to radius t with an error-locating function.

Write e' = w_tail * e.  Since the rows of G_0 are w_tail * ev(f) for f in
L(a P_inf - P_1 - ... - P_k), the syndrome S = G_0 e determines
<ev(f), e'> for every such f.  Any vector e~ with H e~ = S, where H is G_0
with its columns divided by w_tail, reproduces these pairings, so it stands
in for e' when building the locator system

    M[j, i] = sum_r f_i(P_r) h_j(P_r) e~_r,

with f_i spanning L(d1 P_inf) and h_j spanning the functions of
L((a - d1) P_inf) that vanish on the k pivot places.  A kernel vector of M
is a function vanishing on the error support; its zeros give candidate
positions and a linear solve recovers the values.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import linalg
from .agcode import ParameterError, dual_distance_bound
from .csscode import CostCapError, quantum_params
from .curves import Curve, evaluation_matrix, parse_descriptor, rr_dim
from .gf2e import FieldSpec
from .triortho import TriorthogonalMatrix


@dataclass
class DecodeResult:
    e_hat: np.ndarray
    matched: bool


@dataclass
class DecoderConfig:
    spec: FieldSpec
    t: int
    degA1: int
    locator_basis: np.ndarray  # l(A1) x n
    cofactor_basis: np.ndarray  # dim x n
    info_set: np.ndarray  # m-k columns of H
    syndrome_lift: np.ndarray  # (H[:, J])^-1
    products: np.ndarray  # (dim, l, m-k): f_i h_j on the information set
    H: np.ndarray  # G_0 with columns divided by w_tail
    G0: np.ndarray
    w_tail: np.ndarray
    w_tail_inv: np.ndarray

    @property
    def n(self) -> int:
        return self.G0.shape[1]


def choose_degA1(curve: Curve, a: int, k: int, t: int) -> int:
    """Smallest d1 with l(d1 P_inf) > t and d1 < (a-k) - (2g-2) - t."""
    g = curve.genus
    bound = dual_distance_bound(a - k, g) - t
    for d1 in range(0, bound):
        if rr_dim(curve, d1) > t:
            return d1
    raise ParameterError(f"no degree d1 < {bound} has l(d1 P_inf) > t={t}")


def build_decoder(T: TriorthogonalMatrix, t: int | None = None, degA1: int | None = None, seed: int = 0) -> DecoderConfig:
    spec = T.spec
    params = quantum_params(T, t)
    t = params.t
    curve = parse_descriptor(T.provenance["curve"], spec.modulus)
    a, k, g = T.provenance["a"], T.k, curve.genus
    ids = np.asarray(T.provenance["places"], dtype=np.int64)
    if degA1 is None:
        degA1 = choose_degA1(curve, a, k, t)
    elif not (rr_dim(curve, degA1) > t and degA1 < dual_distance_bound(a - k, g) - t):
        raise ParameterError(f"degA1={degA1} violates the locator conditions")

    loc = evaluation_matrix(curve, degA1, ids[k:])
    ev = evaluation_matrix(curve, a - degA1, ids)
    coeffs = linalg.nullspace(spec, ev[:, :k].T) if k else np.eye(ev.shape[0], dtype=np.int64)
    if coeffs.shape[0] == 0:
        raise ParameterError("cofactor space is empty")
    cof = spec.matmul(coeffs, ev[:, k:])

    w_tail = T.w_tail
    w_inv = spec.inv(w_tail)
    H = spec.scale_cols(T.G0, w_inv)
    J = _information_set(spec, H, np.random.default_rng(seed))
    lift = linalg.inverse(spec, H[:, J])
    lf = spec.log[loc[:, J]]
    lc = spec.log[cof[:, J]]
    products = spec.exp[lc[:, None, :] + lf[None, :, :]]
    return DecoderConfig(spec, t, degA1, loc, cof, J, lift, products, H, T.G0, w_tail, w_inv)


def _information_set(spec: FieldSpec, H: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    rows, n = H.shape
    if n > rows + 32:
        sub = np.sort(rng.choice(n, size=rows + 32, replace=False))
        ech = linalg.rref(spec, H[:, sub], reduced=False)
        if ech.rank == rows:
            return sub[ech.pivots]
    ech = linalg.rref(spec, H, reduced=False)
    if ech.rank != rows:
        raise RuntimeError("G_0 does not have full row rank")
    return np.array(ech.pivots, dtype=np.int64)


def decode_batch(cfg: DecoderConfig, S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decode a (B, m-k) stack of syndromes; returns (e_hat, matched)."""
    spec = cfg.spec
    S = np.atleast_2d(spec.asarray(S))
    B = S.shape[0]
    n = cfg.n
    e_info = linalg.batched_matvec(spec, cfg.syndrome_lift, S)  # e~ on the information set
    dim, l, _ = cfg.products.shape
    M = np.zeros((B, dim, l), dtype=np.int64)
    le = spec.log[e_info]
    lp = spec.log[cfg.products]
    for r in range(e_info.shape[1]):
        M ^= spec.exp[lp[None, :, :, r] + le[:, r][:, None, None]]
    theta, found = linalg.batched_first_kernel(spec, M)
    vals = linalg.batched_matvec(spec, cfg.locator_basis.T, theta)
    zero = (vals == 0) & found[:, None]
    zmax = int(zero.sum(axis=1).max()) if B else 0
    e_hat = np.zeros((B, n), dtype=np.int64)
    if zmax:
        # zero positions first, padded with a dummy all-zero column at index n
        order = np.argsort(~zero, axis=1, kind="stable")[:, :zmax]
        pad = np.take_along_axis(zero, order, axis=1)
        cols = np.where(pad, order, n)
        h_ext = np.concatenate([cfg.H, np.zeros((cfg.H.shape[0], 1), dtype=np.int64)], axis=1)
        mats = h_ext.T[cols].transpose(0, 2, 1)
        x, ok = linalg.batched_solve(spec, mats, S)
        x = np.where(ok[:, None] & pad, x, 0)
        full = np.zeros((B, n + 1), dtype=np.int64)
        np.put_along_axis(full, cols, x, axis=1)
        full[:, n] = 0
        e_hat = spec.mul(full[:, :n], cfg.w_tail_inv[None, :])
    matched = ~np.any(linalg.batched_matvec(spec, cfg.G0, e_hat) != S, axis=1)
    e_hat[~matched] = 0
    return e_hat, matched


def decode(cfg: DecoderConfig, S: np.ndarray) -> DecodeResult:
    e_hat, matched = decode_batch(cfg, np.asarray(S)[None, :])
    return DecodeResult(e_hat[0], bool(matched[0]))


def oracle_decode(T: TriorthogonalMatrix, S: np.ndarray, radius: int, cap: int = 10_000_000, batch: int = 4096) -> DecodeResult:
    """Minimum-weight e with G_0 e = S among weights <= radius, by enumerating supports.

    Ties at the minimal weight go to the lexicographically first support.
    """
    spec = T.spec
    S = spec.asarray(S)
    n = T.n
    if comb(n, radius) * (spec.q - 1) ** radius > cap:
        raise CostCapError("oracle budget exceeded")
    if not S.any():
        return DecodeResult(np.zeros(n, dtype=np.int64), True)
    from itertools import combinations

    cols = T.G0.T
    for wgt in range(1, radius + 1):
        it = combinations(range(n), wgt)
        while True:
            chunk = np.array([c for _, c in zip(range(batch), it)], dtype=np.int64)
            if chunk.size == 0:
                break
            mats = cols[chunk].transpose(0, 2, 1)
            x, ok = linalg.batched_solve(spec, mats, np.broadcast_to(S, (chunk.shape[0], S.size)))
            good = ok & np.all(x != 0, axis=1)
            if good.any():
                i = int(np.argmax(good))
                e = np.zeros(n, dtype=np.int64)
                e[chunk[i]] = x[i]
                return DecodeResult(e, True)
    return DecodeResult(np.zeros(n, dtype=np.int64), False)
