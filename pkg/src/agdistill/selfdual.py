"""Self-dual bases of GF(2^s) over GF(2) and the qudit/qubit coordinate maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gf2e import FieldSpec, get_field, poly_element


class BasisSearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class SelfDualBasis:
    spec: FieldSpec
    alphas: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", tuple(int(a) for a in self.alphas))
        if len(self.alphas) != self.spec.s:
            raise ValueError(f"basis needs {self.spec.s} elements, got {len(self.alphas)}")
        for a in self.alphas:
            self.spec.check(a)

    @property
    def s(self) -> int:
        return self.spec.s

    def to_hex(self) -> list[str]:
        return [self.spec.to_hex(a) for a in self.alphas]

    @classmethod
    def from_hex(cls, spec: FieldSpec, items: Sequence[str]) -> SelfDualBasis:
        return cls(spec, tuple(spec.from_hex(h) for h in items))


# Ten elements listed as exponent sets of the polynomial basis (modulus x^10+x^3+1).
_REFERENCE_S10 = (
    (0, 2, 4, 5, 7, 8),
    (3, 6, 7, 8, 9),
    (1, 2, 5, 7, 8, 9),
    (0, 1, 2, 3, 4, 6, 7, 8, 9),
    (0, 1, 4, 5, 7, 9),
    (1, 2, 3, 7),
    (2, 6, 7),
    (2, 5, 7),
    (0, 3, 7),
    (0, 4, 6, 7),
)


def paper_basis_s10() -> SelfDualBasis:
    return SelfDualBasis(get_field(10), tuple(poly_element(*e) for e in _REFERENCE_S10))


def gram_matrix(basis: SelfDualBasis) -> np.ndarray:
    a = np.array(basis.alphas, dtype=np.int64)
    return basis.spec.trace(basis.spec.mul(a[:, None], a[None, :])).astype(np.uint8)


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of integers read as bit vectors."""
    pivots: dict[int, int] = {}
    r = 0
    for v in rows:
        v = int(v)
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                r += 1
                break
            v ^= pivots[top]
    return r


def is_self_dual(basis: SelfDualBasis) -> bool:
    if gf2_rank(basis.alphas) != basis.s:
        return False
    return bool(np.array_equal(gram_matrix(basis), np.eye(basis.s, dtype=np.uint8)))


def _orthonormalise(spec: FieldSpec, vecs: list[int]) -> list[int] | None:
    """Symmetric congruence to the identity, or None if the rest is alternating."""
    b = list(vecs)
    s = len(b)
    for i in range(s):
        j = next((j for j in range(i, s) if spec.trace_int(spec.mul_int(b[j], b[j]))), None)
        if j is None:
            return None
        b[i], b[j] = b[j], b[i]
        for j in range(i + 1, s):
            if spec.trace_int(spec.mul_int(b[i], b[j])):
                b[j] ^= b[i]
    return b


def find_self_dual_basis(spec: FieldSpec, seed: int, max_tries: int = 1000) -> SelfDualBasis:
    """Random self-dual basis, deterministic in `seed`."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        cand = [int(x) for x in rng.integers(1, spec.q, size=spec.s)]
        if gf2_rank(cand) != spec.s:
            continue
        out = _orthonormalise(spec, cand)
        if out is not None:
            basis = SelfDualBasis(spec, tuple(out))
            if is_self_dual(basis):
                return basis
    raise BasisSearchError(f"no self-dual basis found in {max_tries} attempts")


def to_bits(beta: int, basis: SelfDualBasis) -> np.ndarray:
    spec = basis.spec
    a = np.array(basis.alphas, dtype=np.int64)
    return spec.trace(spec.mul(a, int(beta))).astype(np.uint8)


def from_bits(bits: Sequence[int], basis: SelfDualBasis) -> int:
    out = 0
    for b, a in zip(bits, basis.alphas):
        if int(b) & 1:
            out ^= a
    return out


def syndrome_to_bits(v: int, basis: SelfDualBasis) -> np.ndarray:
    """Expand one GF(q) syndrome entry into s qubit-stabiliser outcomes."""
    return to_bits(v, basis)


def to_bits_array(values: np.ndarray, basis: SelfDualBasis) -> np.ndarray:
    """Vectorised to_bits: shape (..., s)."""
    spec = basis.spec
    v = spec.asarray(values)
    a = np.array(basis.alphas, dtype=np.int64)
    return spec.trace(spec.mul(v[..., None], a)).astype(np.uint8)


def all_elements_from_bits(basis: SelfDualBasis) -> np.ndarray:
    """gamma(b) for every b in [0, 2^s), where bit i of b is coordinate b_i."""
    s = basis.s
    out = np.zeros(1 << s, dtype=np.int64)
    idx = np.arange(1 << s)
    for i, a in enumerate(basis.alphas):
        out ^= np.where((idx >> i) & 1, a, 0)
    return out
