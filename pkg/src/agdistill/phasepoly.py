"""Phase polynomials of the diagonal gates b -> (-1)^tr(gamma(b)^e).

Tables are indexed by an integer whose bit i is the coordinate b_i of
gamma = sum_i b_i alpha_i.  Reports use 1-based qubit labels (qubit i+1
carries b_i).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .gf2e import FieldSpec
from .selfdual import SelfDualBasis, all_elements_from_bits, find_self_dual_basis, paper_basis_s10


class DegreeError(ValueError):
    """A phase polynomial has a monomial above the allowed degree."""


def phase_table(basis: SelfDualBasis, exponent: int) -> np.ndarray:
    spec = basis.spec
    gam = all_elements_from_bits(basis)
    return spec.trace(spec.pow(gam, exponent)).astype(np.uint8)


def moebius(table: np.ndarray) -> np.ndarray:
    """Binary Moebius transform along the last axis (its own inverse)."""
    f = np.array(table, dtype=np.uint8, copy=True)
    size = f.shape[-1]
    s = size.bit_length() - 1
    if size != 1 << s:
        raise ValueError("table length must be a power of two")
    lead = f.shape[:-1]
    for i in range(s):
        v = f.reshape(*lead, -1, 2, 1 << i)
        v[..., 1, :] ^= v[..., 0, :]
    return f


def _popcount(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    c = np.zeros_like(x)
    while np.any(x):
        c += x & 1
        x = x >> 1
    return c


def anf_degree(table: np.ndarray) -> np.ndarray:
    """Algebraic degree of each table along the last axis (-1 for the zero function)."""
    coef = moebius(table)
    deg = _popcount(np.arange(coef.shape[-1]))
    return np.where(coef.astype(bool), deg, -1).max(axis=-1)


@dataclass(frozen=True)
class BooleanPhasePoly:
    s: int
    constant: int
    z: frozenset
    cz: frozenset
    ccz: frozenset

    @property
    def degree(self) -> int:
        for d, terms in ((3, self.ccz), (2, self.cz), (1, self.z)):
            if terms:
                return d
        return 0 if self.constant else -1

    def monomials(self) -> list[tuple[int, ...]]:
        out = [()] if self.constant else []
        out += [(i,) for i in self.z] + list(self.cz) + list(self.ccz)
        return out

    def table(self) -> np.ndarray:
        idx = np.arange(1 << self.s)
        out = np.zeros(1 << self.s, dtype=np.uint8)
        for mono in self.monomials():
            mask = sum(1 << i for i in mono)
            out ^= ((idx & mask) == mask).astype(np.uint8)
        return out


def anf(table: np.ndarray, max_degree: int | None = 3) -> BooleanPhasePoly:
    coef = moebius(table)
    s = coef.size.bit_length() - 1
    z, cz, ccz = set(), set(), set()
    for mask in np.flatnonzero(coef):
        bits = tuple(i for i in range(s) if (int(mask) >> i) & 1)
        if max_degree is not None and len(bits) > max_degree:
            raise DegreeError(f"monomial of degree {len(bits)} on qubits {[b + 1 for b in bits]}")
        if len(bits) == 1:
            z.add(bits[0])
        elif len(bits) == 2:
            cz.add(bits)
        elif len(bits) == 3:
            ccz.add(bits)
        elif len(bits) > 3:
            raise DegreeError("phase polynomial type holds degree <= 3 only")
    return BooleanPhasePoly(s, int(coef[0]), frozenset(z), frozenset(cz), frozenset(ccz))


@dataclass(frozen=True)
class GateDecomposition:
    poly: BooleanPhasePoly

    @property
    def C(self) -> int:
        return len(self.poly.ccz)

    def gate_sets(self) -> dict[str, list]:
        """1-based, ascending within each gate, lexicographically sorted."""
        p = self.poly
        return {
            "z": sorted(i + 1 for i in p.z),
            "cz": sorted([i + 1 for i in m] for m in p.cz),
            "ccz": sorted([i + 1 for i in m] for m in p.ccz),
        }

    def to_json(self) -> str:
        d = self.gate_sets()
        d["C"] = self.C
        return json.dumps(d, sort_keys=False)


def decomposition(basis: SelfDualBasis, exponent: int = 7) -> GateDecomposition:
    return GateDecomposition(anf(phase_table(basis, exponent), max_degree=3))


LEVEL_NAMES = {1: "pauli", 2: "clifford", 3: "third"}


@dataclass
class HierarchyCertificate:
    exponent: int
    degree: int
    level: int
    derivative_degree_max: int
    derivatives_ok: bool

    @property
    def name(self) -> str:
        return LEVEL_NAMES.get(self.level, f"level>{3}")


def hierarchy_certificate(basis: SelfDualBasis, exponent: int) -> HierarchyCertificate:
    """Classify tr(gamma^e) by ANF degree and confirm via all discrete derivatives."""
    f = phase_table(basis, exponent)
    d = int(anf_degree(f))
    level = max(1, d)
    idx = np.arange(f.size)
    derivs = f[idx[:, None] ^ idx[None, :]] ^ f[None, :]  # row c holds f(b+c)+f(b)
    dd = anf_degree(derivs)
    dmax = int(dd[1:].max()) if f.size > 1 else -1
    return HierarchyCertificate(exponent, d, level, dmax, dmax <= max(d - 1, 0))


def _restrict(poly: BooleanPhasePoly, triple: tuple[int, int, int], outcome: dict[int, int]) -> set:
    """Monomials on `triple` left after fixing the measured qubits (constants dropped)."""
    tset = set(triple)
    out: set = set()
    for mono in poly.monomials():
        if all(outcome[i] for i in mono if i not in tset):
            inner = tuple(sorted(i for i in mono if i in tset))
            if inner:
                out ^= {inner}
    return out


def _corrections(poly: BooleanPhasePoly, triple: tuple[int, int, int], outcome: dict[int, int]) -> set:
    """The four conditional Clifford fix-ups, applied literally."""
    tset = set(triple)
    out: set = set()

    def toggle(m: Iterable[int]) -> None:
        out.symmetric_difference_update({tuple(sorted(m))})

    for i in poly.z:  # rule 1 (single-qubit part)
        if i in tset:
            toggle((i,))
    for a, b in poly.cz:
        inside = [x for x in (a, b) if x in tset]
        if len(inside) == 2:  # rule 1
            toggle((a, b))
        elif len(inside) == 1:  # rule 2
            other = b if inside[0] == a else a
            if outcome[other]:
                toggle(inside)
    for mono in poly.ccz:
        inside = [x for x in mono if x in tset]
        outside = [x for x in mono if x not in tset]
        if len(inside) == 2 and outcome[outside[0]]:  # rule 3
            toggle(inside)
        elif len(inside) == 1 and outcome[outside[0]] and outcome[outside[1]]:  # rule 4
            toggle(inside)
    return out


def ccz_extraction_check(decomp: GateDecomposition, triple: Iterable[int], one_based: bool = True) -> bool:
    """Measure every qubit outside `triple`; after the fix-ups only CCZ on `triple` may remain."""
    t = tuple(sorted(int(i) - (1 if one_based else 0) for i in triple))
    if t not in decomp.poly.ccz:
        raise ValueError(f"no CCZ gate on qubits {list(triple)}")
    rest = [i for i in range(decomp.poly.s) if i not in t]
    for bits in range(1 << len(rest)):
        outcome = {q: (bits >> j) & 1 for j, q in enumerate(rest)}
        residual = _restrict(decomp.poly, t, outcome) ^ _corrections(decomp.poly, t, outcome)
        if residual != {t}:
            return False
    return True


def search_min_ccz(spec: FieldSpec, budget: int, seed: int = 0, include_paper: bool = True) -> tuple[SelfDualBasis, int]:
    """Lowest CCZ count among `budget` self-dual bases (heuristic, not optimal).

    For the default GF(1024) field the listed reference basis is candidate 0.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    cands = []
    if include_paper and spec.s == 10 and spec.modulus == paper_basis_s10().spec.modulus:
        cands.append(paper_basis_s10())
    rng = np.random.default_rng(seed)
    best: tuple[SelfDualBasis, int] | None = None
    for i in range(budget):
        basis = cands[i] if i < len(cands) else find_self_dual_basis(spec, int(rng.integers(2**63)))
        c = decomposition(basis).C
        if best is None or c < best[1]:
            best = (basis, c)
    assert best is not None
    return best


def all_triples(s: int) -> list[tuple[int, int, int]]:
    return list(combinations(range(s), 3))
