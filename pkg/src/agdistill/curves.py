"""Function-field backends with explicit one-point Riemann-Roch bases.

Two curves are supported:

* ``rational``: the projective line over GF(2^s), genus 0, affine places
  indexed by x in GF(q), basis of L(m P_inf) = {1, x, ..., x^m}.
* ``hermitian``: y^q0 + y = x^(q0+1) over GF(q0^2), genus q0(q0-1)/2, with
  q0^3 affine places.  L(m P_inf) is spanned by x^i y^j with j < q0 and
  pole order i*q0 + j*(q0+1) <= m.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .gf2e import FieldSpec, get_field


class PoleError(ValueError):
    """A function was evaluated at the place at infinity."""


@dataclass(frozen=True)
class Curve:
    kind: str
    spec: FieldSpec
    q0: int = 0

    def __post_init__(self) -> None:
        if self.kind == "hermitian":
            if self.spec.s % 2:
                raise ValueError("hermitian curve needs an even field degree")
            if self.q0 != 1 << (self.spec.s // 2):
                raise ValueError(f"hermitian curve over GF({self.spec.q}) needs q0={1 << (self.spec.s // 2)}")
        elif self.kind == "rational":
            if self.q0:
                raise ValueError("rational curve takes no q0")
        else:
            raise ValueError(f"unknown curve kind {self.kind!r}")

    @property
    def genus(self) -> int:
        return self.q0 * (self.q0 - 1) // 2 if self.kind == "hermitian" else 0

    @property
    def descriptor(self) -> str:
        if self.kind == "hermitian":
            return f"hermitian:q0={self.q0}"
        return f"rational:s={self.spec.s}"

    @cached_property
    def _coords(self) -> tuple[np.ndarray, np.ndarray]:
        return _enumerate_affine(self)

    @property
    def num_affine(self) -> int:
        return int(self._coords[0].size)

    def place_xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates of all affine places in canonical order (read-only)."""
        return self._coords


def rational_curve(s: int, modulus: int = 0) -> Curve:
    return Curve("rational", get_field(s, modulus))


def hermitian_curve(q0: int, modulus: int = 0) -> Curve:
    s = q0.bit_length() - 1
    if q0 != 1 << s or s < 1:
        raise ValueError("q0 must be a power of two")
    return Curve("hermitian", get_field(2 * s, modulus), q0)


def parse_descriptor(text: str, modulus: int = 0) -> Curve:
    m = re.fullmatch(r"(rational):s=(\d+)|(hermitian):q0=(\d+)", text.strip())
    if not m:
        raise ValueError(f"bad curve descriptor {text!r}")
    if m.group(1):
        return rational_curve(int(m.group(2)), modulus)
    return hermitian_curve(int(m.group(4)), modulus)


@dataclass(frozen=True)
class Place:
    id: int
    coords: tuple[int, ...]
    is_infinity: bool = False


@dataclass(frozen=True, order=True)
class RRBasisElement:
    i: int
    j: int = 0

    @property
    def exponents(self) -> tuple[int, int]:
        return (self.i, self.j)


def _enumerate_affine(curve: Curve) -> tuple[np.ndarray, np.ndarray]:
    spec = curve.spec
    allv = np.arange(spec.q, dtype=np.int64)
    if curve.kind == "rational":
        xs, ys = allv, np.zeros(spec.q, dtype=np.int64)
    else:
        q0 = curve.q0
        ty = spec.pow(allv, q0) ^ allv
        nx = spec.pow(allv, q0 + 1)
        # rows x, cols y: nonzero() walks x-major then y, i.e. ascending x*q + y
        xs, ys = np.nonzero(nx[:, None] == ty[None, :])
        xs = xs.astype(np.int64)
        ys = ys.astype(np.int64)
    xs.setflags(write=False)
    ys.setflags(write=False)
    return xs, ys


def affine_places(curve: Curve) -> list[Place]:
    xs, ys = curve.place_xy()
    if curve.kind == "rational":
        return [Place(i, (int(x),)) for i, x in enumerate(xs)]
    return [Place(i, (int(x), int(y))) for i, (x, y) in enumerate(zip(xs, ys))]


def infinity_place(curve: Curve) -> Place:
    return Place(curve.num_affine, (), True)


def pole_order(curve: Curve, elem: RRBasisElement) -> int:
    if curve.kind == "rational":
        return elem.i
    return elem.i * curve.q0 + elem.j * (curve.q0 + 1)


def rr_basis(curve: Curve, m: int) -> list[RRBasisElement]:
    """Monomial basis of L(m P_inf), sorted by pole order."""
    if m < 0:
        return []
    if curve.kind == "rational":
        return [RRBasisElement(i, 0) for i in range(m + 1)]
    q0 = curve.q0
    out = []
    for j in range(q0):
        rest = m - j * (q0 + 1)
        if rest < 0:
            break
        out.extend(RRBasisElement(i, j) for i in range(rest // q0 + 1))
    return sorted(out, key=lambda e: pole_order(curve, e))


def rr_dim(curve: Curve, m: int) -> int:
    if m < 0:
        return 0
    if curve.kind == "rational":
        return m + 1
    q0 = curve.q0
    return sum((m - j * (q0 + 1)) // q0 + 1 for j in range(q0) if m >= j * (q0 + 1))


def evaluate(curve: Curve, elem: RRBasisElement, place: Place) -> int:
    if place.is_infinity:
        raise PoleError("monomials have a pole at the place at infinity")
    spec = curve.spec
    x = place.coords[0]
    y = place.coords[1] if len(place.coords) > 1 else 0
    return spec.mul_int(spec.pow_int(x, elem.i), spec.pow_int(y, elem.j))


def _monomial_values(spec: FieldSpec, monos: Sequence[RRBasisElement], xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    q1 = spec.q - 1
    lx = spec.log[xs]
    ly = spec.log[ys]
    xz = xs == 0
    yz = ys == 0
    out = np.empty((len(monos), xs.size), dtype=np.int64)
    for r, e in enumerate(monos):
        row = spec.exp[(lx * e.i + ly * e.j) % q1] if xs.size else np.zeros(0, dtype=np.int64)
        if e.i:
            row = np.where(xz, 0, row)
        if e.j:
            row = np.where(yz, 0, row)
        out[r] = row
    return out


def place_indices(curve: Curve, places: Sequence[Place] | np.ndarray | None) -> np.ndarray:
    if places is None:
        return np.arange(curve.num_affine)
    if isinstance(places, np.ndarray):
        idx = places.astype(np.int64)
    else:
        if any(p.is_infinity for p in places):
            raise PoleError("monomials have a pole at the place at infinity")
        idx = np.array([p.id for p in places], dtype=np.int64)
    if np.unique(idx).size != idx.size:
        raise ValueError("duplicate places in evaluation set")
    return idx


def evaluation_matrix(
    curve: Curve,
    m: int,
    places: Sequence[Place] | np.ndarray | None = None,
    monomials: Sequence[RRBasisElement] | None = None,
) -> np.ndarray:
    """Rows = rr_basis(m) (or `monomials`), columns = places (ids or Place objects)."""
    idx = place_indices(curve, places)
    xs, ys = curve.place_xy()
    monos = rr_basis(curve, m) if monomials is None else list(monomials)
    return _monomial_values(curve.spec, monos, xs[idx], ys[idx])
