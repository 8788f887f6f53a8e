"""Evaluation codes C_L(D, a P_inf), residue vectors and distance bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .curves import Curve, Place, evaluation_matrix, place_indices, rr_basis, rr_dim


class ParameterError(ValueError):
    """A parameter inequality required by the construction does not hold."""


class TrivialKernelError(RuntimeError):
    pass


@dataclass
class EvaluationCode:
    curve: Curve
    a: int
    places: np.ndarray  # place ids, in coordinate order
    gen: np.ndarray
    rank: int


def build_code(curve: Curve, a: int, places: Sequence[Place] | np.ndarray | None = None, check_rank: bool = True) -> EvaluationCode:
    idx = place_indices(curve, places)
    g = curve.genus
    if a < 2 * g - 1 or a < g:
        raise ParameterError(f"a >= 2g-1 violated (a={a}, g={g})")
    if a >= idx.size:
        raise ParameterError(f"a < number of places violated (a={a}, n={idx.size})")
    gen = evaluation_matrix(curve, a, idx)
    expected = a + 1 - g
    if gen.shape[0] != expected:
        raise RuntimeError("Riemann-Roch dimension mismatch")  # pragma: no cover
    if check_rank and not linalg.full_row_rank(curve.spec, gen):
        raise RuntimeError("evaluation map is not injective")
    return EvaluationCode(curve, a, idx, gen, expected)


def dual_distance_bound(a: int, g: int) -> int:
    return a - (2 * g - 2)


@dataclass
class ResidueVector:
    values: np.ndarray
    zero_support: np.ndarray
    kernel_dim: int
    route: str
    coeffs: list[int] = field(default_factory=list)


def _is_full_hermitian(curve: Curve, idx: np.ndarray) -> bool:
    return curve.kind == "hermitian" and idx.size == curve.num_affine and np.array_equal(np.sort(idx), np.arange(curve.num_affine))


def residue_kernel(curve: Curve, deg: int, places=None, route: str = "auto") -> tuple[np.ndarray, str]:
    """Basis of the dual of C_L(D, deg P_inf) as rows.

    For the Hermitian curve with D = all affine places the dual is known in
    closed form: dx/(x^q - x) has residue 1 at every affine place and divisor
    (2g-2+n)P_inf - D, so the dual is C_L(D, (2g-2+n-deg) P_inf) with no
    column multipliers.  Elsewhere the kernel is computed by elimination.
    """
    idx = place_indices(curve, places)
    if route == "auto":
        route = "structured" if _is_full_hermitian(curve, idx) else "elimination"
    if route == "structured":
        if not _is_full_hermitian(curve, idx):
            raise ValueError("structured route needs the Hermitian curve with every affine place")
        dual_deg = 2 * curve.genus - 2 + idx.size - deg
        return evaluation_matrix(curve, dual_deg, idx), route
    if route != "elimination":
        raise ValueError(f"unknown route {route!r}")
    return linalg.nullspace(curve.spec, evaluation_matrix(curve, deg, idx)), route


def dual_residue_vector(curve: Curve, deg7AE: int, places=None, seed: int = 0, route: str = "auto") -> ResidueVector:
    """Nonzero v orthogonal to ev(L(deg7AE P_inf)) on `places`.

    The kernel basis is fixed by the route; v is the combination of its rows
    with nonzero coefficients drawn from default_rng(seed).
    """
    spec = curve.spec
    kern, used = residue_kernel(curve, deg7AE, places, route)
    if kern.shape[0] == 0:
        raise TrivialKernelError("residue kernel is trivial")
    rng = np.random.default_rng(seed)
    coeffs = spec.random(rng, kern.shape[0], nonzero=True)
    v = np.zeros(kern.shape[1], dtype=np.int64)
    for c, row in zip(coeffs, kern):
        v ^= spec.mul(row, int(c))
    if not v.any():  # pragma: no cover - needs a dependent kernel basis
        raise TrivialKernelError("residue combination vanished")
    return ResidueVector(v, np.flatnonzero(v == 0), kern.shape[0], used, [int(c) for c in coeffs])


def check_orthogonal(curve: Curve, deg: int, places, v: np.ndarray, sample: int | None = None, seed: int = 0) -> bool:
    """Recompute <v, ev(f)> for monomials f of L(deg P_inf), all or a random sample."""
    idx = place_indices(curve, places)
    monos = rr_basis(curve, deg)
    if sample is not None and sample < len(monos):
        rng = np.random.default_rng(seed)
        pick = np.sort(rng.choice(len(monos), size=sample, replace=False))
        monos = [monos[i] for i in pick]
    spec = curve.spec
    for start in range(0, len(monos), 256):
        block = evaluation_matrix(curve, deg, idx, monos[start : start + 256])
        if np.any(spec.matvec(block, v)):
            return False
    return True


def vanishing_coefficients(code: EvaluationCode, punct: Sequence[int]) -> np.ndarray:
    """Coefficient vectors (over the monomial basis) of functions vanishing on `punct`."""
    punct = list(punct)
    g = code.curve.genus
    if len(punct) >= dual_distance_bound(code.a, g):
        raise ParameterError("number of punctured places must be below a-(2g-2)")
    spec = code.curve.spec
    if not punct:
        return np.eye(code.gen.shape[0], dtype=np.int64)
    coeffs = linalg.nullspace(spec, code.gen[:, punct].T)
    expected = code.a - len(punct) + 1 - g
    if coeffs.shape[0] != expected:
        raise RuntimeError(f"vanishing subcode has dimension {coeffs.shape[0]}, expected {expected}")
    return coeffs


def vanishing_subbasis(code: EvaluationCode, punct: Sequence[int]) -> np.ndarray:
    """Generator rows of the subcode of `code` that is zero on coordinates `punct`."""
    coeffs = vanishing_coefficients(code, punct)
    return code.curve.spec.matmul(coeffs, code.gen)


def l_dim(curve: Curve, m: int) -> int:
    return rr_dim(curve, m)
