"""Dense state-vector checks of gate teleportation and CCZ twirling."""

from __future__ import annotations

import numpy as np

from .gf2e import get_field


def _random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _phase_aligned_distance(out: np.ndarray, target: np.ndarray) -> float:
    ov = np.vdot(target, out)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(out - phase * target))


def _teleport(phase: np.ndarray, magic: np.ndarray, psi: np.ndarray, add) -> float:
    """Shared teleportation core over an additive group of size d.

    Register 1 holds the magic state, register 2 the input.  The controlled
    shift maps |g>|h> to |g>|h+g>; measuring register 2 yields b and the
    correction is U X^b U on register 1.  Returns the worst deviation over
    all outcomes with nonzero probability.
    """
    d = phase.size
    g = np.arange(d)
    state = magic[:, None] * psi[None, :]
    shifted = np.zeros_like(state)
    shifted[g[:, None], add(g[None, :], g[:, None])] = state
    worst = 0.0
    target = phase * psi
    for b in range(d):
        branch = shifted[:, b].copy()
        norm = np.linalg.norm(branch)
        if norm < 1e-14:
            continue
        branch /= norm
        branch = phase * branch
        moved = np.zeros_like(branch)
        moved[add(g, b)] = branch  # X^b: |g> -> |g+b>
        out = phase * moved
        worst = max(worst, _phase_aligned_distance(out, target))
    return worst


def u_phases(s: int = 5) -> np.ndarray:
    """(-1)^tr(gamma^7) for every gamma in GF(2^s), indexed by bit mask."""
    spec = get_field(s)
    g = np.arange(spec.q)
    return 1.0 - 2.0 * spec.trace(spec.pow(g, 7)).astype(float)


def teleport_u_check(seed: int = 0, n_states: int = 1, psi: np.ndarray | None = None, s: int = 5) -> float:
    ph = u_phases(s)
    q = ph.size
    magic = ph / np.sqrt(q)
    rng = np.random.default_rng(seed)
    states = [np.asarray(psi, dtype=complex)] if psi is not None else [_random_state(rng, q) for _ in range(n_states)]
    return max(_teleport(ph, magic, st, np.bitwise_xor) for st in states)


def ccz_phases() -> np.ndarray:
    return np.array([-1.0 if x == 7 else 1.0 for x in range(8)])


def ccz_state() -> np.ndarray:
    return ccz_phases() / np.sqrt(8)


def teleport_ccz_check(seed: int = 0, n_states: int = 1, psi: np.ndarray | None = None) -> float:
    """Three CNOTs from the |CCZ> register into the input, measure, fix with CCZ X^b CCZ."""
    ph = ccz_phases()
    rng = np.random.default_rng(seed)
    states = [np.asarray(psi, dtype=complex)] if psi is not None else [_random_state(rng, 8) for _ in range(n_states)]
    return max(_teleport(ph, ccz_state(), st, np.bitwise_xor) for st in states)


def _x_string(d: int) -> np.ndarray:
    p = np.zeros((8, 8))
    for x in range(8):
        p[x ^ d, x] = 1.0
    return p


def stabilisers() -> list[np.ndarray]:
    """S^(d) = CCZ X^d CCZ for d in {0,1}^3."""
    c = np.diag(ccz_phases())
    return [c @ _x_string(d) @ c for d in range(8)]


def m_basis() -> np.ndarray:
    """Columns Z^b |CCZ>, b in {0,1}^3 (bit i of b acts on qubit i)."""
    cols = []
    x = np.arange(8)
    for b in range(8):
        signs = np.array([(-1.0) ** bin(b & xx).count("1") for xx in x])
        cols.append(signs * ccz_state())
    return np.array(cols).T


def twirl(rho: np.ndarray) -> np.ndarray:
    return sum(S @ rho @ S.conj().T for S in stabilisers()) / 8


def _random_density(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def twirl_check(seed: int = 0, n_densities: int = 1, rho: np.ndarray | None = None) -> float:
    """Largest off-diagonal entry of the twirled state in the Z^b|CCZ> basis."""
    rng = np.random.default_rng(seed)
    V = m_basis()
    mats = [np.asarray(rho, dtype=complex)] if rho is not None else [_random_density(rng) for _ in range(n_densities)]
    worst = 0.0
    for r in mats:
        t = V.conj().T @ twirl(r) @ V
        off = t - np.diag(np.diag(t))
        worst = max(worst, float(np.abs(off).max()))
    return worst


def twirl_properties(seed: int = 0, n_densities: int = 10) -> dict[str, float]:
    """Deviation from idempotence, trace preservation, and basis orthonormality."""
    rng = np.random.default_rng(seed)
    idem = tr = 0.0
    for _ in range(n_densities):
        r = _random_density(rng)
        t1 = twirl(r)
        idem = max(idem, float(np.abs(twirl(t1) - t1).max()))
        tr = max(tr, abs(complex(np.trace(t1)) - 1.0))
    V = m_basis()
    ortho = float(np.abs(V.conj().T @ V - np.eye(8)).max())
    return {"idempotence": idem, "trace": tr, "orthonormality": ortho}
