"""Monte-Carlo block-failure estimates for the distillation round.

Randomness is drawn per chunk of trials from default_rng([seed, chunk]),
with a fixed chunk size, so counts do not depend on how many workers run.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .csscode import full_syndrome, syndrome
from .decoder import DecoderConfig, decode_batch
from .gf2e import FieldSpec
from .triortho import TriorthogonalMatrix

CHUNK = 4096
REPORT_VERSION = 1


@dataclass(frozen=True)
class ErrorModel:
    kind: str  # "iid" or "fixed_weight"
    p: float = 0.0
    weight: int = 0

    def __post_init__(self) -> None:
        if self.kind == "iid":
            if not 0.0 <= self.p < 1.0:
                raise ValueError(f"p must lie in [0, 1), got {self.p}")
        elif self.kind == "fixed_weight":
            if self.weight < 0:
                raise ValueError("weight must be non-negative")
        else:
            raise ValueError(f"unknown error model {self.kind!r}")


def sample_errors(model: ErrorModel, n: int, spec: FieldSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """(size, n) Z-type errors; nonzero values uniform on GF(q)*."""
    if model.kind == "iid":
        hit = rng.random((size, n)) < model.p
        vals = rng.integers(1, spec.q, size=(size, n), dtype=np.int64)
        return np.where(hit, vals, 0)
    if model.weight > n:
        raise ValueError(f"weight {model.weight} exceeds block length {n}")
    out = np.zeros((size, n), dtype=np.int64)
    if model.weight:
        supp = np.argsort(rng.random((size, n)), axis=1)[:, : model.weight]
        vals = rng.integers(1, spec.q, size=(size, model.weight), dtype=np.int64)
        np.put_along_axis(out, supp, vals, axis=1)
    return out


def sample_error(model: ErrorModel, n: int, spec: FieldSpec, rng: np.random.Generator) -> np.ndarray:
    return sample_errors(model, n, spec, rng, 1)[0]


def trial_outcomes(T: TriorthogonalMatrix, cfg: DecoderConfig, errors: np.ndarray) -> np.ndarray:
    """Success flags: the residual e + e_hat must satisfy G r = 0."""
    e_hat, _ = decode_batch(cfg, syndrome(T, errors))
    resid = errors ^ e_hat
    return ~full_syndrome(T, resid).any(axis=1)


def run_trial(T: TriorthogonalMatrix, cfg: DecoderConfig, model: ErrorModel, rng: np.random.Generator) -> bool:
    e = sample_errors(model, T.n, T.spec, rng, 1)
    return bool(trial_outcomes(T, cfg, e)[0])


def wilson_interval(failures: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = failures / trials
    den = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / den
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / den
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == trials else min(1.0, centre + half)
    return lo, hi


def analytic_bound(n: int, t: int, p: float, c_conv: float = 1.0) -> float:
    """min(1, C(n, t+1) (C p)^(t+1)), evaluated in log space."""
    r = t + 1
    if p <= 0 or r > n:
        return 0.0
    x = c_conv * p
    if x >= 1:
        return 1.0
    logv = math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1) + r * math.log(x)
    return 1.0 if logv >= 0 else math.exp(logv)


def threshold_proxy(n: int, t: int, c_conv: float = 1.0) -> float:
    """1 / (C 2^((n/(t+1)) h((t+1)/n))), with h the binary entropy."""
    r = (t + 1) / n
    if r >= 1:
        return 1.0 / c_conv
    h = -r * math.log2(r) - (1 - r) * math.log2(1 - r)
    return 1.0 / (c_conv * 2 ** ((n / (t + 1)) * h))


@dataclass
class SimulationReport:
    model: str
    p: float
    weight: int
    trials: int
    block_failures: int
    epsilon: float
    ci_low: float
    ci_high: float
    analytic_bound: float
    threshold_proxy: float
    n: int
    k: int
    t: int
    C_conv: float
    seed: int
    chunk: int
    version: int = REPORT_VERSION
    wall_time: float = field(default=0.0, compare=False)

    def as_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("wall_time")
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.as_dict(timing), indent=2) + "\n"

    def to_csv(self, timing: bool = False) -> str:
        d = self.as_dict(timing)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(d))
        w.writerow([d[k] for k in d])
        return buf.getvalue()


def _chunk_failures(T: TriorthogonalMatrix, cfg: DecoderConfig, model: ErrorModel, seed: int, index: int, size: int) -> int:
    rng = np.random.default_rng([seed, index])
    e = sample_errors(model, T.n, T.spec, rng, size)
    return int(size - np.count_nonzero(trial_outcomes(T, cfg, e)))


def simulate(
    T: TriorthogonalMatrix,
    cfg: DecoderConfig,
    model: ErrorModel,
    trials: int,
    seed: int = 0,
    workers: int = 1,
    c_conv: float = 1.0,
    chunk: int = CHUNK,
) -> SimulationReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    start = time.perf_counter()
    sizes = [min(chunk, trials - i * chunk) for i in range((trials + chunk - 1) // chunk)]
    jobs = list(enumerate(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            fails = list(ex.map(lambda j: _chunk_failures(T, cfg, model, seed, j[0], j[1]), jobs))
    else:
        fails = [_chunk_failures(T, cfg, model, seed, i, s) for i, s in jobs]
    failures = sum(fails)
    lo, hi = wilson_interval(failures, trials)
    p_eff = model.p if model.kind == "iid" else 0.0
    return SimulationReport(
        model=model.kind,
        p=model.p,
        weight=model.weight,
        trials=trials,
        block_failures=failures,
        epsilon=failures / trials,
        ci_low=lo,
        ci_high=hi,
        analytic_bound=analytic_bound(T.n, cfg.t, p_eff, c_conv),
        threshold_proxy=threshold_proxy(T.n, cfg.t, c_conv),
        n=T.n,
        k=T.k,
        t=cfg.t,
        C_conv=c_conv,
        seed=seed,
        chunk=chunk,
        wall_time=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class OverheadReport:
    zeta: int
    xi: int
    ratio: Fraction

    def as_dict(self) -> dict:
        return {"zeta": self.zeta, "xi": self.xi, "ratio": str(self.ratio), "ratio_float": float(self.ratio)}


def overhead_report(T: TriorthogonalMatrix, c_conv: int) -> OverheadReport:
    """Input CCZ states per output: zeta = C n, xi = k."""
    if T.k <= 0:
        raise ValueError("artifact has k = 0")
    return OverheadReport(c_conv * T.n, T.k, Fraction(c_conv * T.n, T.k))
