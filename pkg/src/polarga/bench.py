"""Monte Carlo BLER simulation and the normal-approximation rate limit."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from . import codec, ga
from .channel import ChannelModel, RngStream, equivalent_awgn_noise, transmit
from .construction import PolarCode, construct_code

__all__ = [
    "SimConfig",
    "PointResult",
    "SimResult",
    "run_bler",
    "simulate_trials",
    "DispersionResult",
    "NoSolutionError",
    "max_rate",
    "dispersion_limit",
]

DECODERS = ("sc", "scl", "adcascl")


@dataclass(frozen=True)
class SimConfig:
    """One BLER sweep.

    ``k`` counts all information positions, including the 16 CRC bits when
    ``crc16`` is set. Eb/N0 is converted with ``R = k / 2**n``. For
    ``adcascl`` the ``list_size`` is the largest list tried.
    """

    n: int
    k: int
    ebn0_db: tuple[float, ...]
    method: str = "aga4"
    decoder: str = "sc"
    list_size: int = 8
    crc16: bool = False
    channel: str = "awgn"
    target_errors: int = 100
    max_trials: int = 1_000_000
    seed: int = 0
    design_snr_db: float | None = None
    batch_size: int = 256
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ebn0_db", tuple(float(v) for v in self.ebn0_db))
        N = 1 << self.n
        if not 1 <= self.k <= N:
            raise ValueError(f"k must lie in [1, {N}]")
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.decoder == "adcascl" and not self.crc16:
            raise ValueError("adcascl decoding needs crc16")
        if self.crc16 and self.k <= codec.CRC_LEN:
            raise ValueError("k must exceed the 16 CRC bits")
        if self.list_size < 1 or self.list_size & (self.list_size - 1):
            raise ValueError("list size must be a power of two")
        if self.target_errors < 1 or self.max_trials < 1 or self.batch_size < 1:
            raise ValueError("stop rule and batch size must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if not self.ebn0_db:
            raise ValueError("at least one Eb/N0 point is required")

    @property
    def rate(self) -> float:
        return self.k / (1 << self.n)

    @property
    def payload_bits(self) -> int:
        return self.k - codec.CRC_LEN if self.crc16 else self.k


@dataclass
class PointResult:
    ebn0_db: float
    sigma2: float
    trials: int
    block_errors: int
    sc_bound: float | None
    elapsed: float = 0.0

    @property
    def bler(self) -> float:
        return self.block_errors / self.trials

    @property
    def std_error(self) -> float:
        p = self.bler
        return math.sqrt(p * (1 - p) / self.trials)


@dataclass
class SimResult:
    config: SimConfig
    points: list[PointResult] = field(default_factory=list)


@dataclass(frozen=True)
class _Job:
    n: int
    info_set: tuple[int, ...]
    decoder: str
    list_size: int
    crc16: bool
    channel: str
    sigma2: float
    seed: int
    point: int


def simulate_trials(job: _Job, start: int, stop: int) -> np.ndarray:
    """Block-error flags for trials ``start..stop-1`` of one point."""
    code = PolarCode.from_info_set(job.n, job.info_set)
    model = ChannelModel(job.channel, job.sigma2)
    kp = code.K - codec.CRC_LEN if job.crc16 else code.K
    count = stop - start
    payload = np.empty((count, kp), dtype=np.uint8)
    llrs = np.empty((count, code.N))
    for i, t in enumerate(range(start, stop)):
        g = RngStream(job.seed, (job.point, t)).generator()
        payload[i] = g.integers(0, 2, kp, dtype=np.uint8)
        cw = codec.encode(code, payload[i], crc=job.crc16)
        llrs[i] = transmit(model, cw, g)
    if job.decoder == "sc":
        est, _ = codec.sc_decode(code, llrs, crc=job.crc16)
    elif job.decoder == "scl":
        est = codec.scl_payload(code, llrs, job.list_size, crc=job.crc16)
    else:
        est = codec.adcascl_decode(code, llrs, job.list_size)
    return np.any(est != payload, axis=1)


def _run_point(job: _Job, cfg: SimConfig, pool: ProcessPoolExecutor | None) -> tuple[int, int]:
    trials = errors = 0
    next_start = 0
    wave = cfg.workers if pool is not None else 1
    while trials < cfg.max_trials:
        spans = []
        for _ in range(wave):
            if next_start >= cfg.max_trials:
                break
            stop = min(next_start + cfg.batch_size, cfg.max_trials)
            spans.append((next_start, stop))
            next_start = stop
        if pool is None:
            outs = [simulate_trials(job, a, b) for a, b in spans]
        else:
            futs = [pool.submit(simulate_trials, job, a, b) for a, b in spans]
            outs = [f.result() for f in futs]
        for flags in outs:
            cum = errors + np.cumsum(flags)
            hit = np.flatnonzero(cum >= cfg.target_errors)
            if hit.size:
                return trials + int(hit[0]) + 1, cfg.target_errors
            trials += flags.size
            errors = int(cum[-1]) if flags.size else errors
    return trials, errors


def run_bler(config: SimConfig, progress: Callable[[PointResult], None] | None = None) -> SimResult:
    """Simulate every Eb/N0 point of ``config``.

    Each point stops at the trial where the error count first reaches
    ``target_errors``, or after ``max_trials``. Trial ``t`` of point ``i``
    draws from its own stream keyed by ``(seed, i, t)``, so results do not
    depend on ``workers`` or ``batch_size``.
    """
    result = SimResult(config)
    codes: dict[float, PolarCode] = {}
    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for i, db in enumerate(config.ebn0_db):
            t0 = time.perf_counter()
            sigma2 = float(ga.ebn0_to_noise_variance(db, config.rate))
            design_db = db if config.design_snr_db is None else config.design_snr_db
            design = float(ga.ebn0_to_noise_variance(design_db, config.rate))
            design = equivalent_awgn_noise(ChannelModel(config.channel, design))
            if design not in codes:
                codes[design] = construct_code(config.method, config.n, config.k, design)
            code = codes[design]
            job = _Job(
                config.n,
                code.info_set,
                config.decoder,
                config.list_size,
                config.crc16,
                config.channel,
                sigma2,
                config.seed,
                i,
            )
            trials, errors = _run_point(job, config, pool)
            pt = PointResult(db, sigma2, trials, errors, code.sc_bound, time.perf_counter() - t0)
            result.points.append(pt)
            if progress is not None:
                progress(pt)
    finally:
        if pool is not None:
            pool.shutdown()
    return result


# ---------------------------------------------------------------------------
# normal approximation
# ---------------------------------------------------------------------------


class NoSolutionError(ValueError):
    """No Eb/N0 in the search range supports the requested rate."""


@dataclass(frozen=True)
class DispersionResult:
    N: int
    K: int
    epsilon: float
    ebn0_db: float
    sigma2: float
    capacity: float
    dispersion: float


def _check_query(N: int, epsilon: float) -> None:
    if N < 1:
        raise ValueError("blocklength must be positive")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")


def max_rate(N: int, epsilon: float, sigma2: float) -> float:
    """``C - sqrt(V / N) Q^-1(epsilon)`` for BI-AWGN."""
    _check_query(N, epsilon)
    c, v = ga.biawgn_dispersion(sigma2)
    return c - math.sqrt(v / N) * ga.gaussian_tail_inv(epsilon)


def dispersion_limit(
    N: int, K: int, epsilon: float, lo_db: float = -10.0, hi_db: float = 20.0
) -> DispersionResult:
    """Smallest Eb/N0 at which ``max_rate`` reaches ``K / N``."""
    _check_query(N, epsilon)
    if not 1 <= K <= N:
        raise ValueError("K must lie in [1, N]")
    rate = K / N

    def gap(db):
        return max_rate(N, epsilon, float(ga.ebn0_to_noise_variance(db, rate))) - rate

    if gap(hi_db) < 0:
        raise NoSolutionError(f"rate {rate:.4f} not reachable below {hi_db} dB")
    if gap(lo_db) >= 0:
        raise NoSolutionError(f"rate {rate:.4f} already reachable at {lo_db} dB")
    db = optimize.brentq(gap, lo_db, hi_db, xtol=1e-9)
    s2 = float(ga.ebn0_to_noise_variance(db, rate))
    c, v = ga.biawgn_dispersion(s2)
    return DispersionResult(N, K, epsilon, db, s2, c, v)
