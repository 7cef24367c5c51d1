"""BPSK over BI-AWGN and Rayleigh fading, with reproducible noise streams."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import ga

__all__ = [
    "ChannelModel",
    "RngStream",
    "bpsk",
    "transmit",
    "equivalent_awgn_noise",
    "rayleigh_capacity",
]

KINDS = ("awgn", "rayleigh")


@dataclass(frozen=True)
class ChannelModel:
    """``kind`` is ``"awgn"`` or ``"rayleigh"``; ``sigma2`` the noise variance.

    Rayleigh amplitudes are normalised so that ``E[a^2] = 1``.
    """

    kind: str
    sigma2: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not (self.sigma2 > 0 and math.isfinite(self.sigma2)):
            raise ValueError("noise variance must be positive and finite")


@dataclass(frozen=True)
class RngStream:
    """Counter-based stream keyed by ``(seed, *ids)``.

    Streams with different ids are statistically independent, and a given
    key always yields the same draws regardless of scheduling.
    """

    seed: int
    ids: tuple[int, ...] = ()

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.ids)
        return np.random.Generator(np.random.Philox(ss))


def bpsk(bits: np.ndarray) -> np.ndarray:
    """``0 -> +1``, ``1 -> -1``."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


def transmit(
    model: ChannelModel,
    codeword: np.ndarray,
    rng: np.random.Generator,
    amplitudes: np.ndarray | float | None = None,
) -> np.ndarray:
    """Send ``codeword`` through the channel and return channel LLRs.

    The receiver knows the fading amplitude, so Rayleigh LLRs are
    ``2 a y / sigma2``. Passing ``amplitudes`` overrides the fading draw.
    """
    s = bpsk(codeword)
    a = 1.0
    if model.kind == "rayleigh":
        a = (
            rng.rayleigh(scale=math.sqrt(0.5), size=s.shape)
            if amplitudes is None
            else np.broadcast_to(np.asarray(amplitudes, dtype=float), s.shape)
        )
    y = a * s + rng.normal(0.0, math.sqrt(model.sigma2), size=s.shape)
    return 2.0 * a * y / model.sigma2


@lru_cache(maxsize=1)
def _rayleigh_nodes() -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(64)
    a = 3.0 * (x + 1.0)
    return a, 3.0 * w * 2.0 * a * np.exp(-a * a)


def rayleigh_capacity(sigma2: float) -> float:
    """Ergodic capacity ``E_a[C(sigma2 / a^2)]`` of the fading channel."""
    a, w = _rayleigh_nodes()
    return float(w @ ga.llr_capacity(2.0 * a * a / sigma2))


def equivalent_awgn_noise(model: ChannelModel) -> float:
    """BI-AWGN noise variance with the same capacity as ``model``."""
    if model.kind == "awgn":
        return model.sigma2
    return ga.biawgn_capacity_inv(rayleigh_capacity(model.sigma2))
