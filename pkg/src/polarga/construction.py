"""Polar code construction: reliability profiles and information sets.

Leaf ``j`` (1-based) of the depth-``n`` polarization tree is the
synthetic channel whose path, read from the root, is the binary
expansion of ``j - 1`` with 0 meaning a check step. This indexing
addresses ``u`` directly under ``G_N = B_N F^{(x)n}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import ga

__all__ = [
    "BecHeuristic",
    "ReliabilityProfile",
    "PolarCode",
    "get_method",
    "mean_tree",
    "tree_levels",
    "compute_reliabilities",
    "select_information_set",
    "sc_upper_bound",
    "construct_code",
    "MAX_LEVEL",
]

MAX_LEVEL = 24


@dataclass(frozen=True)
class BecHeuristic:
    """BEC capacity recursion started from the BI-AWGN capacity.

    Check children get ``I^2`` and variable children ``2I - I^2``; the
    leaf capacities serve as reliability scores.
    """

    name: str = "bec"


ConstructionMethod = ga.GaScheme | BecHeuristic


def get_method(name: str | ConstructionMethod) -> ConstructionMethod:
    if isinstance(name, (ga.GaScheme, BecHeuristic)):
        return name
    if name.lower() == "bec":
        return BecHeuristic()
    return ga.get_scheme(name)


@dataclass
class ReliabilityProfile:
    """Per-leaf reliabilities of a depth-``n`` tree.

    ``means`` and ``error_probs`` are set for GA methods. The BEC
    heuristic fills ``scores`` (higher is more reliable) instead.
    """

    method: str
    n: int
    sigma2: float
    means: np.ndarray | None = None
    error_probs: np.ndarray | None = None
    scores: np.ndarray | None = None

    @property
    def N(self) -> int:
        return 1 << self.n

    def ranking_values(self) -> np.ndarray:
        return self.means if self.means is not None else self.scores


def _check_level(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0 or n > MAX_LEVEL:
        raise ValueError(f"level must be an integer in [0, {MAX_LEVEL}]")


def _check_sigma2(sigma2: float) -> None:
    if not (sigma2 > 0 and math.isfinite(sigma2)):
        raise ValueError("noise variance must be positive and finite")


def tree_levels(scheme: ga.GaScheme | str, n: int, roots) -> list[np.ndarray]:
    """Means at depths ``0..n`` for a batch of root means.

    Entry ``i`` has shape ``(len(roots), 2**i)``.
    """
    _check_level(n)
    scheme = ga.get_scheme(scheme)
    cur = np.asarray(roots, dtype=float).reshape(-1, 1)
    levels = [cur]
    for _ in range(n):
        nxt = np.empty((cur.shape[0], 2 * cur.shape[1]))
        nxt[:, 0::2] = ga.check_update(scheme, cur)
        nxt[:, 1::2] = 2.0 * cur
        levels.append(nxt)
        cur = nxt
    return levels


def mean_tree(scheme: ga.GaScheme | str, n: int, root: float) -> list[np.ndarray]:
    """LLR means at every depth ``0..n`` for one root mean.

    Entry ``i`` has length ``2**i``; position ``j`` holds the depth-``i``
    node whose path is the binary expansion of ``j``.
    """
    return [lv[0] for lv in tree_levels(scheme, n, [root])]


def _bec_scores(n: int, sigma2: float) -> np.ndarray:
    cap = np.array([ga.biawgn_capacity(sigma2)])
    for _ in range(n):
        nxt = np.empty(2 * cap.size)
        nxt[0::2] = cap * cap
        nxt[1::2] = 2.0 * cap - cap * cap
        cap = nxt
    return cap


def compute_reliabilities(method: str | ConstructionMethod, n: int, sigma2: float) -> ReliabilityProfile:
    """Reliabilities of all ``2**n`` synthetic channels.

    Parameters
    ----------
    method : str or scheme
        ``"ega"``/``"exact"``, ``"chung"``, ``"aga2"``, ``"aga3"``,
        ``"aga4"`` or ``"bec"``.
    n : int
        Tree depth, ``N = 2**n``.
    sigma2 : float
        BI-AWGN noise variance; the root mean is ``2 / sigma2``.
    """
    _check_level(n)
    _check_sigma2(sigma2)
    method = get_method(method)
    if isinstance(method, BecHeuristic):
        return ReliabilityProfile(method.name, n, sigma2, scores=_bec_scores(n, sigma2))
    means = mean_tree(method, n, 2.0 / sigma2)[-1]
    probs = ga.gaussian_tail(np.sqrt(means / 2.0))
    return ReliabilityProfile(method.name, n, sigma2, means=means, error_probs=probs)


def select_information_set(profile: ReliabilityProfile, k: int) -> tuple[int, ...]:
    """The ``k`` most reliable leaves as sorted 1-based indices.

    Ties go to the smaller index.
    """
    N = profile.N
    if not 0 <= k <= N:
        raise ValueError(f"K must lie in [0, {N}]")
    values = profile.ranking_values()
    order = np.lexsort((np.arange(N), -values))
    return tuple(int(i) + 1 for i in np.sort(order[:k]))


def sc_upper_bound(profile: ReliabilityProfile, info_set) -> float:
    """Union bound ``min(1, sum_j Q(sqrt(m_j / 2)))`` over the info set."""
    if profile.error_probs is None:
        raise ValueError(f"method {profile.method!r} provides no error probabilities")
    idx = np.asarray(info_set, dtype=int) - 1
    if idx.size and (idx.min() < 0 or idx.max() >= profile.N):
        raise ValueError("information index out of range")
    return float(min(1.0, profile.error_probs[idx].sum()))


@dataclass
class PolarCode:
    n: int
    K: int
    info_set: tuple[int, ...]
    method: str
    sigma2: float
    profile: ReliabilityProfile | None = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def info_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[np.asarray(self.info_set, dtype=int) - 1] = True
        return mask

    @property
    def sc_bound(self) -> float | None:
        if self.profile is None or self.profile.error_probs is None:
            return None
        return sc_upper_bound(self.profile, self.info_set)

    @classmethod
    def from_info_set(cls, n: int, info_set, method: str = "custom", sigma2: float = math.nan) -> "PolarCode":
        info = tuple(sorted(int(i) for i in info_set))
        if len(set(info)) != len(info) or (info and (info[0] < 1 or info[-1] > 1 << n)):
            raise ValueError("information set must hold distinct indices in [1, N]")
        return cls(n, len(info), info, method, sigma2)

    def to_json(self, include_means: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "method": self.method,
            "n": self.n,
            "N": self.N,
            "K": self.K,
            "sigma2": self.sigma2,
            "info_set": list(self.info_set),
            "sc_bound": self.sc_bound,
        }
        if include_means and self.profile is not None and self.profile.means is not None:
            out["means"] = self.profile.means.tolist()
        return out


def construct_code(method: str | ConstructionMethod, n: int, K: int, sigma2: float) -> PolarCode:
    """Build an ``(N, K)`` polar code for a BI-AWGN design noise level."""
    _check_level(n)
    if not 0 <= K <= 1 << n:
        raise ValueError(f"K must lie in [0, {1 << n}]")
    profile = compute_reliabilities(method, n, sigma2)
    info = select_information_set(profile, K)
    return PolarCode(n, K, info, profile.method, sigma2, profile)
