"""Diagnostics for GA schemes: anomalous sets, census and capacity-loss error.

A node with mean ``t`` is in the polarization-reversal set (PRS) when its
check child is at least ``2t``, and in the polarization-violation set
(PVS) when its check child lies in ``[t, 2t)``. Under exact GA both sets
are empty.

Capacity-loss error (CLE) tracks how a capacity error injected at one
node grows through BEC-style recursions ``I -> I^2`` (check) and
``I -> 2I - I^2`` (variable), measured as ``|log2(I_approx / I)|`` at the
leaves.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from . import ga
from .construction import tree_levels

__all__ = [
    "NodeClass",
    "SetBoundaries",
    "CensusResult",
    "CleProfile",
    "solve_set_boundaries",
    "classify_llr_mean",
    "census",
    "bec_polarize",
    "leaf_log_errors",
    "check_counts",
    "pcle_exact",
    "pcle_bound",
    "leaf_error_bound",
    "binomial_weight_sum",
    "cle_profile",
]

LN2 = math.log(2.0)

_GRID = np.geomspace(1e-6, 100.0, 100_000)


class NodeClass(enum.Enum):
    PRS = "prs"
    PVS = "pvs"
    NORMAL = "normal"


@dataclass(frozen=True)
class SetBoundaries:
    """PRS is ``(0, a1]`` and PVS is ``(a1, a2]``; both empty when ``empty``."""

    scheme: str
    a1: float
    a2: float
    empty: bool

    def classify(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, NodeClass.NORMAL, dtype=object)
        if self.empty:
            return out
        out[(t > 0) & (t <= self.a1)] = NodeClass.PRS
        out[(t > self.a1) & (t <= self.a2)] = NodeClass.PVS
        return out


def _check_monotone(scheme: ga.GaScheme) -> None:
    idx = scheme.segment_index(_GRID)
    lw = scheme.log_omega(_GRID)
    for k in range(len(scheme.segments)):
        seg = lw[idx == k]
        if seg.size > 1 and np.any(np.diff(seg) >= 0):
            raise ga.UnsupportedSchemeError(
                f"scheme {scheme.name!r} is not decreasing on segment {k}"
            )


def solve_set_boundaries(scheme: ga.GaScheme | str) -> SetBoundaries:
    """Locate the PRS/PVS boundaries ``a1 < a2`` of a scheme.

    ``a2`` solves ``omega(a2) = 1``. ``a1`` solves
    ``1 - (1 - omega(t))^2 = omega(2t)`` on ``(0, a2)``. Each segment must
    be decreasing; jumps between segments are allowed.
    """
    scheme = ga.get_scheme(scheme)
    _check_monotone(scheme)
    lw = scheme.log_omega(_GRID)
    above = lw >= 0.0
    if scheme.segments[0].form.log_limit_at_zero() <= 0.0 and not above.any():
        return SetBoundaries(scheme.name, 0.0, 0.0, True)
    n_above = int(np.argmin(above)) if not above.all() else above.size
    if above[n_above:].any():
        raise ga.UnsupportedSchemeError("set {omega >= 1} is not an interval at zero")

    def g(t):
        return float(scheme.log_omega(np.array([t]))[0])

    lo = _GRID[n_above - 1] if n_above > 0 else 0.0
    a2 = optimize.brentq(g, lo, _GRID[n_above], xtol=1e-15, rtol=1e-14)

    def d(t):
        lw1 = scheme.log_omega(np.array([t]))
        return float(ga._log_check_image(lw1)[0] - scheme.log_omega(np.array([2 * t]))[0])

    tiny = 1e-12
    if d(tiny) > 0:
        return SetBoundaries(scheme.name, 0.0, a2, False)
    a1 = optimize.brentq(d, tiny, a2, xtol=1e-15, rtol=1e-14)
    return SetBoundaries(scheme.name, a1, a2, False)


def classify_llr_mean(scheme: ga.GaScheme | str, t: float) -> NodeClass:
    """Classify a mean by its unsimplified check child."""
    if not t > 0:
        raise ga.DomainError("mean must be positive")
    c = ga.check_update(scheme, t, simplify=False)
    if c >= 2 * t:
        return NodeClass.PRS
    if c >= t:
        return NodeClass.PVS
    return NodeClass.NORMAL


@dataclass(frozen=True)
class CensusResult:
    n: int
    pvs: int
    prs: int

    @property
    def total(self) -> int:
        return (1 << self.n) - 1

    @property
    def pvs_ratio(self) -> float:
        return self.pvs / self.total

    @property
    def prs_ratio(self) -> float:
        return self.prs / self.total


def census(scheme: ga.GaScheme | str, n: int, sigma2: float, mode: str = "interval") -> CensusResult:
    """Count PVS and PRS nodes among the ``2**n - 1`` non-leaf nodes.

    Parameters
    ----------
    mode : {"interval", "definition"}
        ``"interval"`` tests each mean against the solved boundaries.
        ``"definition"`` compares each node with its computed check child.
    """
    if n < 1:
        raise ValueError("census needs n >= 1")
    if not sigma2 > 0:
        raise ValueError("noise variance must be positive")
    scheme = ga.get_scheme(scheme)
    levels = tree_levels(scheme, n, [2.0 / sigma2])
    pvs = prs = 0
    if mode == "interval":
        b = solve_set_boundaries(scheme)
        if not b.empty:
            for lv in levels[:-1]:
                prs += int(np.count_nonzero((lv > 0) & (lv <= b.a1)))
                pvs += int(np.count_nonzero((lv > b.a1) & (lv <= b.a2)))
    elif mode == "definition":
        for lv, child in zip(levels[:-1], levels[1:]):
            c = child[:, 0::2]
            pos = lv > 0
            prs += int(np.count_nonzero(pos & (c >= 2 * lv)))
            pvs += int(np.count_nonzero(pos & (c >= lv) & (c < 2 * lv)))
    else:
        raise ValueError(f"unknown census mode {mode!r}")
    return CensusResult(n, pvs, prs)


# ---------------------------------------------------------------------------
# capacity-loss error
# ---------------------------------------------------------------------------


def bec_polarize(I: float, bit: int) -> float:
    """BEC child capacity: ``I^2`` for bit 0 (check), ``2I - I^2`` for bit 1."""
    if not 0.0 <= I <= 1.0:
        raise ga.DomainError("capacity must lie in [0, 1]")
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    return I * I if bit == 0 else 2 * I - I * I


def _validate(I: float, delta: float, d: int) -> None:
    if not 0 < I < 1:
        raise ga.DomainError("capacity must lie in (0, 1)")
    if not 0 < I + delta < 1:
        raise ga.DomainError("perturbed capacity must lie in (0, 1)")
    if d < 0:
        raise ValueError("depth must be non-negative")


def leaf_log_errors(I: float, delta: float, d: int) -> np.ndarray:
    """Signed ``log2(I_approx / I)`` at each of the ``2**d`` leaves.

    The recursion carries ``log I`` and the log error so that neither
    trajectory underflows.
    """
    _validate(I, delta, d)
    lI = np.array([math.log(I)])
    e = np.array([math.log1p(delta / I) / LN2])
    for _ in range(d):
        li_c, e_c = 2.0 * lI, 2.0 * e
        cap = np.exp(lI)
        x = e * LN2
        # the perturbed capacity stays below one, so exp(lI + x) cannot overflow
        with np.errstate(over="ignore", invalid="ignore"):
            gap = np.where(x < 1.0, cap * np.expm1(np.minimum(x, 1.0)), np.exp(lI + x) - cap)
        li_v = lI + np.log(2.0 - cap)
        e_v = e + np.log1p(-gap / (2.0 - cap)) / LN2
        lI = np.empty(2 * lI.size)
        lI[0::2], lI[1::2] = li_c, li_v
        e = np.empty(lI.size)
        e[0::2], e[1::2] = e_c, e_v
    return e


def check_counts(d: int) -> np.ndarray:
    """Number of check steps on the path to each of the ``2**d`` leaves."""
    j = np.arange(1 << d)
    ones = np.zeros_like(j)
    for b in range(d):
        ones += (j >> b) & 1
    return d - ones


def pcle_exact(I: float, delta: float, d: int) -> float:
    """Total ``|log2(I_approx/I)|`` over the ``2**d`` leaves."""
    return float(np.abs(leaf_log_errors(I, delta, d)).sum())


def pcle_bound(I: float, delta: float, d: int) -> float:
    """``3**d * |log2(1 + delta/I)|``."""
    _validate(I, delta, d)
    return 3.0**d * abs(math.log1p(delta / I) / LN2)


def leaf_error_bound(I: float, delta: float, d: int, alpha: int) -> float:
    """Per-leaf bound ``2**alpha * |log2(1 + delta/I)|``."""
    _validate(I, delta, d)
    if not 0 <= alpha <= d:
        raise ValueError("alpha must lie in [0, d]")
    return 2.0**alpha * abs(math.log1p(delta / I) / LN2)


def binomial_weight_sum(d: int) -> int:
    """``sum_alpha C(d, alpha) 2**alpha``, equal to ``3**d``."""
    return int(sum(int(special.comb(d, a, exact=True)) << a for a in range(d + 1)))


@dataclass
class CleProfile:
    """End-to-end CLE on a grid of root means.

    ``cle`` sums ``|log2(I_scheme / I_exact)|`` over the leaves.
    ``injection_bound`` sums ``3**(n-r) |log2(1 + rho)|`` over every check
    step, where ``rho`` is the relative capacity error of that single step
    applied to the exact parent mean.
    """

    scheme: str
    n: int
    t: np.ndarray
    cle: np.ndarray
    injection_bound: np.ndarray

    @property
    def mean_cle(self) -> float:
        return float(np.mean(self.cle))


def _log2_ratio(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.abs(np.log2(a) - np.log2(b))


def cle_profile(scheme: ga.GaScheme | str, n: int, t_grid) -> CleProfile:
    """CLE of ``scheme`` against exact GA at depth ``n`` for each root mean."""
    scheme = ga.get_scheme(scheme)
    t = np.asarray(t_grid, dtype=float)
    if np.any(~(t > 0)):
        raise ga.DomainError("root means must be positive")
    exact = tree_levels(ga.EXACT, n, t)
    approx = tree_levels(scheme, n, t)
    cle = _log2_ratio(ga.llr_capacity(approx[-1]), ga.llr_capacity(exact[-1])).sum(axis=1)
    bound = np.zeros(t.size)
    for r in range(n):
        parent = exact[r]
        c_exact = exact[r + 1][:, 0::2]
        c_approx = ga.check_update(scheme, parent)
        step = _log2_ratio(ga.llr_capacity(c_approx), ga.llr_capacity(c_exact))
        bound += 3.0 ** (n - r - 1) * step.sum(axis=1)
    return CleProfile(scheme.name, n, t, cle, bound)
