"""Gaussian-approximation kernels for polar code construction.

Under the Gaussian approximation the LLR of a BI-AWGN output is modelled
as ``N(m, 2m)``. The check-node update needs ``phi(t) = 1 - E[tanh(L/2)]``
and its inverse. Everything here works in the log domain so that tiny
means (down to ~1e-300) keep full relative precision.

A scheme is an ordered list of segments, each an analytic form valid up
to an upper boundary. The preset schemes are ``EXACT``, ``CHUNG``,
``AGA2``, ``AGA3`` and ``AGA4``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import optimize, special
from scipy.optimize import elementwise

__all__ = [
    "DomainError",
    "UnsupportedSchemeError",
    "SchemeKind",
    "ExpQuadratic",
    "ExpPower",
    "AsymptoticTail",
    "ExactPhi",
    "Segment",
    "GaScheme",
    "EXACT",
    "CHUNG",
    "AGA2",
    "AGA3",
    "AGA4",
    "SCHEMES",
    "get_scheme",
    "phi_exact",
    "phi_exact_log",
    "phi_exact_complement",
    "phi_exact_inv",
    "omega_eval",
    "omega_inv",
    "check_update",
    "polarize_mean",
    "gaussian_tail",
    "gaussian_tail_inv",
    "llr_capacity",
    "biawgn_capacity",
    "biawgn_capacity_inv",
    "biawgn_dispersion",
    "ebn0_to_noise_variance",
]

LN2 = math.log(2.0)


class DomainError(ValueError):
    """Argument outside the domain of a GA function."""


class UnsupportedSchemeError(ValueError):
    """Scheme lacks a property an analysis routine relies on."""


# ---------------------------------------------------------------------------
# exact phi
# ---------------------------------------------------------------------------

_GH_NODES = 96
_SMALL_T = 1.0
_SECH_PANELS = 20
_SECH_ORDER = 20


@lru_cache(maxsize=None)
def _half_hermite() -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.hermite.hermgauss(_GH_NODES)
    keep = x > 0
    return x[keep], w[keep] / math.sqrt(math.pi)


@lru_cache(maxsize=None)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _complement_small(t: np.ndarray) -> np.ndarray:
    """``1 - phi(t)`` for ``0 < t <= 1``.

    Pairs the symmetric Hermite nodes so that
    ``tanh(A) + tanh(B) = sinh(A+B) / (cosh A cosh B)`` with ``A+B = t``.
    No cancellation, so the result is relatively accurate as ``t -> 0``.
    """
    x, w = _half_hermite()
    a = 2.0 * np.sqrt(t)[:, None] * x
    th = t[:, None]
    terms = 1.0 / (np.cosh(0.5 * (th + a)) * np.cosh(0.5 * (th - a)))
    return np.sinh(t) * (terms @ w)


def _log_phi_large(t: np.ndarray) -> np.ndarray:
    """``log phi(t)`` for ``t > 1`` from the sech representation.

    ``phi(t) = exp(-t/4) * 2/sqrt(pi t) * int_0^inf sech(v) exp(-v^2/t) dv``
    which is exact and free of underflow for any ``t``.
    """
    xg, wg = _legendre(_SECH_ORDER)
    vmax = np.minimum(40.0, 6.5 * np.sqrt(t))
    h = vmax / _SECH_PANELS
    panel = np.arange(_SECH_PANELS)
    # nodes: (len(t), panels, order)
    v = h[:, None, None] * (panel[None, :, None] + 0.5 * (xg[None, None, :] + 1.0))
    f = np.exp(-(v * v) / t[:, None, None]) / np.cosh(v)
    integral = 0.5 * h * np.einsum("ipk,k->i", f, wg)
    return -0.25 * t + np.log(2.0 * integral / np.sqrt(math.pi * t))


def _phi_parts(t: np.ndarray, want_log_phi: bool, want_log_q: bool):
    t = np.asarray(t, dtype=float)
    lp = np.zeros_like(t) if want_log_phi else None
    lq = np.full_like(t, -np.inf) if want_log_q else None
    small = (t > 0) & (t <= _SMALL_T)
    large = t > _SMALL_T
    if small.any():
        q = _complement_small(t[small])
        if want_log_phi:
            lp[small] = np.log1p(-q)
        if want_log_q:
            with np.errstate(divide="ignore"):
                lq[small] = np.log(q)
    if large.any():
        lpl = _log_phi_large(t[large])
        if want_log_phi:
            lp[large] = lpl
        if want_log_q:
            with np.errstate(divide="ignore"):
                lq[large] = np.log(-np.expm1(lpl))
    return lp, lq


def _check_nonneg(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~(t >= 0)):
        raise DomainError("LLR mean must be a non-negative real number")
    return t


def _out(x: np.ndarray, like):
    return float(x) if np.ndim(like) == 0 else x


def phi_exact_log(t):
    """Natural log of the exact ``phi(t)``; ``log phi(0) = 0``."""
    tt = _check_nonneg(t)
    lp, _ = _phi_parts(np.atleast_1d(tt), True, False)
    return _out(lp.reshape(tt.shape), t)


def phi_exact(t):
    """Exact ``phi(t) = 1 - E[tanh(L/2)]`` with ``L ~ N(t, 2t)``.

    Parameters
    ----------
    t : float or array_like
        Non-negative LLR mean.

    Returns
    -------
    float or ndarray
        Values in ``(0, 1]``; ``phi(0) = 1``. Underflows to 0 only when
        ``phi`` itself is below the smallest double (``t`` above ~2800).
    """
    return np.exp(phi_exact_log(t)) if np.ndim(t) else math.exp(phi_exact_log(t))


def phi_exact_complement(t):
    """``1 - phi(t)`` with full relative precision for small ``t``."""
    tt = _check_nonneg(t)
    _, lq = _phi_parts(np.atleast_1d(tt), False, True)
    return _out(np.exp(lq).reshape(tt.shape), t)


_ROOT_TOL = dict(xatol=1e-300, xrtol=4 * np.finfo(float).eps, fatol=0.0, frtol=0.0)


def _phi_inv_log(ly: np.ndarray) -> np.ndarray:
    """Solve ``log phi(s) = ly`` for ``ly <= 0`` (vectorised)."""
    s = np.zeros_like(ly)
    s[np.isneginf(ly)] = np.inf
    comp = (ly < 0) & (ly > -0.5)
    body = np.isfinite(ly) & (ly <= -0.5)
    if comp.any():
        # 1 - phi(s) = d, solved in log s; q(d) <= d/2 and q(8d) > d.
        d = -np.expm1(ly[comp])
        ld = np.log(d)

        def f(x, ld):
            return _phi_parts(np.exp(x), False, True)[1] - ld

        res = elementwise.find_root(f, (ld, ld + math.log(8.0)), args=(ld,), tolerances=_ROOT_TOL)
        s[comp] = np.exp(res.x)
    if body.any():
        # phi(s) <= exp(-s/4) so s = -4 ly is an upper bracket.
        target = ly[body]

        def g(x, target):
            return target - _phi_parts(np.exp(x), True, False)[0]

        lo = np.full_like(target, math.log(0.5))
        hi = np.log(-4.0 * target)
        res = elementwise.find_root(g, (lo, hi), args=(target,), tolerances=_ROOT_TOL)
        s[body] = np.exp(res.x)
    return s


def phi_exact_inv(y):
    """Inverse of :func:`phi_exact` on ``(0, 1]``."""
    yy = np.asarray(y, dtype=float)
    if np.any(~((yy > 0) & (yy <= 1))):
        raise DomainError("phi inverse needs 0 < y <= 1")
    s = _phi_inv_log(np.log(np.atleast_1d(yy)))
    return _out(s.reshape(yy.shape), y)


# ---------------------------------------------------------------------------
# segment forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpQuadratic:
    """``scale * exp(quad t^2 + lin t + const)``."""

    quad: float
    lin: float
    const: float = 0.0
    scale: float = 1.0

    @property
    def _c0(self) -> float:
        return math.log(self.scale) + self.const

    def log_value(self, t: np.ndarray) -> np.ndarray:
        return self._c0 + t * (self.lin + self.quad * t)

    def log_limit_at_zero(self) -> float:
        return self._c0

    def inverse_log(self, ly: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        c = self._c0 - ly
        if self.quad == 0.0:
            return c / -self.lin
        disc = self.lin * self.lin - 4.0 * self.quad * c
        with np.errstate(invalid="ignore"):
            # root continuous with the linear case; stable for tiny c
            return 2.0 * c / (-self.lin + np.sqrt(disc))


@dataclass(frozen=True)
class ExpPower:
    """``exp(coef t^power + const)``."""

    coef: float
    power: float
    const: float = 0.0

    def log_value(self, t: np.ndarray) -> np.ndarray:
        return self.coef * np.power(t, self.power) + self.const

    def log_limit_at_zero(self) -> float:
        return self.const

    def inverse_log(self, ly: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        base = np.maximum((ly - self.const) / self.coef, 0.0)
        return np.power(base, 1.0 / self.power)


@dataclass(frozen=True)
class AsymptoticTail:
    """``sqrt(pi/t) exp(-t/4) (1 - 10/(7t))``; defined for ``t > 10/7``."""

    newton_iterations: int = 60

    def log_value(self, t: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return 0.5 * np.log(math.pi / t) - 0.25 * t + np.log1p(-10.0 / (7.0 * t))

    def log_limit_at_zero(self) -> float:
        return math.inf

    def _dlog(self, t: np.ndarray) -> np.ndarray:
        return -0.5 / t - 0.25 + (10.0 / (7.0 * t * t)) / (1.0 - 10.0 / (7.0 * t))

    def inverse_log(self, ly: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        # Newton from -4 ln y; log value is convex and decreasing, so the
        # iterates approach the root monotonically after the first step.
        floor = np.maximum(lo, 10.0 / 7.0 + 1e-9)
        t = np.maximum(-4.0 * ly, floor)
        for _ in range(self.newton_iterations):
            step = (self.log_value(t) - ly) / self._dlog(t)
            t_new = np.maximum(t - step, floor)
            if np.all(np.abs(t_new - t) <= 1e-15 * t):
                t = t_new
                break
            t = t_new
        return t


@dataclass(frozen=True)
class ExactPhi:
    """The exact ``phi`` as a segment form."""

    def log_value(self, t: np.ndarray) -> np.ndarray:
        return _phi_parts(t, True, False)[0]

    def log_limit_at_zero(self) -> float:
        return 0.0

    def inverse_log(self, ly: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        return _phi_inv_log(np.minimum(ly, 0.0))


SegmentForm = ExpQuadratic | ExpPower | AsymptoticTail | ExactPhi


@dataclass(frozen=True)
class Segment:
    upper: float
    form: SegmentForm


class SchemeKind(enum.Enum):
    EXACT = "exact"
    CHUNG = "chung"
    AGA2 = "aga2"
    AGA3 = "aga3"
    AGA4 = "aga4"


@dataclass(frozen=True)
class GaScheme:
    """Piecewise approximation of ``phi``.

    Segment ``k`` covers ``(upper[k-1], upper[k]]`` with ``upper[-1] = 0``.
    When ``check_threshold`` is set, check updates above it use the
    simplified form ``t - check_offset``.
    """

    name: str
    kind: SchemeKind
    segments: tuple[Segment, ...]
    check_threshold: float | None = None
    check_offset: float | None = None

    def __post_init__(self):
        uppers = [s.upper for s in self.segments]
        if not uppers or uppers[-1] != math.inf:
            raise ValueError("last segment must extend to infinity")
        if any(b <= a for a, b in zip([0.0] + uppers, uppers)):
            raise ValueError("segment boundaries must be strictly increasing")
        if (self.check_threshold is None) != (self.check_offset is None):
            raise ValueError("threshold and offset must be given together")

    @property
    def boundaries(self) -> np.ndarray:
        return np.array([s.upper for s in self.segments])

    def segment_index(self, t: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.boundaries, t, side="left")

    def log_omega(self, t: np.ndarray) -> np.ndarray:
        """Log of the scheme value; ``t = 0`` gives the first-segment limit."""
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        idx = self.segment_index(t)
        for k, seg in enumerate(self.segments):
            sel = idx == k
            if sel.any():
                out[sel] = seg.form.log_value(t[sel])
        zero = t == 0
        if zero.any():
            out[zero] = self.segments[0].form.log_limit_at_zero()
        return out

    def _images(self) -> list[tuple[float, float]]:
        """Log-value range ``[low, high]`` of each segment."""
        out = []
        lo = 0.0
        for seg in self.segments:
            high = (
                seg.form.log_limit_at_zero()
                if lo == 0.0
                else float(seg.form.log_value(np.array([lo]))[0])
            )
            low = (
                -math.inf
                if seg.upper == math.inf
                else float(seg.form.log_value(np.array([seg.upper]))[0])
            )
            out.append((low, high))
            lo = seg.upper
        return out

    def inverse_log(self, ly: np.ndarray) -> np.ndarray:
        """Solve ``log omega(s) = ly``.

        Where segment images overlap the first matching segment wins; a
        value in a gap between images maps to the boundary between them.
        """
        ly = np.asarray(ly, dtype=float)
        images = self._images()
        top = images[0][1]
        if np.any(ly > top + 1e-15 * abs(top)):
            raise DomainError(
                f"value above the range of segment 0 of scheme {self.name!r}"
                f" (sup {math.exp(top):.6g})"
            )
        out = np.full_like(ly, np.nan)
        todo = np.ones(ly.shape, dtype=bool)
        lows = [0.0] + [s.upper for s in self.segments[:-1]]
        for k, (seg, (lo_img, hi_img)) in enumerate(zip(self.segments, images)):
            sel = todo & (ly >= lo_img) & (ly <= hi_img)
            if k == 0:
                sel |= todo & (ly > hi_img)
            if sel.any():
                lo = np.full(int(sel.sum()), lows[k])
                hi = np.full(int(sel.sum()), seg.upper)
                s = seg.form.inverse_log(np.minimum(ly[sel], hi_img), lo, hi)
                out[sel] = np.clip(s, lows[k], seg.upper)
                todo &= ~sel
            if k + 1 < len(self.segments):
                gap = todo & (ly < lo_img) & (ly > images[k + 1][1])
                out[gap] = seg.upper
                todo &= ~gap
        out[np.isneginf(ly)] = np.inf
        return out


EXACT = GaScheme("exact", SchemeKind.EXACT, (Segment(math.inf, ExactPhi()),))

_CHUNG_BODY = ExpPower(-0.4527, 0.86, 0.0218)

CHUNG = GaScheme(
    "chung",
    SchemeKind.CHUNG,
    (Segment(10.0, _CHUNG_BODY), Segment(math.inf, AsymptoticTail())),
)

AGA2 = GaScheme(
    "aga2",
    SchemeKind.AGA2,
    (
        Segment(7.0633, ExpQuadratic(0.0116, -0.4212)),
        Segment(math.inf, ExpQuadratic(0.0, -0.2944, -0.3169)),
    ),
    check_threshold=9.4177,
    check_offset=2.3544,
)

_AGA_TAIL = ExpQuadratic(0.0, -0.2832, -0.4254)

AGA3 = GaScheme(
    "aga3",
    SchemeKind.AGA3,
    (
        Segment(0.6357, ExpQuadratic(0.06725, -0.4908)),
        Segment(9.2254, _CHUNG_BODY),
        Segment(math.inf, _AGA_TAIL),
    ),
    check_threshold=11.673,
    check_offset=2.4476,
)

AGA4 = GaScheme(
    "aga4",
    SchemeKind.AGA4,
    (
        Segment(0.1910, ExpQuadratic(0.1047, -0.4992)),
        Segment(0.7420, ExpQuadratic(0.05315, -0.4795, scale=0.9981)),
        Segment(9.2254, _CHUNG_BODY),
        Segment(math.inf, _AGA_TAIL),
    ),
    check_threshold=11.673,
    check_offset=2.4476,
)

SCHEMES: dict[str, GaScheme] = {s.name: s for s in (EXACT, CHUNG, AGA2, AGA3, AGA4)}
SCHEMES["ega"] = EXACT


def get_scheme(name: str | GaScheme) -> GaScheme:
    if isinstance(name, GaScheme):
        return name
    try:
        return SCHEMES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown GA scheme {name!r}") from None


def omega_eval(scheme: GaScheme | str, t):
    """Evaluate the scheme at ``t >= 0``."""
    scheme = get_scheme(scheme)
    tt = _check_nonneg(t)
    v = np.exp(scheme.log_omega(np.atleast_1d(tt))).reshape(tt.shape)
    return _out(v, t)


def omega_inv(scheme: GaScheme | str, y):
    """Inverse of the scheme; ``y`` may slightly exceed 1 for Chung."""
    scheme = get_scheme(scheme)
    yy = np.asarray(y, dtype=float)
    if np.any(~(yy > 0)):
        raise DomainError("inverse needs y > 0")
    s = scheme.inverse_log(np.log(np.atleast_1d(yy))).reshape(yy.shape)
    return _out(s, y)


def _log_check_image(lw: np.ndarray) -> np.ndarray:
    """``log(1 - (1 - w)^2)`` from ``log w``."""
    w = np.exp(lw)
    c = -np.expm1(lw)
    with np.errstate(divide="ignore", invalid="ignore"):
        near_one = np.log1p(-c * c)
        general = lw + np.log(2.0 - w)
    return np.where(w > 0.5, near_one, general)


def check_update(scheme: GaScheme | str, m, simplify: bool = True):
    """Check-node mean ``omega^-1(1 - (1 - omega(m))^2)``.

    Parameters
    ----------
    scheme : GaScheme or str
    m : float or array_like
        Parent LLR means, non-negative.
    simplify : bool
        Apply ``m - offset`` above the scheme threshold when the scheme
        has one.
    """
    scheme = get_scheme(scheme)
    mm = _check_nonneg(m)
    flat = np.atleast_1d(mm).ravel()
    out = np.empty_like(flat)
    fast = np.zeros(flat.shape, dtype=bool)
    if simplify and scheme.check_threshold is not None:
        fast = flat > scheme.check_threshold
        out[fast] = flat[fast] - scheme.check_offset
    slow = ~fast
    if slow.any():
        ly = _log_check_image(scheme.log_omega(flat[slow]))
        out[slow] = scheme.inverse_log(ly)
    return _out(out.reshape(mm.shape), m)


def polarize_mean(scheme: GaScheme | str, m):
    """Return ``(check_child_mean, variable_child_mean)``."""
    mm = _check_nonneg(m)
    return check_update(scheme, m), _out(2.0 * mm, m)


# ---------------------------------------------------------------------------
# tail function, capacity, dispersion
# ---------------------------------------------------------------------------


def gaussian_tail(x):
    """``Q(x) = P(N(0,1) > x)``."""
    return special.ndtr(-np.asarray(x, dtype=float)) if np.ndim(x) else float(special.ndtr(-x))


def gaussian_tail_inv(p):
    """Inverse of :func:`gaussian_tail` on ``(0, 1)``."""
    pp = np.asarray(p, dtype=float)
    if np.any(~((pp > 0) & (pp < 1))):
        raise DomainError("tail inverse needs 0 < p < 1")
    v = -special.ndtri(pp)
    return _out(v, p)


def _series_f(z: np.ndarray) -> np.ndarray:
    """``((1+z)ln(1+z) + (1-z)ln(1-z)) / 2`` without cancellation."""
    z2 = z * z
    out = np.empty_like(z)
    small = z2 < 0.01
    if small.any():
        zz = z2[small]
        acc = np.zeros_like(zz)
        term = np.ones_like(zz)
        for k in range(1, 16):
            term = term * zz
            acc += term / (2 * k * (2 * k - 1))
        out[small] = acc
    big = ~small
    if big.any():
        zb = z[big]
        with np.errstate(divide="ignore", invalid="ignore"):
            v = 0.5 * ((1 + zb) * np.log1p(zb) + (1 - zb) * np.log1p(-zb))
        out[big] = np.where(np.abs(zb) >= 1.0, LN2, v)
    return out


_CAP_SERIES_MAX = 0.1
_CAP_PANELS = 40
_CAP_ORDER = 16


def _capacity_small(m: np.ndarray) -> np.ndarray:
    x, w = np.polynomial.hermite.hermgauss(_GH_NODES)
    w = w / math.sqrt(math.pi)
    llr = m[:, None] + 2.0 * np.sqrt(m)[:, None] * x
    return (_series_f(np.tanh(0.5 * llr)) @ w) / LN2


def _capacity_gap_large(m: np.ndarray) -> np.ndarray:
    """``1 - I`` folded onto ``u >= 0`` where the integrand is positive."""
    xg, wg = _legendre(_CAP_ORDER)
    sd = np.sqrt(2.0 * m)
    umax = np.minimum(m + 14.0 * sd, 100.0)
    h = umax / _CAP_PANELS
    panel = np.arange(_CAP_PANELS)
    u = h[:, None, None] * (panel[None, :, None] + 0.5 * (xg[None, None, :] + 1.0))
    mu = m[:, None, None]
    s = sd[:, None, None]
    dens = np.exp(-0.5 * ((u - mu) / s) ** 2) / (s * math.sqrt(2 * math.pi))
    e = np.exp(-u)
    g = (1.0 + e) * np.log1p(e) + u * e
    return 0.5 * h * np.einsum("ipk,k->i", g * dens, wg) / LN2


def llr_capacity(m):
    """Capacity (bits) of a consistent Gaussian LLR with mean ``m``.

    Relative precision is retained for tiny ``m``; ``llr_capacity(0) = 0``.
    """
    mm = _check_nonneg(m)
    flat = np.atleast_1d(mm).astype(float).ravel()
    out = np.zeros_like(flat)
    small = (flat > 0) & (flat <= _CAP_SERIES_MAX)
    large = flat > _CAP_SERIES_MAX
    if small.any():
        out[small] = _capacity_small(flat[small])
    if large.any():
        out[large] = 1.0 - _capacity_gap_large(flat[large])
    out[np.isposinf(flat)] = 1.0
    return _out(out.reshape(mm.shape), m)


def biawgn_capacity(sigma2):
    """BI-AWGN capacity at noise variance ``sigma2``."""
    s = np.asarray(sigma2, dtype=float)
    if np.any(~(s > 0)):
        raise DomainError("noise variance must be positive")
    return llr_capacity(2.0 / sigma2)


def biawgn_capacity_inv(capacity: float) -> float:
    """Noise variance whose BI-AWGN capacity equals ``capacity``."""
    if not 0.0 < capacity < 1.0:
        raise DomainError("capacity must lie in (0, 1)")

    def f(lm):
        return llr_capacity(math.exp(lm)) - capacity

    lo, hi = -30.0, 10.0
    lm = optimize.brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)
    return 2.0 / math.exp(lm)


def biawgn_dispersion(sigma2: float) -> tuple[float, float]:
    """Capacity and channel dispersion of BI-AWGN, both in bits."""
    from scipy import integrate

    m = 2.0 / sigma2
    sd = math.sqrt(2.0 * m)
    lo, hi = m - 20 * sd, m + 20 * sd

    def dens(x):
        return math.exp(-0.5 * ((x - m) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))

    def info(x):
        return 1.0 - np.logaddexp(0.0, -x) / LN2

    pts = [0.0] if lo < 0 < hi else None
    c, _ = integrate.quad(lambda x: info(x) * dens(x), lo, hi, points=pts, epsabs=1e-12, limit=200)
    s2, _ = integrate.quad(lambda x: info(x) ** 2 * dens(x), lo, hi, points=pts, epsabs=1e-12, limit=200)
    return c, s2 - c * c


def ebn0_to_noise_variance(ebn0_db, rate: float):
    """``sigma^2 = 1 / (2 R 10^(EbN0/10))`` for unit-energy BPSK."""
    if not 0 < rate <= 1:
        raise ValueError("rate must lie in (0, 1]")
    e = np.asarray(ebn0_db, dtype=float)
    v = 1.0 / (2.0 * rate * np.power(10.0, e / 10.0))
    return _out(v, ebn0_db)


def segment_table(scheme: GaScheme) -> Sequence[tuple[float, float, str]]:
    """``(lower, upper, form)`` rows, for display."""
    lows = [0.0] + [s.upper for s in scheme.segments[:-1]]
    return [(lo, s.upper, type(s.form).__name__) for lo, s in zip(lows, scheme.segments)]
