"""Polar encoder, SC / SCL / CRC-aided adaptive SCL decoders and CRC-16.

Codewords follow ``x = u B_N F^{(x)n}`` over GF(2). Since ``B_N`` commutes
with ``F^{(x)n}``, the encoder runs the natural-order butterfly and then
bit-reverses. The decoders undo the reversal on the LLRs and decode ``u``
in natural order. LLRs are ``log P(b=0)/P(b=1)``; a zero LLR decides 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .construction import PolarCode

__all__ = [
    "CRC16_POLY",
    "CRC_LEN",
    "bit_reversal",
    "polar_transform",
    "encode",
    "sc_decode",
    "scl_decode",
    "adcascl_decode",
    "ListCandidate",
    "crc16",
    "crc16_bits",
    "crc16_bitwise",
    "crc16_attach",
    "crc16_check",
]

CRC16_POLY = 0x1021
CRC_LEN = 16
LLR_CLIP = 1e30


# ---------------------------------------------------------------------------
# CRC-16 (poly 0x1021, zero init, MSB first, no reflection, no xor-out)
# ---------------------------------------------------------------------------


def crc16_bitwise(bits) -> int:
    """Reference shift-register CRC over a bit sequence."""
    reg = 0
    for b in bits:
        top = ((reg >> 15) & 1) ^ (int(b) & 1)
        reg = (reg << 1) & 0xFFFF
        if top:
            reg ^= CRC16_POLY
    return reg


def crc16(data: bytes) -> int:
    """CRC of a byte string, bits taken MSB first."""
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    return crc16_bitwise(bits)


@lru_cache(maxsize=64)
def _crc_matrix(length: int) -> np.ndarray:
    """``(length, 16)`` GF(2) matrix mapping message bits to CRC bits.

    Row ``i`` is ``x^(length-1-i+16) mod g`` with the MSB in column 0.
    """
    rows = np.zeros((length, CRC_LEN), dtype=np.uint8)
    reg = CRC16_POLY  # x^16 mod g
    shifts = (np.arange(CRC_LEN - 1, -1, -1)).astype(np.uint32)
    for j in range(length):
        rows[length - 1 - j] = (reg >> shifts) & 1
        top = reg >> 15
        reg = (reg << 1) & 0xFFFF
        if top:
            reg ^= CRC16_POLY
    return rows


def crc16_bits(bits: np.ndarray) -> np.ndarray:
    """CRC bits of each row of ``bits`` (shape ``(..., L)``)."""
    bits = np.asarray(bits, dtype=np.uint8)
    m = _crc_matrix(bits.shape[-1])
    return ((bits.astype(np.int64) @ m) & 1).astype(np.uint8)


def crc16_attach(payload: np.ndarray) -> np.ndarray:
    payload = np.asarray(payload, dtype=np.uint8)
    return np.concatenate([payload, crc16_bits(payload)], axis=-1)


def crc16_check(block: np.ndarray) -> np.ndarray | bool:
    """True where the trailing 16 bits are the CRC of the rest."""
    block = np.asarray(block, dtype=np.uint8)
    ok = np.all(crc16_bits(block[..., :-CRC_LEN]) == block[..., -CRC_LEN:], axis=-1)
    return bool(ok) if np.ndim(ok) == 0 else ok


# ---------------------------------------------------------------------------
# encoder
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def bit_reversal(n: int) -> np.ndarray:
    """Bit-reversal permutation of ``0..2**n - 1``."""
    idx = np.arange(1 << n)
    rev = np.zeros_like(idx)
    for b in range(n):
        rev |= ((idx >> b) & 1) << (n - 1 - b)
    return rev


def polar_transform(u: np.ndarray) -> np.ndarray:
    """``u F^{(x)n}`` along the last axis (natural order)."""
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    lead = x.shape[:-1]
    h = 1
    while h < N:
        v = x.reshape(*lead, N // (2 * h), 2, h)
        v[..., 0, :] ^= v[..., 1, :]
        h *= 2
    return x


def _payload_len(code: PolarCode, crc: bool) -> int:
    if crc and code.K < CRC_LEN:
        raise ValueError("CRC needs at least 16 information positions")
    return code.K - CRC_LEN if crc else code.K


def encode(code: PolarCode, payload, crc: bool = False) -> np.ndarray:
    """Encode payload bits (shape ``(K,)`` or ``(B, K)``).

    With ``crc`` the payload has ``K - 16`` bits and its CRC occupies the
    last 16 information positions.
    """
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.shape[-1] != _payload_len(code, crc):
        raise ValueError("payload length does not match the code")
    if np.any(payload > 1):
        raise ValueError("payload must be binary")
    bits = crc16_attach(payload) if crc else payload
    u = np.zeros(payload.shape[:-1] + (code.N,), dtype=np.uint8)
    u[..., code.info_mask] = bits
    return polar_transform(u)[..., bit_reversal(code.n)]


# ---------------------------------------------------------------------------
# decoders
# ---------------------------------------------------------------------------


def _f(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact check combine ``2 atanh(tanh(a/2) tanh(b/2))``, stable form."""
    sgn = np.where((a < 0) != (b < 0), -1.0, 1.0)
    return (
        sgn * np.minimum(np.abs(a), np.abs(b))
        + np.log1p(np.exp(-np.abs(a + b)))
        - np.log1p(np.exp(-np.abs(a - b)))
    )


def _g(a: np.ndarray, b: np.ndarray, u: np.ndarray) -> np.ndarray:
    return b + (1.0 - 2.0 * u) * a


def _prepare_llrs(code: PolarCode, llrs) -> tuple[np.ndarray, bool]:
    llrs = np.asarray(llrs, dtype=float)
    single = llrs.ndim == 1
    llrs = np.atleast_2d(llrs)
    if llrs.shape[-1] != code.N:
        raise ValueError("LLR length does not match the code")
    if np.isnan(llrs).any():
        raise ValueError("LLRs must not be NaN")
    return np.clip(llrs, -LLR_CLIP, LLR_CLIP)[:, bit_reversal(code.n)], single


def _sc_node(alpha: np.ndarray, info: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decode one subtree; returns ``(u_hat, partial_sums)``."""
    size = info.size
    if not info.any():
        z = np.zeros(alpha.shape, dtype=np.uint8)
        return z, z
    if size == 1:
        u = (alpha < 0).astype(np.uint8)
        return u, u
    h = size // 2
    a, b = alpha[:, :h], alpha[:, h:]
    ul, xl = _sc_node(_f(a, b), info[:h])
    ur, xr = _sc_node(_g(a, b, xl), info[h:])
    return np.concatenate([ul, ur], axis=1), np.concatenate([xl ^ xr, xr], axis=1)


def sc_decode(code: PolarCode, llrs, crc: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Successive-cancellation decoding of one or many codewords.

    Returns ``(payload, u_hat)`` with shapes ``(K,)``/``(N,)`` or
    ``(B, K)``/``(B, N)``. With ``crc`` the 16 CRC bits are stripped from
    the payload.
    """
    alpha, single = _prepare_llrs(code, llrs)
    u, _ = _sc_node(alpha, code.info_mask)
    out = u[:, code.info_mask][:, : _payload_len(code, crc)]
    return (out[0], u[0]) if single else (out, u)


@dataclass
class ListCandidate:
    u: np.ndarray
    metric: float


class _ListState:
    """Mutable path bookkeeping for one SCL run."""

    def __init__(self, L: int):
        self.L = L
        self.metric = np.zeros(1)


def _scl_node(alpha: np.ndarray, info: np.ndarray, st: _ListState):
    """Returns ``(u_hat, partial_sums, origin)`` for the surviving paths.

    ``alpha`` has one row per path at entry; ``origin`` maps each output
    row to the entry row it descends from.
    """
    size = info.size
    P = alpha.shape[0]
    if size == 1:
        llr = alpha[:, 0]
        pen = np.abs(llr)
        if not info[0]:
            st.metric = st.metric + np.where(llr < 0, pen, 0.0)
            z = np.zeros((P, 1), dtype=np.uint8)
            return z, z, np.arange(P)
        m0 = st.metric + np.where(llr < 0, pen, 0.0)
        m1 = st.metric + np.where(llr > 0, pen, 0.0)
        cand = np.stack([m0, m1], axis=1).ravel()
        # a penalty far below the metric's ulp is absorbed; ties go to the hard decision
        against = np.stack([llr < 0, llr > 0], axis=1).ravel()
        keep = np.lexsort((against, cand))[: st.L]
        st.metric = cand[keep]
        origin = keep // 2
        u = (keep % 2).astype(np.uint8)[:, None]
        return u, u, origin
    h = size // 2
    a, b = alpha[:, :h], alpha[:, h:]
    ul, xl, o1 = _scl_node(_f(a, b), info[:h], st)
    ur, xr, o2 = _scl_node(_g(a[o1], b[o1], xl), info[h:], st)
    ul, xl = ul[o2], xl[o2]
    return (
        np.concatenate([ul, ur], axis=1),
        np.concatenate([xl ^ xr, xr], axis=1),
        o1[o2],
    )


def _scl_single(code: PolarCode, alpha: np.ndarray, L: int) -> list[ListCandidate]:
    st = _ListState(L)
    u, _, _ = _scl_node(alpha[None, :], code.info_mask, st)
    order = np.argsort(st.metric, kind="stable")
    return [ListCandidate(u[i], float(st.metric[i])) for i in order]


def _check_list_size(L: int) -> None:
    if L < 1 or L & (L - 1):
        raise ValueError("list size must be a power of two")


def scl_decode(code: PolarCode, llrs, list_size: int) -> list[ListCandidate]:
    """SC list decoding of one codeword.

    Returns the surviving paths ranked by path metric (best first). A path
    pays ``|LLR|`` whenever its decision disagrees with the LLR sign.
    """
    _check_list_size(list_size)
    alpha, single = _prepare_llrs(code, llrs)
    if not single:
        raise ValueError("scl_decode takes a single codeword")
    return _scl_single(code, alpha[0], list_size)


def scl_payload(code: PolarCode, llrs, list_size: int, crc: bool = False) -> np.ndarray:
    """Payload of the best-metric SCL path (rows decoded independently)."""
    alpha, single = _prepare_llrs(code, llrs)
    _check_list_size(list_size)
    k = _payload_len(code, crc)
    out = np.empty((alpha.shape[0], k), dtype=np.uint8)
    mask = code.info_mask
    for i, row in enumerate(alpha):
        out[i] = _scl_single(code, row, list_size)[0].u[mask][:k]
    return out[0] if single else out


def adcascl_decode(code: PolarCode, llrs, max_list_size: int) -> np.ndarray:
    """CRC-aided adaptive SCL.

    Tries ``L = 1, 2, 4, ..., max_list_size`` and returns the payload of
    the best-ranked path passing the CRC. If none passes at the largest
    list, the best-metric path is returned.
    """
    _check_list_size(max_list_size)
    alpha, single = _prepare_llrs(code, llrs)
    k = _payload_len(code, True)
    mask = code.info_mask
    out = np.empty((alpha.shape[0], k), dtype=np.uint8)
    for i, row in enumerate(alpha):
        L = 1
        while True:
            cands = _scl_single(code, row, L)
            infos = np.stack([c.u[mask] for c in cands])
            ok = crc16_check(infos)
            ok = np.atleast_1d(ok)
            if ok.any():
                out[i] = infos[int(np.argmax(ok))][:k]
                break
            if L >= max_list_size:
                out[i] = infos[0][:k]
                break
            L *= 2
    return out[0] if single else out
