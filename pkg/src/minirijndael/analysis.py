"""Exhaustive measurements of the cipher and its components.

Every quantity here is an exact count over all inputs; nothing is sampled.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import CipherInstance, decrypt_batch, encrypt_batch, key_schedule
from .params import ParamSet, SBox

MAX_EXHAUSTIVE_BITS = 16
MAX_TABLE_BITS = 12


class AnalysisError(ValueError):
    pass


def _lookup(target) -> tuple[np.ndarray, int]:
    """Reduce a map descriptor to (full lookup table, bit width).

    Accepts an :class:`SBox`, a :class:`CipherInstance` (encryption under its
    key) or any sequence of length 2^w.
    """
    if isinstance(target, CipherInstance):
        bits = target.block_bits
        if bits > MAX_EXHAUSTIVE_BITS:
            raise AnalysisError(f"{bits}-bit block is too wide for exhaustive analysis")
        lut = target.encrypt_array(np.arange(1 << bits))
    else:
        seq = target.forward if isinstance(target, SBox) else target
        lut = np.asarray(seq, dtype=np.int64)
        bits = int(lut.size).bit_length() - 1
        if lut.ndim != 1 or lut.size != 1 << bits:
            raise AnalysisError("lookup table length must be a power of two")
    return np.asarray(lut, dtype=np.int64), bits


# --- S-box structure -------------------------------------------------------

@dataclass(frozen=True)
class SBoxAudit:
    fixed_points: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    permutation_order: int

    @property
    def cycle_structure(self) -> Counter:
        return Counter(len(c) for c in self.cycles)

    @property
    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles))


def cycle_decomposition(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        cycles.append(tuple(cyc))
    return cycles


def audit_sbox(s) -> SBoxAudit:
    perm = s.forward if isinstance(s, SBox) else tuple(s)
    cycles = cycle_decomposition(perm)
    order = math.lcm(*(len(c) for c in cycles)) if cycles else 1
    fixed = tuple(i for i, v in enumerate(perm) if i == v)
    return SBoxAudit(fixed_points=fixed, cycles=tuple(cycles), permutation_order=order)


# --- bijectivity -----------------------------------------------------------

@dataclass(frozen=True)
class BijectionReport:
    ok: bool
    total: int
    distinct: int
    collision: tuple[int, int, int] | None = None   # (p1, p2, shared ciphertext)
    bad_inverse: tuple[int, int, int] | None = None  # (p, ciphertext, decrypted)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        s = f"{status}: {self.distinct}/{self.total} distinct"
        if self.collision:
            p1, p2, c = self.collision
            s += f"; collision {p1:#x}, {p2:#x} -> {c:#x}"
        if self.bad_inverse:
            p, c, q = self.bad_inverse
            s += f"; decrypt({c:#x}) = {q:#x} != {p:#x}"
        return s


def verify_bijection(c: CipherInstance) -> BijectionReport:
    """Encrypt every block, check all ciphertexts differ and decrypt inverts them."""
    bits = c.block_bits
    if bits > MAX_EXHAUSTIVE_BITS:
        raise AnalysisError(f"{bits}-bit block is too wide for exhaustive analysis")
    total = 1 << bits
    plain = np.arange(total)
    ct = c.encrypt_array(plain)
    uniq, counts = np.unique(ct, return_counts=True)
    collision = None
    if uniq.size != total:
        dup = uniq[np.argmax(counts > 1)]
        p1, p2 = np.flatnonzero(ct == dup)[:2]
        collision = (int(p1), int(p2), int(dup))
    back = c.decrypt_array(ct)
    bad_inverse = None
    wrong = np.flatnonzero(back != plain)
    if wrong.size:
        p = int(wrong[0])
        bad_inverse = (p, int(ct[p]), int(back[p]))
    return BijectionReport(
        ok=collision is None and bad_inverse is None,
        total=total, distinct=int(uniq.size),
        collision=collision, bad_inverse=bad_inverse,
    )


def all_roundkeys(params: ParamSet) -> np.ndarray:
    """(2^bits, 3) array of round keys for every key, indexed by key."""
    return np.array([key_schedule(params, k) for k in range(1 << params.block_bits)],
                    dtype=np.int64)


def exhaustive_roundtrip(params: ParamSet, key_chunk: int = 256) -> int:
    """Decrypt(encrypt(p)) over every (key, block) pair; returns the failure count.

    Also counts as failures any key whose encryption is not injective.
    """
    if params.block_bits > MAX_EXHAUSTIVE_BITS:
        raise AnalysisError(f"{params.block_bits}-bit block is too wide for exhaustive analysis")
    n = 1 << params.block_bits
    blocks = np.arange(n)
    rks = all_roundkeys(params)
    failures = 0
    for start in range(0, n, key_chunk):
        rk = rks[start:start + key_chunk]
        ct = encrypt_batch(params, rk, blocks)
        pt = decrypt_batch(params, rk, ct)
        failures += int(np.count_nonzero(pt != blocks))
        srt = np.sort(ct, axis=1)
        failures += int(np.count_nonzero(srt[:, 1:] == srt[:, :-1]))
    return failures


# --- difference / linear tables ---------------------------------------------

@dataclass(frozen=True)
class DiffTable:
    """``counts[din, dout]`` = #{p : F(p ^ din) ^ F(p) == dout}."""

    counts: np.ndarray

    @property
    def width(self) -> int:
        return int(self.counts.shape[0]).bit_length() - 1

    def row_sums_ok(self) -> bool:
        return bool(np.all(self.counts.sum(axis=1) == self.counts.shape[1]))

    def max_nontrivial(self) -> int:
        """Largest entry outside row 0 (the differential uniformity)."""
        if self.counts.shape[0] < 2:
            return 0
        return int(self.counts[1:].max())


@dataclass(frozen=True)
class LinTable:
    """``bias[a, b]`` = #{p : <a,p> == <b,F(p)>} - 2^(w-1)."""

    bias: np.ndarray

    @property
    def width(self) -> int:
        return int(self.bias.shape[0]).bit_length() - 1

    def max_abs_nontrivial(self) -> int:
        """Largest |bias| over nonzero output masks."""
        if self.bias.shape[1] < 2:
            return 0
        return int(np.abs(self.bias[:, 1:]).max())


def _check_table_width(bits: int) -> None:
    if bits > MAX_TABLE_BITS:
        raise AnalysisError(f"{bits}-bit map is too wide for a full table (max {MAX_TABLE_BITS})")


def diff_table(target) -> DiffTable:
    lut, bits = _lookup(target)
    _check_table_width(bits)
    n = 1 << bits
    x = np.arange(n)
    counts = np.empty((n, n), dtype=np.int64)
    for din in range(n):
        counts[din] = np.bincount(lut[x ^ din] ^ lut, minlength=n)
    return DiffTable(counts)


def _parity(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    out = np.zeros_like(v)
    while np.any(v):
        out ^= v & 1
        v >>= 1
    return out


def _walsh_hadamard(a: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis."""
    a = a.copy()
    n = a.shape[-1]
    h = 1
    while h < n:
        a = a.reshape(*a.shape[:-1], n // (2 * h), 2, h)
        lo, hi = a[..., 0, :].copy(), a[..., 1, :].copy()
        a[..., 0, :] = lo + hi
        a[..., 1, :] = lo - hi
        a = a.reshape(*a.shape[:-3], n)
        h *= 2
    return a


def lin_table(target) -> LinTable:
    lut, bits = _lookup(target)
    _check_table_width(bits)
    n = 1 << bits
    par = _parity(np.arange(n))
    # signs[b, p] = (-1)^<b, F(p)>
    signs = (1 - 2 * par[np.arange(n)[:, None] & lut[None, :]]).astype(np.int32)
    # walsh[b, a] = sum_p (-1)^(<a,p> + <b,F(p)>) = 2 * (bias[a, b])
    walsh = _walsh_hadamard(signs)
    return LinTable((walsh.T // 2).astype(np.int64))


# --- avalanche -----------------------------------------------------------------

def avalanche(target) -> np.ndarray:
    """``m[i, j]``: fraction of inputs where flipping input bit i flips output bit j."""
    lut, bits = _lookup(target)
    n = 1 << bits
    x = np.arange(n)
    out = np.empty((bits, bits))
    for i in range(bits):
        flips = lut[x ^ (1 << i)] ^ lut
        for j in range(bits):
            out[i, j] = np.count_nonzero((flips >> j) & 1) / n
    return out


def avalanche_all_keys(params: ParamSet) -> np.ndarray:
    """Avalanche matrix averaged over every key (all inputs, all keys)."""
    bits = params.block_bits
    if bits > MAX_TABLE_BITS:
        raise AnalysisError(f"{bits}-bit block is too wide for an all-keys sweep")
    n = 1 << bits
    x = np.arange(n)
    rks = all_roundkeys(params)
    totals = np.zeros((bits, bits))
    for start in range(0, n, 256):
        rk = rks[start:start + 256]
        base = encrypt_batch(params, rk, x).astype(np.int64)
        for i in range(bits):
            flips = encrypt_batch(params, rk, x ^ (1 << i)).astype(np.int64) ^ base
            for j in range(bits):
                totals[i, j] += np.count_nonzero((flips >> j) & 1)
    return totals / (n * n)
