"""Block packing, round primitives, key schedule and the two-round
encrypt/decrypt sequences.

A block is an int of ``4 * n`` bits. Ordinate i occupies bits
``[i*n, (i+1)*n)``, least significant ordinate first.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .params import N_ORDINATES, ParamSet, mat_vec


class BlockError(ValueError):
    pass


def check_block(b, params: ParamSet, what: str = "block") -> int:
    if not isinstance(b, numbers.Integral) or not 0 <= b <= params.block_mask:
        raise BlockError(f"{what} {b!r} does not fit in {params.block_bits} bits")
    return int(b)


def unpack(b: int, params: ParamSet) -> list[int]:
    n, mask = params.width, params.field.mask
    return [(b >> (i * n)) & mask for i in range(N_ORDINATES)]


def pack(v: Sequence[int], params: ParamSet) -> int:
    n = params.width
    if len(v) != N_ORDINATES:
        raise BlockError(f"expected {N_ORDINATES} ordinates, got {len(v)}")
    b = 0
    for i in range(N_ORDINATES - 1, -1, -1):
        x = v[i]
        if not 0 <= x <= params.field.mask:
            raise BlockError(f"ordinate {i} = {x!r} does not fit in {n} bits")
        b = (b << n) | x
    return b


def add_round_key(b: int, k: int) -> int:
    return b ^ k


def substitute(b: int, params: ParamSet) -> int:
    s = params.sbox.forward
    return pack([s[x] for x in unpack(b, params)], params)


def inv_substitute(b: int, params: ParamSet) -> int:
    s = params.sbox.inverse
    return pack([s[x] for x in unpack(b, params)], params)


def swaprow(b: int, params: ParamSet) -> int:
    """Permute ordinates by ``params.pi`` (for the builtins: swap 0 and 2)."""
    return pack(params.pi.apply(unpack(b, params)), params)


def inv_swaprow(b: int, params: ParamSet) -> int:
    # identical to swaprow whenever pi is an involution, as for both builtins
    return pack(params.pi.inverse().apply(unpack(b, params)), params)


def mixcolumns(b: int, params: ParamSet, use_inverse: bool = False) -> int:
    m = params.matrix_inv if use_inverse else params.matrix
    return pack(mat_vec(m, unpack(b, params), params.field), params)


def inv_mixcolumns(b: int, params: ParamSet) -> int:
    return mixcolumns(b, params, use_inverse=True)


class RoundKeys(NamedTuple):
    k1: int
    k2: int
    k3: int


def _swapped_sub(w: int, params: ParamSet) -> int:
    # (a, b) -> (S(b), S(a)) on a 2-ordinate half block
    n, mask, s = params.width, params.field.mask, params.sbox.forward
    return (s[w & mask] << n) | s[w >> n]


def key_schedule(params: ParamSet, key: int) -> RoundKeys:
    key = check_block(key, params, "key")
    n = params.width
    half = 2 * n
    half_mask = (1 << half) - 1
    r1, r2 = params.rcon
    w0 = (key >> half) & half_mask
    w1 = key & half_mask
    w2 = w0 ^ (r1 << n) ^ _swapped_sub(w1, params)
    w3 = w1 ^ w2
    w4 = w2 ^ (r2 << n) ^ _swapped_sub(w3, params)
    w5 = w3 ^ w4
    return RoundKeys(key, (w2 << half) | w3, (w4 << half) | w5)


ENCRYPT_LABELS = (
    "state", "Add round key", "Substitute", "Swap rows", "Mix Columns",
    "Add round key", "Substitute", "Swap rows", "Add round key",
)
DECRYPT_LABELS = (
    "state", "Add round key", "Swap rows", "Substitute", "Add round key",
    "Mix Columns", "Swap rows", "Substitute", "Add round key",
)


@dataclass(frozen=True)
class TraceRecord:
    """The nine states seen by one encrypt ("E") or decrypt ("D") call."""

    direction: str
    states: tuple[int, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return ENCRYPT_LABELS if self.direction == "E" else DECRYPT_LABELS

    def __iter__(self):
        return iter(zip(self.labels, self.states))

    def format(self, digits: int, octal: bool = False) -> list[str]:
        fmt = f"0{digits}o" if octal else f"0{digits}x"
        return [f"{self.direction} {label}: {value:{fmt}}" for label, value in self]


class BlockTables:
    """Whole-block lookup tables for every fixed primitive.

    Each table is built by running the scalar primitive on every block, so the
    array path computes exactly the same function as the scalar one.
    """

    def __init__(self, params: ParamSet):
        if params.block_bits > 16:
            raise BlockError("lookup tables are limited to blocks of at most 16 bits")
        blocks = range(1 << params.block_bits)
        dtype = np.uint16

        def table(fn):
            return np.fromiter((fn(b) for b in blocks), dtype=dtype, count=len(blocks))

        self.sub = table(lambda b: substitute(b, params))
        self.inv_sub = table(lambda b: inv_substitute(b, params))
        self.swap = table(lambda b: swaprow(b, params))
        self.inv_swap = table(lambda b: inv_swaprow(b, params))
        self.mix = table(lambda b: mixcolumns(b, params))
        self.inv_mix = table(lambda b: inv_mixcolumns(b, params))


_TABLE_CACHE: dict[ParamSet, BlockTables] = {}


def block_tables(params: ParamSet) -> BlockTables:
    tables = _TABLE_CACHE.get(params)
    if tables is None:
        tables = _TABLE_CACHE[params] = BlockTables(params)
    return tables


def encrypt_batch(params: ParamSet, roundkeys, blocks) -> np.ndarray:
    """Vectorized encryption.

    ``roundkeys`` is a (K, 3) array; ``blocks`` broadcasts against a (K, 1)
    column, so passing a 1-D block array encrypts every block under every key
    and returns a (K, len(blocks)) array.
    """
    t = block_tables(params)
    rk = np.asarray(roundkeys, dtype=np.uint16).reshape(-1, 3)
    k1, k2, k3 = (rk[:, i:i + 1] for i in range(3))
    s = np.asarray(blocks, dtype=np.uint16) ^ k1
    s = t.swap[t.sub[s]]
    s = t.mix[s] ^ k2
    s = t.swap[t.sub[s]]
    return s ^ k3


def decrypt_batch(params: ParamSet, roundkeys, blocks) -> np.ndarray:
    t = block_tables(params)
    rk = np.asarray(roundkeys, dtype=np.uint16).reshape(-1, 3)
    k1, k2, k3 = (rk[:, i:i + 1] for i in range(3))
    s = np.asarray(blocks, dtype=np.uint16) ^ k3
    s = t.inv_sub[t.inv_swap[s]] ^ k2
    s = t.inv_mix[s]
    s = t.inv_sub[t.inv_swap[s]]
    return s ^ k1


@dataclass(frozen=True)
class CipherInstance:
    """One parameter set under one key. Stateless; safe to share."""

    params: ParamSet
    key: int
    roundkeys: RoundKeys = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "roundkeys", key_schedule(self.params, self.key))

    @classmethod
    def with_roundkeys(cls, params: ParamSet, roundkeys: Sequence[int]) -> "CipherInstance":
        """Instance with explicitly injected round keys, bypassing the schedule."""
        c = cls(params, 0)
        rk = RoundKeys(*(check_block(k, params, "round key") for k in roundkeys))
        object.__setattr__(c, "roundkeys", rk)
        return c

    @property
    def block_bits(self) -> int:
        return self.params.block_bits

    def encrypt_block(self, p: int, trace: bool = False):
        """Encrypt one block; with ``trace=True`` return ``(c, TraceRecord)``."""
        params, (k1, k2, k3) = self.params, self.roundkeys
        s = check_block(p, params)
        states = [s]
        for step in (
            lambda x: add_round_key(x, k1),
            lambda x: substitute(x, params),
            lambda x: swaprow(x, params),
            lambda x: mixcolumns(x, params),
            lambda x: add_round_key(x, k2),
            lambda x: substitute(x, params),
            lambda x: swaprow(x, params),
            lambda x: add_round_key(x, k3),
        ):
            s = step(s)
            states.append(s)
        if trace:
            return s, TraceRecord("E", tuple(states))
        return s

    def decrypt_block(self, x: int, trace: bool = False):
        params, (k1, k2, k3) = self.params, self.roundkeys
        s = check_block(x, params)
        states = [s]
        for step in (
            lambda v: add_round_key(v, k3),
            lambda v: inv_swaprow(v, params),
            lambda v: inv_substitute(v, params),
            lambda v: add_round_key(v, k2),
            lambda v: inv_mixcolumns(v, params),
            lambda v: inv_swaprow(v, params),
            lambda v: inv_substitute(v, params),
            lambda v: add_round_key(v, k1),
        ):
            s = step(s)
            states.append(s)
        if trace:
            return s, TraceRecord("D", tuple(states))
        return s

    def encrypt_array(self, blocks) -> np.ndarray:
        return self._apply_array(blocks, encrypt_batch, self.encrypt_block)

    def decrypt_array(self, blocks) -> np.ndarray:
        return self._apply_array(blocks, decrypt_batch, self.decrypt_block)

    def _apply_array(self, blocks, batch_fn, scalar_fn) -> np.ndarray:
        arr = np.asarray(blocks, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() > self.params.block_mask):
            raise BlockError(f"blocks must fit in {self.params.block_bits} bits")
        if self.params.block_bits > 16:
            flat = [scalar_fn(int(b)) for b in arr.ravel()]
            return np.array(flat, dtype=np.int64).reshape(arr.shape)
        out = batch_fn(self.params, [self.roundkeys], arr.ravel())
        return out.astype(np.int64).reshape(arr.shape)
