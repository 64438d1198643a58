"""Conversion between external byte/hex data and streams of cipher blocks.

Raw binary is supported only for 8-bit blocks (one block per byte). Both
widths can be written as hex text, ``bits // 4`` digits per block. No
padding is applied: inputs must consist of whole blocks.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable

import numpy as np


class CodecError(ValueError):
    pass


class HexParseError(CodecError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class BlockStream:
    blocks: tuple[int, ...]
    width: int

    def __post_init__(self):
        if self.width <= 0:
            raise CodecError(f"block width must be positive, got {self.width}")
        limit = 1 << self.width
        for i, b in enumerate(self.blocks):
            if not 0 <= b < limit:
                raise CodecError(f"block {i} = {b!r} does not fit in {self.width} bits")

    @classmethod
    def of(cls, blocks: Iterable[int], width: int) -> "BlockStream":
        return cls(tuple(int(b) for b in blocks), width)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def bytes_to_blocks_8(data: bytes) -> BlockStream:
    return BlockStream(tuple(data), 8)


def blocks_to_bytes_8(stream: BlockStream) -> bytes:
    if stream.width != 8:
        raise CodecError(f"raw byte output needs 8-bit blocks, got {stream.width}-bit")
    return bytes(stream.blocks)


def digits_per_block(width: int) -> int:
    if width % 4:
        raise CodecError(f"hex encoding needs a block width divisible by 4, got {width}")
    return width // 4


_HEX = frozenset(string.hexdigits)


def hex_to_blocks(text: str, width: int) -> BlockStream:
    """Parse hex digits into blocks; whitespace anywhere is ignored.

    >>> hex_to_blocks("000 fff", 12).blocks
    (0, 4095)
    """
    per = digits_per_block(width)
    digits = []
    for offset, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch not in _HEX:
            raise HexParseError(f"non-hex character {ch!r}", offset)
        digits.append((ch, offset))
    if len(digits) % per:
        start = digits[len(digits) - len(digits) % per][1]
        raise HexParseError(
            f"trailing partial block: {len(digits) % per} of {per} hex digits", start)
    blocks = tuple(
        int("".join(ch for ch, _ in digits[i:i + per]), 16)
        for i in range(0, len(digits), per))
    return BlockStream(blocks, width)


def blocks_to_hex(stream: BlockStream) -> str:
    """One lowercase block per line, newline-terminated."""
    per = digits_per_block(stream.width)
    return "".join(f"{b:0{per}x}\n" for b in stream.blocks)


def ecb_process(stream: BlockStream, cipher, direction: str = "encrypt") -> BlockStream:
    """Encrypt or decrypt each block independently under ``cipher``."""
    if stream.width != cipher.block_bits:
        raise CodecError(
            f"stream has {stream.width}-bit blocks, cipher expects {cipher.block_bits}-bit")
    if direction not in ("encrypt", "decrypt"):
        raise CodecError(f"direction must be 'encrypt' or 'decrypt', got {direction!r}")
    if not stream.blocks:
        return stream
    fn = cipher.encrypt_array if direction == "encrypt" else cipher.decrypt_array
    out = fn(np.fromiter(stream.blocks, dtype=np.int64, count=len(stream)))
    return BlockStream.of(out.tolist(), stream.width)


def parse_hex_int(text: str, bits: int, what: str = "value") -> int:
    """Parse a single hex number (optional 0x prefix) that must fit in ``bits``."""
    t = text.strip().lower()
    if t.startswith("0x"):
        t = t[2:]
    if not t or any(ch not in _HEX for ch in t):
        raise CodecError(f"{what} {text!r} is not a hex number")
    v = int(t, 16)
    if v >> bits:
        raise CodecError(f"{what} {text!r} does not fit in {bits} bits")
    return v


def format_block(b: int, bits: int, octal: bool = False) -> str:
    if octal:
        return f"{b:0{-(-bits // 3)}o}"
    return f"{b:0{-(-bits // 4)}x}"
