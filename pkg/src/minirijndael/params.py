"""Cipher variant definitions: field, S-box, ordinate permutation, mixing
matrix and key-schedule round constants.

Two built-in variants are provided (8-bit block over GF(4), 12-bit block
over GF(8)); other variants can be loaded from a small key/value text
format, see :func:`load_paramset`.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from . import gf
from .gf import FieldSpec

N_ORDINATES = 4
MAX_BLOCK_BITS = 32


class ParamsError(ValueError):
    """Base class for invalid cipher parameters."""


class SBoxError(ParamsError):
    pass


class PermutationError(ParamsError):
    pass


class SingularMatrixError(ParamsError):
    pass


class ConfigSyntaxError(ParamsError):
    pass


Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SBox:
    forward: tuple[int, ...]
    inverse: tuple[int, ...]

    @classmethod
    def from_forward(cls, forward: Sequence[int]) -> "SBox":
        forward = tuple(int(v) for v in forward)
        n = len(forward)
        if sorted(forward) != list(range(n)):
            raise SBoxError(f"S-box {list(forward)} is not a permutation of 0..{n - 1}")
        inv = [0] * n
        for i, v in enumerate(forward):
            inv[v] = i
        return cls(forward, tuple(inv))

    def __len__(self):
        return len(self.forward)


@dataclass(frozen=True)
class OrdinatePermutation:
    """``map[i]`` is the source ordinate copied into destination ordinate i."""

    map: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.map) != list(range(N_ORDINATES)):
            raise PermutationError(f"{list(self.map)} is not a permutation of 0..3")

    def apply(self, v: Sequence[int]) -> list[int]:
        return [v[src] for src in self.map]

    def inverse(self) -> "OrdinatePermutation":
        inv = [0] * N_ORDINATES
        for dst, src in enumerate(self.map):
            inv[src] = dst
        return OrdinatePermutation(tuple(inv))

    @property
    def is_involution(self) -> bool:
        return self.inverse() == self


def identity_matrix(size: int = N_ORDINATES) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(size)) for i in range(size))


def mat_mul(a: Matrix, b: Matrix, field: FieldSpec) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = 0
            for k in range(m):
                acc ^= field.mul(a[i][k], b[k][j])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(m: Matrix, v: Sequence[int], field: FieldSpec) -> list[int]:
    out = []
    for row in m:
        acc = 0
        for coef, x in zip(row, v):
            acc ^= field.mul(coef, x)
        out.append(acc)
    return out


def invert_matrix(m: Sequence[Sequence[int]], field: FieldSpec) -> Matrix:
    """Gauss-Jordan inverse of a square matrix over ``field``.

    Raises :class:`SingularMatrixError` if no inverse exists.
    """
    size = len(m)
    if any(len(row) != size for row in m):
        raise ParamsError("matrix must be square")
    a = [[field.check(x) for x in row] + [int(i == j) for j in range(size)]
         for i, row in enumerate(m)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col]), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix {[list(r) for r in m]} is singular")
        a[col], a[pivot] = a[pivot], a[col]
        scale = gf.inverse(field, a[col][col])
        a[col] = [field.mul(scale, x) for x in a[col]]
        for r in range(size):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [x ^ field.mul(c, y) for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[size:]) for row in a)


@dataclass(frozen=True)
class ParamSet:
    field: FieldSpec
    sbox: SBox
    pi: OrdinatePermutation
    matrix: Matrix
    matrix_inv: Matrix
    rcon: tuple[int, int]
    name: str = dc_field(default="custom", compare=False)

    def __post_init__(self):
        if self.block_bits > MAX_BLOCK_BITS:
            raise gf.FieldWidthError(f"block width {self.block_bits} exceeds {MAX_BLOCK_BITS} bits")
        if len(self.sbox) != self.field.order:
            raise SBoxError(
                f"S-box has {len(self.sbox)} entries, field has {self.field.order} elements")
        for m in (self.matrix, self.matrix_inv):
            if len(m) != N_ORDINATES or any(len(r) != N_ORDINATES for r in m):
                raise ParamsError("mixing matrix must be 4x4")
            for row in m:
                for x in row:
                    self.field.check(x)
        if mat_mul(self.matrix, self.matrix_inv, self.field) != identity_matrix():
            raise SingularMatrixError("matrix_inv is not the inverse of matrix")
        for r in self.rcon:
            self.field.check(r)

    @property
    def width(self) -> int:
        """Bits per ordinate."""
        return self.field.width

    @property
    def block_bits(self) -> int:
        return N_ORDINATES * self.field.width

    @property
    def block_mask(self) -> int:
        return (1 << self.block_bits) - 1

    @classmethod
    def build(cls, width, poly, sbox, pi, matrix, rcon=None, name="custom") -> "ParamSet":
        """Validate raw values and derive ``matrix_inv`` and default ``rcon``."""
        field = FieldSpec(width, poly)
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        if rcon is None:
            x = 2
            rcon = (x, field.mul(x, x))
        return cls(
            field=field,
            sbox=SBox.from_forward(sbox),
            pi=OrdinatePermutation(tuple(int(i) for i in pi)),
            matrix=matrix,
            matrix_inv=invert_matrix(matrix, field),
            rcon=tuple(int(r) for r in rcon),
            name=name,
        )


# new ordinate 2 <- old 0, new 0 <- old 2, ordinates 1 and 3 fixed
SWAP_0_2 = (2, 1, 0, 3)


def builtin_8bit() -> ParamSet:
    return ParamSet.build(
        width=2, poly=gf.GF4_POLY,
        sbox=[3, 1, 0, 2],
        pi=SWAP_0_2,
        matrix=[[1, 2, 0, 0], [2, 1, 0, 0], [0, 0, 1, 2], [0, 0, 2, 1]],
        rcon=(2, 3),
        name="8",
    )


def builtin_12bit() -> ParamSet:
    return ParamSet.build(
        width=3, poly=gf.GF8_POLY,
        sbox=[2, 4, 6, 1, 7, 3, 0, 5],
        pi=SWAP_0_2,
        matrix=[[1, 4, 0, 0], [4, 1, 0, 0], [0, 0, 1, 4], [0, 0, 4, 1]],
        rcon=(4, 3),
        name="12",
    )


BUILTINS = {"8": builtin_8bit, "12": builtin_12bit}


def get_builtin(name) -> ParamSet:
    try:
        return BUILTINS[str(name)]()
    except KeyError:
        raise ParamsError(f"unknown builtin cipher {name!r}; choose from {sorted(BUILTINS)}") from None


_REQUIRED = ("width", "poly", "sbox", "pi", "matrix")
_KNOWN = _REQUIRED + ("rcon",)


def _ints(text: str, key: str, lineno: int) -> list[int]:
    try:
        return [int(tok.strip(), 0) for tok in text.split(",")]
    except ValueError:
        raise ConfigSyntaxError(f"line {lineno}: bad integer list for {key!r}: {text!r}") from None


def load_paramset(text: str, name: str = "custom") -> ParamSet:
    """Parse and validate a parameter-set document.

    Format (``#`` starts a comment)::

        width = 2
        poly = 0b111
        sbox = 3, 1, 0, 2
        pi = 2, 1, 0, 3
        matrix = 1,2,0,0, 2,1,0,0, 0,0,1,2, 0,0,2,1
        rcon = 2, 3

    ``rcon`` is optional. The inverse matrix is always recomputed.
    """
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigSyntaxError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN:
            raise ConfigSyntaxError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigSyntaxError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = (value, lineno)
    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise ConfigSyntaxError(f"missing keys: {', '.join(missing)}")

    vals = {k: _ints(v, k, ln) for k, (v, ln) in raw.items()}
    for key in ("width", "poly"):
        if len(vals[key]) != 1:
            raise ConfigSyntaxError(f"{key!r} takes a single integer")
    matrix = vals["matrix"]
    if len(matrix) != N_ORDINATES * N_ORDINATES:
        raise ConfigSyntaxError(f"'matrix' needs 16 entries, got {len(matrix)}")
    if len(vals["pi"]) != N_ORDINATES:
        raise PermutationError(f"'pi' needs 4 entries, got {len(vals['pi'])}")
    rcon = vals.get("rcon")
    if rcon is not None and len(rcon) != 2:
        raise ConfigSyntaxError("'rcon' takes exactly two integers")
    return ParamSet.build(
        width=vals["width"][0],
        poly=vals["poly"][0],
        sbox=vals["sbox"],
        pi=vals["pi"],
        matrix=[matrix[i:i + 4] for i in range(0, 16, 4)],
        rcon=rcon,
        name=name,
    )


def load_paramset_file(path) -> ParamSet:
    path = Path(path)
    return load_paramset(path.read_text(encoding="utf-8"), name=path.stem)


def dump_paramset(p: ParamSet) -> str:
    """Render ``p`` in the format read by :func:`load_paramset`."""
    def join(xs):
        return ", ".join(str(x) for x in xs)
    return "\n".join([
        f"# parameter set {p.name}",
        f"width = {p.field.width}",
        f"poly = {p.field.reduction_poly:#b}",
        f"sbox = {join(p.sbox.forward)}",
        f"pi = {join(p.pi.map)}",
        f"matrix = {join(x for row in p.matrix for x in row)}",
        f"rcon = {join(p.rcon)}",
        "",
    ])
