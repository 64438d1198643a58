"""Miniature 8-bit and 12-bit Rijndael block ciphers with exhaustive analysis tools."""
from .core import CipherInstance, RoundKeys, TraceRecord, key_schedule
from .gf import FieldSpec
from .params import ParamSet, builtin_8bit, builtin_12bit, load_paramset

__version__ = "0.1.0"

__all__ = [
    "CipherInstance",
    "FieldSpec",
    "ParamSet",
    "RoundKeys",
    "TraceRecord",
    "builtin_8bit",
    "builtin_12bit",
    "key_schedule",
    "load_paramset",
]
