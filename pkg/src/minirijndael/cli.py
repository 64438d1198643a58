"""Command-line front end.

Data goes to stdout, diagnostics to stderr, so commands compose in pipes::

    minirijndael encrypt --cipher 12 --key abc < plain.hex | \\
        minirijndael decrypt --cipher 12 --key abc
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import random
import secrets
import sys

import numpy as np

from . import analysis, codec
from .core import BlockError, CipherInstance
from .gf import FieldError
from .params import ParamSet, ParamsError, get_builtin, load_paramset_file

log = logging.getLogger("minirijndael")


class CliError(Exception):
    pass


def resolve_params(args) -> ParamSet:
    if args.params:
        return load_paramset_file(args.params)
    return get_builtin(args.cipher)


def _key(args, params: ParamSet, default=None) -> int:
    if args.key is None:
        if default is None:
            raise CliError("--key is required")
        return default
    return codec.parse_hex_int(args.key, params.block_bits, "key")


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(63)
    print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _read_input(args, binary: bool):
    if args.infile in (None, "-"):
        return sys.stdin.buffer.read() if binary else sys.stdin.read()
    mode = "rb" if binary else "r"
    with open(args.infile, mode) as fh:
        return fh.read()


def _write_output(args, data) -> None:
    binary = isinstance(data, bytes)
    if args.outfile in (None, "-"):
        if binary:
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
        return
    with open(args.outfile, "wb" if binary else "w") as fh:
        fh.write(data)


def _fmt(b: int, params: ParamSet, octal=False) -> str:
    return codec.format_block(b, params.block_bits, octal)


# --- commands ------------------------------------------------------------------

def _cmd_ecb(args, direction: str) -> int:
    params = resolve_params(args)
    cipher = CipherInstance(params, _key(args, params))
    raw = args.format == "raw"
    if raw and params.block_bits != 8:
        raise CliError("raw format is only available for 8-bit blocks; use --format hex")
    data = _read_input(args, binary=raw)
    if raw:
        stream = codec.bytes_to_blocks_8(data)
    else:
        stream = codec.hex_to_blocks(data, params.block_bits)
    out = codec.ecb_process(stream, cipher, direction)
    _write_output(args, codec.blocks_to_bytes_8(out) if raw else codec.blocks_to_hex(out))
    log.info("%s %d blocks", direction, len(out))
    return 0


def cmd_encrypt(args) -> int:
    return _cmd_ecb(args, "encrypt")


def cmd_decrypt(args) -> int:
    return _cmd_ecb(args, "decrypt")


def cmd_roundkeys(args) -> int:
    params = resolve_params(args)
    rk = CipherInstance(params, _key(args, params)).roundkeys
    print(" ".join(_fmt(k, params, args.octal) for k in rk))
    return 0


def cmd_trace(args) -> int:
    params = resolve_params(args)
    cipher = CipherInstance(params, _key(args, params))
    block = codec.parse_hex_int(args.block, params.block_bits, "block")
    digits = len(_fmt(0, params, args.octal))
    ct, etrace = cipher.encrypt_block(block, trace=True)
    pt, dtrace = cipher.decrypt_block(ct, trace=True)
    for line in etrace.format(digits, args.octal):
        print(line)
    for line in dtrace.format(digits, args.octal):
        print(line)
    symmetric = dtrace.states == etrace.states[::-1]
    print(f"trace symmetry: {'OK' if symmetric else 'MISMATCH'}", file=sys.stderr)
    return 0 if symmetric and pt == block else 1


def cmd_verify(args) -> int:
    params = resolve_params(args)
    rng = random.Random(_seed(args))
    fixed_key = None if args.key is None else _key(args, params)
    errs = 0
    ciphers = {}
    for _ in range(args.ntests):
        key = fixed_key if fixed_key is not None else rng.getrandbits(params.block_bits)
        cipher = ciphers.get(key)
        if cipher is None:
            cipher = ciphers.setdefault(key, CipherInstance(params, key))
        p = rng.getrandbits(params.block_bits)
        q = cipher.decrypt_block(cipher.encrypt_block(p))
        if q != p:
            errs += 1
            print(f"mistake with key {_fmt(key, params)}: in {_fmt(p, params)}, "
                  f"out {_fmt(q, params)}", file=sys.stderr)
    print(f"{errs}/{args.ntests} errors")
    if args.exhaustive:
        total = 1 << (2 * params.block_bits)
        failures = analysis.exhaustive_roundtrip(params)
        print(f"{failures}/{total} errors (exhaustive)")
        errs += failures
    return 1 if errs else 0


FIXED_POINT_WARNING = ("WARNING: S-box has fixed points {}; "
                       "S-boxes are supposed to have no fixed points")


def _table_rows(matrix) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(matrix)]


def _emit_table(title: str, rows, as_csv: bool, fmt="{:>4}") -> None:
    print(f"# {title}")
    if as_csv:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        for row in rows:
            print(" ".join(fmt.format(x) for x in row))


def cmd_analyze(args) -> int:
    params = resolve_params(args)
    target = args.target
    ok = True

    if target in ("sbox", "all"):
        audit = analysis.audit_sbox(params.sbox)
        print(f"sbox: {list(params.sbox.forward)}")
        print(f"cycles: {[list(c) for c in audit.cycles]}")
        print(f"cycle lengths: {list(audit.cycle_lengths)}")
        print(f"order: {audit.permutation_order}")
        print(f"fixed points: {list(audit.fixed_points)}")
        if audit.fixed_points:
            msg = FIXED_POINT_WARNING.format(list(audit.fixed_points))
            print(msg)
            print(msg, file=sys.stderr)
        ddt = analysis.diff_table(params.sbox)
        lat = analysis.lin_table(params.sbox)
        _emit_table("sbox DDT", _table_rows(ddt.counts), args.csv)
        print(f"sbox DDT row sums: {'OK' if ddt.row_sums_ok() else 'FAIL'}")
        print(f"sbox DDT max nontrivial: {ddt.max_nontrivial()}")
        _emit_table("sbox LAT bias", _table_rows(lat.bias), args.csv)
        print(f"sbox LAT max |bias|: {lat.max_abs_nontrivial()}")
        ok &= ddt.row_sums_ok()

    if target in ("cipher", "all"):
        key = _key(args, params, default=0)
        cipher = CipherInstance(params, key)
        print(f"cipher key: {_fmt(key, params)}")
        report = analysis.verify_bijection(cipher)
        print(f"bijection: {report.summary()}")
        ok &= report.ok
        if params.block_bits <= analysis.MAX_TABLE_BITS:
            ddt = analysis.diff_table(cipher)
            lat = analysis.lin_table(cipher)
            print(f"cipher DDT row sums: {'OK' if ddt.row_sums_ok() else 'FAIL'}")
            print(f"cipher DDT max nontrivial: {ddt.max_nontrivial()}")
            print(f"cipher LAT max |bias|: {lat.max_abs_nontrivial()}")
            if args.tables:
                _emit_table("cipher DDT", _table_rows(ddt.counts), args.csv)
                _emit_table("cipher LAT bias", _table_rows(lat.bias), args.csv)
            ok &= ddt.row_sums_ok()
        if args.all_keys:
            av = analysis.avalanche_all_keys(params)
            title = "avalanche (all keys; row = input bit, column = output bit)"
        else:
            av = analysis.avalanche(cipher)
            title = "avalanche (row = input bit, column = output bit)"
        _emit_table(title, [[f"{x:.4f}" for x in row] for row in av], args.csv, fmt="{:>7}")
    return 0 if ok else 1


def cmd_keygen(args) -> int:
    params = resolve_params(args)
    rng = random.Random(_seed(args))
    print(_fmt(rng.getrandbits(params.block_bits), params))
    return 0


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cipher", choices=["8", "12"], default="8",
                        help="built-in variant (default: 8)")
    common.add_argument("--params", metavar="FILE", help="custom parameter-set file")
    common.add_argument("--key", metavar="HEX", help="cipher key in hex")
    common.add_argument("--verbose", "-v", action="store_true")

    io_opts = argparse.ArgumentParser(add_help=False)
    io_opts.add_argument("--in", dest="infile", metavar="FILE", default="-")
    io_opts.add_argument("--out", dest="outfile", metavar="FILE", default="-")
    io_opts.add_argument("--format", choices=["raw", "hex"], default="hex")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, help="PRNG seed (printed to stderr)")

    radix = argparse.ArgumentParser(add_help=False)
    radix.add_argument("--octal", action="store_true", help="print values in octal")

    parser = argparse.ArgumentParser(
        prog="minirijndael", description="Miniature 8/12-bit Rijndael block ciphers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encrypt", parents=[common, io_opts], help="ECB-encrypt a stream")
    p.set_defaults(func=cmd_encrypt)
    p = sub.add_parser("decrypt", parents=[common, io_opts], help="ECB-decrypt a stream")
    p.set_defaults(func=cmd_decrypt)
    p = sub.add_parser("roundkeys", parents=[common, radix], help="print K1 K2 K3")
    p.set_defaults(func=cmd_roundkeys)
    p = sub.add_parser("trace", parents=[common, radix],
                       help="print every intermediate state of encrypt and decrypt")
    p.add_argument("block", help="plaintext block in hex")
    p.set_defaults(func=cmd_trace)
    p = sub.add_parser("verify", parents=[common, seeded], help="roundtrip self-test")
    p.add_argument("--ntests", type=int, default=1000)
    p.add_argument("--exhaustive", action="store_true",
                   help="also check every (key, block) pair")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("analyze", parents=[common],
                       help="S-box audit, DDT/LAT and avalanche measurements")
    p.add_argument("--target", choices=["sbox", "cipher", "all"], default="all")
    p.add_argument("--csv", action="store_true", help="emit tables as CSV")
    p.add_argument("--tables", action="store_true", help="print full cipher DDT/LAT")
    p.add_argument("--all-keys", action="store_true",
                   help="average the avalanche matrix over every key")
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("keygen", parents=[common, seeded], help="print a random key")
    p.set_defaults(func=cmd_keygen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CliError, codec.CodecError, BlockError, ParamsError, FieldError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
