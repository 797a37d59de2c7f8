"""Command-line front end: sketch, recover, corrupt, verify, stats.

Files are read as bit strings: bytes in file order, most significant bit
first within each byte.  The sketch stores the original bit length, so a
recovered file has exactly the original size.

Exit codes: 0 ok, 1 I/O error, 2 usage, 3 input not dense, 4 decoding
failed, 5 ambiguous decoding, 6 malformed sketch, 7 verification sweep
reported failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .blockhash import COMPRESSED, PHI_MODES
from .channel import make_rng, sample_edit
from .codec import NotDense, SketchFormatError, decode, dumps_sketch, loads_sketch, redundancy_report, sketch
from .core import PAPER, SCALED, Ambiguous, DecodeFailure, ParamError, derive_params, scaled_overrides
from .sweep import exhaustive_sweep, sampled_sweep

EXIT_OK, EXIT_IO, EXIT_USAGE = 0, 1, 2
EXIT_NOT_DENSE, EXIT_DECODE, EXIT_AMBIGUOUS, EXIT_PARSE, EXIT_VERIFY = 3, 4, 5, 6, 7

EXHAUSTIVE_MAX_N = 16


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def bytes_to_bits(data: bytes) -> str:
    return "".join(f"{b:08b}" for b in data)


def bits_to_bytes(bits: str) -> bytes:
    """Pack MSB-first; a ragged tail is padded with zero bits."""
    pad = -len(bits) % 8
    bits += "0" * pad
    return int(bits, 2).to_bytes(len(bits) // 8, "big") if bits else b""


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, data: bytes | str) -> None:
    try:
        if isinstance(data, str):
            Path(path).write_text(data, encoding="utf-8")
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror}") from None


def _params(args, n: int):
    try:
        if args.mode == PAPER:
            return derive_params(args.k, n, PAPER)
        return derive_params(args.k, n, SCALED, scaled_overrides(args.k, n, min(args.blk, n), args.delta))
    except ParamError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None


def _kv(pairs: dict) -> None:
    for key, val in pairs.items():
        print(f"{key}={val}")


def cmd_sketch(args) -> int:
    x = bytes_to_bits(_read(args.input))
    params = _params(args, len(x))
    try:
        sk = sketch(x, params, args.phi)
    except NotDense as exc:
        raise CliError(EXIT_NOT_DENSE, str(exc)) from None
    _write(args.out, dumps_sketch(sk))
    _kv({"n": sk.n, "phi_mode": sk.phi_mode, "P": sk.P})
    _kv(redundancy_report(params, sk.phi_mode).as_dict())
    return EXIT_OK


def _candidate_ys(data: bytes, n: int, k: int) -> list[str]:
    """Bit strings the zero-padded file could have come from, nearest length first."""
    bits = bytes_to_bits(data)
    out = []
    for m in sorted(range(max(0, n - k), n + k + 1), key=lambda m: (abs(m - n), m)):
        if m <= len(bits) and len(bits) - m < 8 and not bits[m:].strip("0"):
            out.append(bits[:m])
    return out


def cmd_recover(args) -> int:
    try:
        sk = loads_sketch(_read(args.sketch).decode("utf-8"))
    except (SketchFormatError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"bad sketch: {exc}") from None
    data = _read(args.corrupted)
    if args.bits is not None:
        ys = [bytes_to_bits(data)[:args.bits]]
    else:
        ys = _candidate_ys(data, sk.n, sk.params.k)
    found, errors = {}, []
    for y in ys:
        try:
            res = decode(y, sk)
        except Ambiguous as exc:
            raise CliError(EXIT_AMBIGUOUS, str(exc)) from None
        except DecodeFailure as exc:
            errors.append(str(exc))
            continue
        found.setdefault(res.x, res)
    if not found:
        raise CliError(EXIT_DECODE, "no candidate matches the sketch" + (f" ({errors[0]})" if errors else ""))
    if len(found) > 1:
        raise CliError(EXIT_AMBIGUOUS, f"{len(found)} originals fit the padded input")
    (res,) = found.values()
    _write(args.out, bits_to_bytes(res.x))
    _kv({"path": res.path, "n": len(res.x)})
    return EXIT_OK


def cmd_corrupt(args) -> int:
    x = bytes_to_bits(_read(args.input))
    op, y = sample_edit(x, args.k, make_rng(args.seed))
    _write(args.out, bits_to_bytes(y))
    _kv({"seed": args.seed, "j": op.pos, "a": op.del_len, "ins": op.ins or "-",
         "x_bits": len(x), "y_bits": len(y)})
    return EXIT_OK


def cmd_verify(args) -> int:
    params = _params(args, args.n)
    if args.exhaustive:
        if args.n > EXHAUSTIVE_MAX_N:
            raise CliError(EXIT_USAGE, f"exhaustive sweep limited to n <= {EXHAUSTIVE_MAX_N}")
        reps = [exhaustive_sweep(params, phi_mode=args.phi, fallback=not args.no_fallback)]
    else:
        modes = PHI_MODES if args.phi == "both" else (args.phi,)
        reps = sampled_sweep(params, args.samples, args.seed, phi_modes=modes,
                             fallback=not args.no_fallback)
    ok = True
    for rep in reps:
        d = rep.as_dict()
        d.pop("examples")
        mismatch = "mode_mismatch" in rep.examples
        row = {
            "label": rep.label, "n": rep.n, "k": rep.k, "mode": rep.mode, "phi_mode": rep.phi_mode,
            "strings": rep.strings, "instances": rep.instances, "failures": rep.failures,
            "ambiguous": rep.ambiguous, "fallbacks": rep.fallbacks,
            "fallback_locatable": rep.fallback_locatable,
            "fallback_disagreements": rep.fallback_disagreements,
            "identity_errors": rep.identity_errors, "mode_mismatch": int(mismatch),
            "max_locator_width": rep.max_part_interval, "max_feature": rep.max_feature,
            "A_f": rep.A_f, "seconds": round(rep.seconds, 2),
        }
        _kv(row)
        for key, count in d["lemma"].items():
            print(f"lemma.{key}={count}")
        if args.json:
            print(json.dumps(d, sort_keys=True))
        ok &= rep.ok and not mismatch
    return EXIT_OK if ok else EXIT_VERIFY


def stats_rows(k: int, lo: int, hi: int, phi_mode: str = COMPRESSED) -> list[dict]:
    """Paper-mode redundancy for n = 2**lo .. 2**hi."""
    rows = []
    for e in range(lo, hi + 1):
        rep = redundancy_report(derive_params(k, 2**e, PAPER), phi_mode)
        d = rep.as_dict()
        d["h_minus_log2n"] = rep.bits_h - rep.log2_n
        rows.append(d)
    return rows


def cmd_stats(args) -> int:
    lo, _, hi = args.n_range.partition(":")
    try:
        lo, hi = int(lo), int(hi or lo)
    except ValueError:
        raise CliError(EXIT_USAGE, "--n-range takes LO:HI (log2 of n)") from None
    if not 2 <= lo <= hi <= 64:
        raise CliError(EXIT_USAGE, "--n-range needs 2 <= LO <= HI <= 64")
    rows = stats_rows(args.k, lo, hi, args.phi)
    cols = ("n", "bits_h", "h_minus_log2n", "bits_psi", "total", "baseline_2log2n", "loglog_curve")
    print(" ".join(f"{c:>15}" for c in cols))
    for r in rows:
        print(" ".join(f"{r[c]:>15}" for c in cols))
    if args.json:
        print(json.dumps(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subedit", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def code_flags(p, phi_default="auto", phi_choices=("auto",) + PHI_MODES):
        p.add_argument("--k", type=int, default=2, help="edit window (default 2)")
        p.add_argument("--mode", choices=(PAPER, SCALED), default=PAPER, help="parameter set (default paper)")
        p.add_argument("--blk", type=int, default=8, help="block length in scaled mode (default 8)")
        p.add_argument("--delta", type=int, default=None,
                       help="density bound in scaled mode (default min(n, 2*blk))")
        p.add_argument("--phi", choices=phi_choices, default=phi_default,
                       help=f"block hash flavour (default {phi_default})")

    p = sub.add_parser("sketch", help="compute the sketch of a file")
    p.add_argument("input")
    p.add_argument("--out", required=True, help="sketch file to write")
    code_flags(p)
    p.set_defaults(func=cmd_sketch)

    p = sub.add_parser("recover", help="repair a file from its sketch")
    p.add_argument("corrupted")
    p.add_argument("sketch")
    p.add_argument("--out", required=True)
    p.add_argument("--bits", type=int, default=None,
                   help="exact bit length of the corrupted input (default: infer from padding)")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("corrupt", help="apply one random k-substring edit")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("verify", help="run a recovery sweep")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-fallback", action="store_true", help="skip the fallback cross-check")
    p.add_argument("--json", action="store_true", help="also print the full report as JSON")
    code_flags(p, COMPRESSED, PHI_MODES + ("both",))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="redundancy table over n = 2**LO .. 2**HI")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n-range", default="10:20", help="LO:HI exponents (default 10:20)")
    p.add_argument("--phi", choices=PHI_MODES, default=COMPRESSED)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
