"""Sketch construction, code membership and the end-to-end decoder."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import blockhash
from .blockhash import COMPRESSED, REFERENCE, PsiValue
from .core import (
    PAPER, SCALED, Ambiguous, CodeError, CodeParams, DecodeFailure, NoCandidate,
    ParamError, ceil_log2, centered_residue, derive_params,
)
from .featmap import feature_vector
from .partition import is_dense, part_interval_to_bits, partition
from .vtlocate import LocatorInput, locate, vt

VERSION = 1
MAGIC = "SSEC1"


class NotDense(CodeError):
    pass


class SketchFormatError(CodeError, ValueError):
    pass


@dataclass(frozen=True)
class Sketch:
    params: CodeParams
    n: int
    h_vt: int
    h_fsum: int
    h_npart: int
    psi: PsiValue
    P: int
    b_phi: int
    phi_mode: str
    version: int = VERSION

    @property
    def h(self) -> tuple[int, int, int]:
        return self.h_vt, self.h_fsum, self.h_npart


def h_value(x: str, params: CodeParams) -> tuple[int, int, int]:
    """(VT(f(x)) mod m_vt, sum f(x) mod m_fsum, part count mod m_npart)."""
    fv = feature_vector(x, params)
    return vt(fv.vals) % params.m_vt, fv.total % params.m_fsum, fv.n_parts % params.m_npart


def sketch(x: str, params: CodeParams, phi_mode: str = COMPRESSED) -> Sketch:
    if len(x) != params.n:
        raise ParamError(f"string has length {len(x)}, params expect {params.n}")
    if not is_dense(x, params.k, params.delta):
        raise NotDense(f"a part of x is longer than delta={params.delta}")
    if phi_mode == "auto":
        phi_mode = blockhash.choose_phi_mode(params)
    phi = blockhash.phi_sketch(x, params, phi_mode)
    h_vt, h_fsum, h_npart = h_value(x, params)
    return Sketch(params, len(x), h_vt, h_fsum, h_npart,
                  blockhash.psi(x, params, phi), phi.P, phi.b_phi, phi.mode)


def _psi_of(x: str, sk: Sketch) -> PsiValue:
    blk = sk.params.blk
    P = sk.P if sk.phi_mode == COMPRESSED else 0
    sums = [0, 0]
    for i, start in enumerate(range(0, len(x), blk)):
        block = x[start:start + blk]
        v = int(block, 2) << (blk - len(block))
        sums[i & 1] += v % P if P else v
    mod = 1 << sk.b_phi
    return PsiValue(sums[0] % mod, sums[1] % mod)


def matches_sketch(x: str, sk: Sketch) -> bool:
    """Density plus equality of every sketch field."""
    p = sk.params
    return (len(x) == sk.n
            and _psi_of(x, sk) == sk.psi
            and h_value(x, p) == sk.h
            and is_dense(x, p.k, p.delta))


def detect_identity(y: str, sk: Sketch) -> bool:
    """True iff the feature sum and part count of y agree with the sketch."""
    p = sk.params
    fv = feature_vector(y, p)
    return ((fv.total - sk.h_fsum) % p.m_fsum == 0
            and (fv.n_parts - sk.h_npart) % p.m_npart == 0)


@dataclass
class Decoded:
    x: str
    path: str                      # "identity", "fast" or "fallback"
    interval: tuple[int, int] | None = None
    part_interval: tuple[int, int] | None = None
    error: str | None = None
    notes: dict = field(default_factory=dict)


def _deltas(y: str, sk: Sketch) -> tuple[int, int]:
    """(n_P(x) - n_P(y), F(x) - F(y)) recovered from the sketch residues."""
    p = sk.params
    fv = feature_vector(y, p)
    d_len = centered_residue((sk.h_npart - fv.n_parts) % p.m_npart, p.m_npart, (p.m_npart - 1) // 2)
    d_sum = centered_residue((sk.h_fsum - fv.total) % p.m_fsum, p.m_fsum, p.m_fsum // 2 - 1)
    return d_len, d_sum


def _fast_path(y: str, sk: Sketch) -> Decoded:
    p = sk.params
    d_len, d_sum = _deltas(y, sk)
    w = feature_vector(y, p).vals
    j_lo, j_hi = locate(LocatorInput(w, d_len, d_sum, sk.h_vt, p.m_vt, p.A_f, p.K))
    interval = part_interval_to_bits(partition(y, p.k), j_lo, j_hi, p.K, p.k)
    x = blockhash.recover_region(
        y, sk.psi, sk.P, p, interval, len(y) - sk.n, phi_mode=sk.phi_mode,
        accept=lambda c: h_value(c, p) == sk.h and is_dense(c, p.k, p.delta))
    return Decoded(x, "fast", interval, (j_lo, j_hi))


def decode(y: str, sk: Sketch) -> Decoded:
    """Recover x and report which route produced it.

    Every answer is checked against the full sketch and the one-edit
    relation; anything that fails goes to the exhaustive fallback.
    """
    k = sk.params.k
    if abs(len(y) - sk.n) > k:
        raise NoCandidate(f"length {len(y)} is more than {k} away from {sk.n}")
    error = None
    if detect_identity(y, sk):
        if matches_sketch(y, sk):
            return Decoded(y, "identity")
        error = "identity check passed but sketch mismatch"
    else:
        try:
            res = _fast_path(y, sk)
        except CodeError as exc:
            error = f"{type(exc).__name__}: {exc}"
        else:
            if matches_sketch(res.x, sk) and blockhash.reaches_by_one_edit(res.x, y, k):
                return res
            error = "fast path answer failed verification"
    x = fallback_recover(y, sk)
    return Decoded(x, "fallback", error=error)


def recover(y: str, sk: Sketch) -> str:
    return decode(y, sk).x


def fallback_recover(y: str, sk: Sketch) -> str:
    """Search the whole edit ball of y for strings matching the sketch."""
    found = [c for c in blockhash.ball_of_length(y, sk.params.k, sk.n) if matches_sketch(c, sk)]
    if not found:
        raise NoCandidate("no string one edit from y matches the sketch")
    if len(found) > 1:
        raise Ambiguous(f"{len(found)} strings one edit from y match the sketch")
    return found[0]


def is_codeword(x: str, c1: tuple[int, int, int], c2: PsiValue, params: CodeParams, *,
                P: int, phi_mode: str = COMPRESSED) -> bool:
    """Membership in the code fixed by (c1, c2) and the hash prime P."""
    if len(x) != params.n or not is_dense(x, params.k, params.delta):
        return False
    b_phi = params.blk if phi_mode == REFERENCE else params.b_phi
    probe = Sketch(params, params.n, *c1, c2, P, b_phi, phi_mode)
    return h_value(x, params) == tuple(c1) and _psi_of(x, probe) == c2


@dataclass(frozen=True)
class RedundancyReport:
    n: int
    k: int
    bits_vt: int
    bits_fsum: int
    bits_npart: int
    bits_phi: int
    bits_prime: int

    @property
    def bits_h(self) -> int:
        return self.bits_vt + self.bits_fsum + self.bits_npart

    @property
    def bits_psi(self) -> int:
        return 2 * self.bits_phi + self.bits_prime

    @property
    def total(self) -> int:
        return self.bits_h + self.bits_psi

    @property
    def log2_n(self) -> int:
        return ceil_log2(self.n)

    @property
    def baseline(self) -> int:
        """Bits of the earlier roughly-2-log-n construction."""
        return math.ceil(2 * math.log2(self.n))

    @property
    def loglog_curve(self) -> float:
        return math.log2(self.n) + math.log2(max(math.log2(self.n), 1.0))

    def as_dict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "bits_vt": self.bits_vt, "bits_fsum": self.bits_fsum,
            "bits_npart": self.bits_npart, "bits_h": self.bits_h, "bits_phi": self.bits_phi,
            "bits_prime": self.bits_prime, "bits_psi": self.bits_psi, "total": self.total,
            "log2_n": self.log2_n, "baseline_2log2n": self.baseline,
            "loglog_curve": round(self.loglog_curve, 3),
        }


def redundancy_report(params: CodeParams, phi_mode: str = COMPRESSED) -> RedundancyReport:
    """Bit cost of every sketch field (the length n itself is not counted)."""
    if phi_mode == REFERENCE:
        bits_phi, bits_prime = params.blk, 0
    else:
        bits_phi, bits_prime = params.b_phi, params.b_phi
    return RedundancyReport(
        n=params.n, k=params.k,
        bits_vt=ceil_log2(params.m_vt), bits_fsum=ceil_log2(params.m_fsum),
        bits_npart=ceil_log2(params.m_npart), bits_phi=bits_phi, bits_prime=bits_prime,
    )


# --- SSEC1 text format -------------------------------------------------------

FIELD_ORDER = ("version", "k", "n", "mode", "B", "C", "delta", "K", "m_vt", "m_fsum",
               "m_npart", "blk", "b_phi", "phi_mode", "P", "h_vt", "h_fsum", "h_npart",
               "psi_odd", "psi_even")
_MODE_CODES = {PAPER: 0, SCALED: 1}
_PHI_CODES = {COMPRESSED: 0, REFERENCE: 1}


def dumps_sketch(sk: Sketch) -> str:
    p = sk.params
    vals = {
        "version": sk.version, "k": p.k, "n": sk.n, "mode": _MODE_CODES[p.mode],
        "B": p.B, "C": p.C, "delta": p.delta, "K": p.K, "m_vt": p.m_vt, "m_fsum": p.m_fsum,
        "m_npart": p.m_npart, "blk": p.blk, "b_phi": sk.b_phi,
        "phi_mode": _PHI_CODES[sk.phi_mode], "P": sk.P, "h_vt": sk.h_vt, "h_fsum": sk.h_fsum,
        "h_npart": sk.h_npart, "psi_odd": sk.psi.odd, "psi_even": sk.psi.even,
    }
    return MAGIC + "\n" + "".join(f"{key}={vals[key]}\n" for key in FIELD_ORDER)


def loads_sketch(text: str) -> Sketch:
    if not text.endswith("\n"):
        raise SketchFormatError("missing trailing newline")
    lines = text[:-1].split("\n")
    if lines[0] != MAGIC:
        raise SketchFormatError(f"bad magic {lines[0]!r}")
    body = lines[1:]
    if len(body) != len(FIELD_ORDER):
        raise SketchFormatError(f"expected {len(FIELD_ORDER)} fields, got {len(body)}")
    vals = {}
    for line, key in zip(body, FIELD_ORDER):
        name, sep, raw = line.partition("=")
        if not sep or name != key:
            raise SketchFormatError(f"expected key {key!r}, got {line!r}")
        if not raw.isdigit() or not raw.isascii():
            raise SketchFormatError(f"{key} is not a decimal integer")
        vals[key] = int(raw)
    if vals["version"] != VERSION:
        raise SketchFormatError(f"unsupported version {vals['version']}")
    try:
        mode = {v: m for m, v in _MODE_CODES.items()}[vals["mode"]]
        phi_mode = {v: m for m, v in _PHI_CODES.items()}[vals["phi_mode"]]
    except KeyError as exc:
        raise SketchFormatError(f"unknown mode code {exc}") from None
    k, n = vals["k"], vals["n"]
    try:
        if mode == PAPER:
            params = derive_params(k, n, PAPER)
        else:
            ov = {f: vals[f] for f in ("B", "C", "delta", "m_vt", "m_fsum", "m_npart", "blk")}
            # a reference sketch does not carry the compressed width; any valid value serves
            ov["b_phi"] = vals["b_phi"]
            params = derive_params(k, n, SCALED, ov)
    except ParamError as exc:
        raise SketchFormatError(str(exc)) from None
    for key in ("B", "C", "delta", "K", "m_vt", "m_fsum", "m_npart", "blk"):
        if getattr(params, key) != vals[key]:
            raise SketchFormatError(f"{key}={vals[key]} inconsistent with mode {mode}")
    expected_b = params.blk if phi_mode == REFERENCE else params.b_phi
    if vals["b_phi"] != expected_b:
        raise SketchFormatError(f"b_phi={vals['b_phi']} inconsistent with parameters")
    mod = 1 << vals["b_phi"]
    checks = (("h_vt", params.m_vt), ("h_fsum", params.m_fsum), ("h_npart", params.m_npart),
              ("psi_odd", mod), ("psi_even", mod))
    for key, m in checks:
        if vals[key] >= m:
            raise SketchFormatError(f"{key} out of range")
    if phi_mode == COMPRESSED and not 2 <= vals["P"] < mod:
        raise SketchFormatError("P out of range")
    return Sketch(params, n, vals["h_vt"], vals["h_fsum"], vals["h_npart"],
                  PsiValue(vals["psi_odd"], vals["psi_even"]), vals["P"], vals["b_phi"], phi_mode)
