"""Shared types, parameter derivation and modular helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

PAPER = "paper"
SCALED = "scaled"
MODES = (PAPER, SCALED)

# Induced edit size on the feature vector.
K_INDUCED = 3


class CodeError(Exception):
    """Base class for every error raised by this package."""


class ParamError(CodeError, ValueError):
    pass


class NoCenteredResidue(CodeError):
    pass


def ceil_log2(m: int) -> int:
    """Smallest w with 2**w >= m, for m >= 1."""
    if m < 1:
        raise ValueError("ceil_log2 needs m >= 1")
    return (m - 1).bit_length()


def as_bits(x) -> str:
    """Normalise a bit sequence (str of 0/1, or iterable of ints) to a str."""
    if isinstance(x, str):
        s = x
    else:
        s = "".join("1" if int(b) else "0" for b in x)
    if s.strip("01"):
        raise ValueError(f"not a binary string: {s[:32]!r}")
    return s


def is_bounded(z, bound: int) -> bool:
    return all(0 <= v <= bound for v in z)


@dataclass(frozen=True)
class CodeParams:
    k: int
    n: int
    mode: str
    B: int
    C: int
    delta: int
    K: int
    m_vt: int
    m_fsum: int
    m_npart: int
    A_f: int
    blk: int
    b_phi: int

    @property
    def locator_hypothesis_holds(self) -> bool:
        """Whether m_vt is large enough for an unambiguous VT difference.

        Only true once n is large compared to delta; below that the locator
        enumerates every lift of the residue instead.
        """
        return self.m_vt > 8 * self.K**2 * (2 * self.C * self.n + self.A_f)

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ParamError(f"unknown mode {self.mode!r}")
        if self.k < 1:
            raise ParamError("k must be >= 1")
        if self.n < 2 * self.k:
            raise ParamError(f"n={self.n} leaves no room for a pattern (need n >= {2 * self.k})")
        for name in ("B", "C", "delta", "K", "m_vt", "m_fsum", "A_f", "blk", "b_phi"):
            if getattr(self, name) < 1:
                raise ParamError(f"{name} must be positive")
        if self.m_npart < 5:
            raise ParamError("m_npart must be >= 5 to recover part-count changes up to 2")
        if self.blk < min(self.n, 2 * self.k + 1):
            raise ParamError("blk must be >= 2k+1")
        if self.blk > self.n:
            raise ParamError("blk cannot exceed n")
        if self.A_f != 8 * self.delta * self.C:
            raise ParamError("A_f must equal 8*delta*C")


def paper_delta(k: int, n: int) -> int:
    return math.ceil(k * 2 ** (2 * k + 3) * math.log2(n))


def block_length(K: int, A_f: int, delta: int, k: int, n: int) -> int:
    return min(n, (6 * K**2 * A_f + 2 * K + 2) * delta + 2 * k)


def phi_width_bound(blk: int, k: int, n: int) -> int:
    """Bit width that always admits a separating prime for the block hash.

    Two bounds apply.  Any prime above 2**blk separates (block values are
    distinct integers below it).  Counting: a region of L = min(2*blk, n)
    bits has at most beta**2 confusable strings, beta = (L+1)(k+1)2**(k+1),
    each difference has fewer than blk prime factors, so among the first
    regions * beta**2 * blk + 1 primes one is good; Rosser's bound caps that
    prime.
    """
    L = min(2 * blk, n)
    regions = max(1, -(-n // blk) - 1)
    beta = (L + 1) * (k + 1) * 2 ** (k + 1)
    m = regions * beta**2 * blk + 1
    m = max(m, 6)
    rosser = math.ceil(m * (math.log(m) + math.log(math.log(m))))
    return min(blk + 1, rosser.bit_length())


_OVERRIDABLE = ("B", "C", "delta", "m_vt", "m_fsum", "m_npart", "blk", "b_phi")


def derive_params(k: int, n: int, mode: str = PAPER, overrides: dict | None = None) -> CodeParams:
    """Build the constants for one code instance.

    Paper mode evaluates the published formulas.  Scaled mode takes every
    tunable constant from ``overrides`` (A_f and K stay derived).
    """
    if k < 1:
        raise ParamError("k must be >= 1")
    if n < 2 * k:
        raise ParamError(f"n={n} < 2k={2 * k}")
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(_OVERRIDABLE)
    if unknown:
        raise ParamError(f"unknown overrides: {sorted(unknown)}")
    K = K_INDUCED
    if mode == PAPER:
        if overrides:
            raise ParamError("paper mode takes no overrides")
        B = 3 * 2**k
        C = 40 * k * 2**k
        delta = paper_delta(k, n)
        A_f = 8 * delta * C
        blk = block_length(K, A_f, delta, k, n)
        params = CodeParams(
            k=k, n=n, mode=PAPER, B=B, C=C, delta=delta, K=K,
            m_vt=2000 * C * n, m_fsum=10 * C * k, m_npart=5,
            A_f=A_f, blk=blk, b_phi=phi_width_bound(blk, k, n),
        )
    elif mode == SCALED:
        missing = [f for f in _OVERRIDABLE if f not in overrides]
        if missing:
            raise ParamError(f"scaled mode needs overrides for {missing}")
        ov = {f: int(overrides[f]) for f in _OVERRIDABLE}
        params = CodeParams(k=k, n=n, mode=SCALED, K=K, A_f=8 * ov["delta"] * ov["C"], **ov)
    else:
        raise ParamError(f"unknown mode {mode!r}")
    params.validate()
    return params


def scaled_overrides(k: int, n: int, blk: int, delta: int | None = None, b_phi: int | None = None) -> dict:
    """Complete override set: paper weights with an explicit small block length."""
    C = 40 * k * 2**k
    return {
        "B": 3 * 2**k,
        "C": C,
        "delta": min(n, 2 * blk) if delta is None else delta,
        "m_vt": 2000 * C * n,
        "m_fsum": 10 * C * k,
        "m_npart": 5,
        "blk": blk,
        "b_phi": phi_width_bound(blk, k, n) if b_phi is None else b_phi,
    }


def params_as_dict(params: CodeParams) -> dict:
    return {f.name: getattr(params, f.name) for f in fields(params)}


def centered_residue(r: int, m: int, bound: int) -> int:
    """The unique t = r (mod m) with |t| <= bound."""
    if m <= 2 * bound:
        raise ValueError(f"modulus {m} too small for bound {bound}")
    if not 0 <= r < m:
        raise ValueError("residue out of range")
    if r <= bound:
        return r
    if m - r <= bound:
        return r - m
    raise NoCenteredResidue(f"no t = {r} mod {m} with |t| <= {bound}")


def residue_lifts(r: int, m: int, bound: int) -> list[int]:
    """Every t = r (mod m) with |t| <= bound, ascending."""
    first = -bound + ((r + bound) % m)
    return list(range(first, bound + 1, m))


class DecodeFailure(CodeError):
    pass


class NoCandidate(DecodeFailure):
    pass


class Ambiguous(DecodeFailure):
    pass
