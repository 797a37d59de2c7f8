"""Fixed-length block hash phi and its odd/even aggregate psi.

phi is a syndrome-compression hash: one prime P is chosen per string so
that, for every adjacent pair of blocks, no other string sharing a one-edit
descendant with that pair collides with it on both block residues.  The
reference mode sends block contents verbatim and serves as an oracle.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

from .core import Ambiguous, CodeError, CodeParams, NoCandidate

COMPRESSED = "compressed"
REFERENCE = "reference"
PHI_MODES = (COMPRESSED, REFERENCE)

# Sieve limit for factoring block differences; larger blocks scan primes.
_SPF_MAX_BITS = 22
# Above this many confusable strings per sketch, "auto" picks reference mode.
_ENUM_BUDGET = 3_000_000


class PrimeSearchExhausted(CodeError):
    pass


@lru_cache(maxsize=None)
def _inserts(k: int) -> tuple[str, ...]:
    """All strings of length 0..k, by length then numeric value."""
    out = []
    for b in range(k + 1):
        out.extend(format(v, f"0{b}b") if b else "" for v in range(2**b))
    return tuple(out)


def edit_ball(s: str, k: int, window: tuple[int, int] | None = None) -> frozenset[str]:
    """Every string reachable from s by one k-substring edit (s included).

    ``window`` restricts the 1-based edit position to [lo, hi].
    """
    lo, hi = window if window else (1, len(s) + 1)
    ins = _inserts(k)
    out = set()
    for j in range(max(1, lo), min(hi, len(s) + 1) + 1):
        head = s[:j - 1]
        for a in range(min(k, len(s) - j + 1) + 1):
            tail = s[j - 1 + a:]
            out.update(head + u + tail for u in ins)
    return frozenset(out)


@lru_cache(maxsize=256)
def ball_of_length(s: str, k: int, length: int, lo: int = 1, hi: int | None = None) -> tuple[str, ...]:
    """Distinct members of the edit ball of s with the given length.

    Canonical order: edit position, deleted length, inserted bits.  Since
    the edit relation is symmetric, these are exactly the strings of that
    length that reach s by one edit.
    """
    if hi is None:
        hi = len(s) + 1
    b_minus_a = length - len(s)
    seen = {}
    for j in range(max(1, lo), min(hi, len(s) + 1) + 1):
        head = s[:j - 1]
        for a in range(min(k, len(s) - j + 1) + 1):
            b = a + b_minus_a
            if not 0 <= b <= k:
                continue
            tail = s[j - 1 + a:]
            for v in range(2**b):
                u = format(v, f"0{b}b") if b else ""
                seen.setdefault(head + u + tail, None)
    return tuple(seen)


def reaches_by_one_edit(x: str, y: str, k: int) -> bool:
    """Whether y is obtained from x by at most one k-substring edit."""
    lim = min(len(x), len(y))
    p = 0
    while p < lim and x[p] == y[p]:
        p += 1
    s = 0
    while s < lim - p and x[-1 - s] == y[-1 - s]:
        s += 1
    return len(x) - p - s <= k and len(y) - p - s <= k


def confusable_set(r: str, k: int) -> frozenset[str]:
    """Strings of length |r|, other than r, sharing a one-edit descendant with r."""
    out = set()
    for s in edit_ball(r, k):
        out.update(ball_of_length(s, k, len(r)))
    out.discard(r)
    return frozenset(out)


def _ball_ints(vals: np.ndarray, L: int, k: int, out_len: int | None = None) -> dict[int, np.ndarray]:
    """Vectorised edit ball of L-bit integers (MSB = position 1), by output length."""
    out = defaultdict(list)
    vals = vals.astype(np.int64)[:, None]
    j = np.arange(1, L + 2, dtype=np.int64)
    for a in range(k + 1):
        jj = j[j + a - 1 <= L]
        pre_len = jj - 1
        suf_len = L - pre_len - a
        pre = vals >> (L - pre_len)[None, :]
        suf = vals & ((np.int64(1) << suf_len) - 1)[None, :]
        for b in range(k + 1):
            lo = L - a + b
            if out_len is not None and lo != out_len:
                continue
            u = np.arange(2**b, dtype=np.int64)
            res = ((((pre << b)[:, :, None] | u[None, None, :]) << suf_len[None, :, None])
                   | suf[:, :, None])
            out[lo].append(res.ravel())
    return {lo: np.unique(np.concatenate(v)) for lo, v in out.items()}


def _confusable_ints(value: int, L: int, k: int) -> np.ndarray:
    level1 = _ball_ints(np.array([value]), L, k)
    level2 = [_ball_ints(v, lo, k, out_len=L).get(L, np.empty(0, np.int64)) for lo, v in level1.items()]
    conf = np.unique(np.concatenate(level2))
    return conf[conf != value]


@dataclass(frozen=True)
class Region:
    """An adjacent block pair (or a lone block) and the strings it must be told apart from."""
    index: int        # 0-based index of the left block
    start: int        # 1-based first bit
    text: str
    split: int        # length of the left block; equals len(text) for a lone block
    others: np.ndarray


def block_starts(n: int, blk: int) -> range:
    return range(1, n + 1, blk)


def split_blocks(x: str, blk: int) -> list[str]:
    return [x[i:i + blk] for i in range(0, len(x), blk)]


def confusable_pairs(x: str, blk: int, k: int) -> list[Region]:
    """Separation requirements for every adjacent block pair of x."""
    if min(2 * blk, len(x)) + k > 62:
        raise ValueError("vectorised enumeration supports regions up to 60 bits")
    blocks = split_blocks(x, blk)
    if len(blocks) == 1:
        spans = [(0, 1)]
    else:
        spans = [(i, 2) for i in range(len(blocks) - 1)]
    out = []
    for i, width in spans:
        text = "".join(blocks[i:i + width])
        others = _confusable_ints(int(text, 2), len(text), k) if text else np.empty(0, np.int64)
        out.append(Region(i, i * blk + 1, text, len(blocks[i]), others))
    return out


def _block_value(block: str, blk: int) -> int:
    return int(block.ljust(blk, "0"), 2) if block else 0


def phi_block(block: str, blk: int, P: int) -> int:
    """Hash of one block: its zero-padded value, reduced mod P unless P == 0."""
    v = _block_value(block, blk)
    return v % P if P else v


def _region_gcds(region: Region, blk: int) -> np.ndarray:
    L = len(region.text)
    right_len = L - region.split
    others = region.others
    if right_len == 0:
        pad = blk - L
        return np.abs(others - int(region.text, 2)) << pad
    mask = (1 << right_len) - 1
    pad = blk - right_len
    d_left = np.abs((others >> right_len) - (int(region.text, 2) >> right_len))
    d_right = np.abs((others & mask) - (int(region.text, 2) & mask)) << pad
    return np.gcd(d_left, d_right)


@lru_cache(maxsize=4)
def _spf_table(bits: int) -> np.ndarray:
    n = 1 << bits
    spf = np.arange(n + 1, dtype=np.int32)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == p:
            idx = np.arange(p * p, n + 1, p)
            hit = spf[idx] == idx
            spf[idx[hit]] = p
    return spf


def smallest_separating_prime(gcds: np.ndarray, cap_bits: int) -> int:
    """Smallest prime dividing none of the given positive integers."""
    g = np.unique(gcds[gcds > 1]).astype(np.int64)
    cap = 1 << cap_bits
    top = int(g.max()) if g.size else 1
    bits = max(top.bit_length(), 1)
    if bits <= _SPF_MAX_BITS:
        spf = _spf_table(max(bits, 8))
        bad = set()
        while g.size:
            p = spf[g]
            bad.update(np.unique(p).tolist())
            g = g // p
            g = g[g > 1]
        p = 2
        while p in bad:
            p = sympy.nextprime(p)
    else:
        p = 2
        while p <= top and bool((g % p == 0).any()):
            p = sympy.nextprime(p)
            if p >= cap:
                break
    if p >= cap:
        raise PrimeSearchExhausted(f"no separating prime below 2**{cap_bits}")
    return int(p)


@dataclass(frozen=True)
class PhiData:
    values: tuple[int, ...]
    P: int
    b_phi: int
    mode: str


def estimated_enumeration(params: CodeParams) -> int:
    L = min(2 * params.blk, params.n)
    regions = max(1, -(-params.n // params.blk) - 1)
    beta = (L + 1) * (params.k + 1) * (2 ** (params.k + 1) - 1)
    return regions * beta * beta // 4


def choose_phi_mode(params: CodeParams) -> str:
    """Compressed when the confusable sets can be enumerated, else reference."""
    if 2 * params.blk + params.k > 60 or estimated_enumeration(params) > _ENUM_BUDGET:
        return REFERENCE
    return COMPRESSED


def phi_sketch(x: str, params: CodeParams, mode: str = COMPRESSED) -> PhiData:
    blk = params.blk
    blocks = split_blocks(x, blk) or [""]
    if mode == REFERENCE:
        return PhiData(tuple(_block_value(b, blk) for b in blocks), 0, blk, REFERENCE)
    if mode != COMPRESSED:
        raise ValueError(f"unknown phi mode {mode!r}")
    regions = confusable_pairs(x, blk, params.k)
    gcds = [_region_gcds(r, blk) for r in regions if r.others.size]
    P = smallest_separating_prime(np.concatenate(gcds) if gcds else np.empty(0, np.int64),
                                  params.b_phi)
    return PhiData(tuple(phi_block(b, blk, P) for b in blocks), P, params.b_phi, COMPRESSED)


def separates(x: str, params: CodeParams, P: int) -> bool:
    """Check, block pair by block pair, that P tells every confusable string apart."""
    blk = params.blk
    for region in confusable_pairs(x, blk, params.k):
        L = len(region.text)
        for c in region.others.tolist():
            other = format(int(c), f"0{L}b")
            if all(phi_block(a, blk, P) == phi_block(b, blk, P)
                   for a, b in zip(split_blocks(region.text, blk), split_blocks(other, blk))):
                return False
    return True


@dataclass(frozen=True)
class PsiValue:
    odd: int
    even: int


def psi(x: str, params: CodeParams, phi_data: PhiData) -> PsiValue:
    """Sums of phi over odd- and even-numbered blocks, mod 2**b_phi."""
    mod = 1 << phi_data.b_phi
    vals = phi_data.values
    return PsiValue(sum(vals[0::2]) % mod, sum(vals[1::2]) % mod)


def recover_region(y: str, psi_x: PsiValue, P: int, params: CodeParams,
                   interval: tuple[int, int], d: int, *, phi_mode: str = COMPRESSED,
                   accept=None) -> str:
    """Repair one edit of x known to lie in ``interval`` (bit positions of x).

    For each adjacent block pair overlapping the interval, the blocks
    outside the pair are read off y (shifted by d after the pair), their
    hashes are removed from the odd/even sums, and the edit ball of the
    pair's image in y is searched for contents matching the two recovered
    hashes.  ``accept`` can veto candidates (the decoder passes its sketch
    check).  Exactly one surviving string is returned.
    """
    k, blk = params.k, params.blk
    n = len(y) - d
    if abs(d) > k or n < 1:
        raise NoCandidate(f"length change {d} impossible")
    b_phi = blk if phi_mode == REFERENCE else params.b_phi
    mod = 1 << b_phi
    P_eff = 0 if phi_mode == REFERENCE else P
    lo, hi = max(1, interval[0]), min(n, interval[1])
    hi = max(lo, hi)
    nb = -(-n // blk)
    b_lo, b_hi = (lo - 1) // blk, (hi - 1) // blk
    if nb == 1:
        hyps = [(0, 0)]
    elif b_lo == b_hi:
        hyps = [(b_lo, b_lo + 1) if b_lo + 1 < nb else (b_lo - 1, b_lo)]
    else:
        hyps = [(b, b + 1) for b in range(b_lo, b_hi)]

    found = {}
    for bl, br in hyps:
        R_lo, R_hi = bl * blk + 1, min(n, (br + 1) * blk)
        y_end = R_hi + d
        if y_end < R_lo - 1 or y_end > len(y):
            continue
        sums = [psi_x.odd, psi_x.even]
        for i in range(nb):
            if bl <= i <= br:
                continue
            if i < bl:
                text = y[i * blk:(i + 1) * blk]
            else:
                text = y[i * blk + d:min(n, (i + 1) * blk) + d]
            sums[i % 2] -= phi_block(text, blk, P_eff)
        targets = [sums[i % 2] % mod for i in range(bl, br + 1)]
        w_lo = max(lo, R_lo) - R_lo + 1
        w_hi = min(hi + 1, R_hi + 1) - R_lo + 1
        if w_lo > w_hi:
            continue
        for r in ball_of_length(y[R_lo - 1:y_end], k, R_hi - R_lo + 1, w_lo, w_hi):
            if all(phi_block(r[t * blk:(t + 1) * blk], blk, P_eff) == targets[t]
                   for t in range(br - bl + 1)):
                cand = y[:R_lo - 1] + r + y[y_end:]
                if accept is None or accept(cand):
                    found.setdefault(cand, None)
    if not found:
        raise NoCandidate("no block contents match the hash sums")
    if len(found) > 1:
        raise Ambiguous(f"{len(found)} candidates match the hash sums")
    (x,) = found
    if not reaches_by_one_edit(x, y, k):
        raise NoCandidate("recovered string is not one edit from y")
    return x
