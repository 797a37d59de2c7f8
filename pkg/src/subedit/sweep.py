"""Exhaustive and sampled verification sweeps.

A sweep feeds every (x, y) pair with y one k-substring edit from x through
the decoder and, optionally, the fallback decoder and the feature-level
lemma checks, and tallies the outcome.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import asdict, dataclass, field

from . import blockhash
from .blockhash import COMPRESSED
from .channel import count_edits, make_rng, random_bits
from .codec import Sketch, decode, detect_identity, fallback_recover, sketch
from .core import Ambiguous, CodeParams, DecodeFailure
from .featmap import feature_vector
from .partition import is_dense
from .vtlocate import (
    EmptyCandidateSet, LocatorInput, eta_table, infer_edit, is_locatable,
    is_strictly_monotone, locate, vt,
)

LEMMA_KEYS = (
    "edit_size",        # induced edit on f larger than K
    "locatable",        # locatable-edit conditions fail
    "bounded",          # some feature value above A_f
    "monotone",         # eta not strictly monotone
    "proximity",        # |dVT - eta(j)| >= 3K^2 A
    "magnitude",        # |dVT| > 4K^2 (sum z + A)
    "containment",      # locator interval misses j
    "width",            # locator interval wider than 6K^2 A
    "locator_error",    # locator raised
    "delta_len",        # |n_P(x) - n_P(y)| > 2
    "delta_sum",        # |F(x) - F(y)| >= m_fsum / 2
)


@dataclass
class SweepReport:
    label: str
    n: int
    k: int
    mode: str
    phi_mode: str
    strings: int = 0
    edits: int = 0
    instances: int = 0
    failures: int = 0
    ambiguous: int = 0
    paths: Counter = field(default_factory=Counter)
    fallback_locatable: int = 0
    fallback_disagreements: int = 0
    fallback_ambiguous: int = 0
    identity_errors: int = 0
    multi_block_fast: int = 0
    blocks_hit: Counter = field(default_factory=Counter)
    max_part_interval: int = 0
    max_feature: int = 0
    A_f: int = 0
    lemma_instances: int = 0
    lemma: Counter = field(default_factory=Counter)
    examples: dict = field(default_factory=dict)
    primes: Counter = field(default_factory=Counter)
    seconds: float = 0.0

    @property
    def fallbacks(self) -> int:
        return self.paths["fallback"]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["paths"] = dict(self.paths)
        d["lemma"] = {key: self.lemma[key] for key in LEMMA_KEYS}
        d["blocks_hit"] = dict(sorted(self.blocks_hit.items()))
        d["primes"] = {str(p): c for p, c in sorted(self.primes.items())}
        d["fallbacks"] = self.fallbacks
        return d

    @property
    def ok(self) -> bool:
        return (self.failures == 0 and self.ambiguous == 0 and self.fallback_disagreements == 0
                and self.identity_errors == 0)


def lemma_check(x: str, y: str, params: CodeParams) -> tuple[set[str], bool, int, int]:
    """Feature-level checks for one edited pair x != y.

    Returns (violated keys, locatable?, locator interval width, max feature).
    """
    K, A = params.K, params.A_f
    K2 = K * K
    z = feature_vector(x, params).vals
    w = feature_vector(y, params).vals
    bad = set()
    op = infer_edit(z, w)
    j, a, b = op
    if a > K or b > K:
        bad.add("edit_size")
    locatable = is_locatable(z, w, op, K)
    if not locatable:
        bad.add("locatable")
    top = max(z + w) if z + w else 0
    if top > A:
        bad.add("bounded")
    d_len, d_sum = len(z) - len(w), sum(z) - sum(w)
    if abs(d_len) > 2:
        bad.add("delta_len")
    if 2 * abs(d_sum) >= params.m_fsum:
        bad.add("delta_sum")
    table = eta_table(w, d_len, d_sum)
    if not is_strictly_monotone(table):
        bad.add("monotone")
    d_vt = vt(z) - vt(w)
    if j <= len(w) + 1 and abs(d_vt - table[j - 1]) >= 3 * K2 * A:
        bad.add("proximity")
    if abs(d_vt) > 4 * K2 * (sum(z) + A):
        bad.add("magnitude")
    width = -1
    try:
        lo, hi = locate(LocatorInput(w, d_len, d_sum, vt(z) % params.m_vt, params.m_vt, A, K))
    except EmptyCandidateSet:
        bad.add("locator_error")
    else:
        width = hi - lo
        if not lo <= j <= hi:
            bad.add("containment")
        if width > 6 * K2 * A:
            bad.add("width")
    return bad, locatable, width, top


def _first_diff(a: str, b: str) -> int:
    """0-based index of the first disagreement (clipped to len(a) - 1)."""
    i = next((i for i, (u, v) in enumerate(zip(a, b)) if u != v), min(len(a), len(b)))
    return min(i, len(a) - 1)


class _Sweep:
    def __init__(self, rep: SweepReport, params: CodeParams, fallback: bool, lemmas: bool):
        self.rep, self.params = rep, params
        self.fallback, self.lemmas = fallback, lemmas
        rep.A_f = params.A_f

    def run(self, x: str, y: str, sk: Sketch) -> str | None:
        rep, params = self.rep, self.params
        rep.instances += 1
        locatable = True
        if x != y and self.lemmas:
            rep.lemma_instances += 1
            bad, locatable, width, top = lemma_check(x, y, params)
            rep.max_part_interval = max(rep.max_part_interval, width)
            rep.max_feature = max(rep.max_feature, top)
            for key in bad:
                rep.lemma[key] += 1
                rep.examples.setdefault(key, (x, y))
        if detect_identity(y, sk) != (x == y):
            rep.identity_errors += 1
            rep.examples.setdefault("identity", (x, y))
        try:
            res = decode(y, sk)
        except DecodeFailure as exc:
            rep.failures += 1
            rep.ambiguous += isinstance(exc, Ambiguous)
            rep.examples.setdefault("failure", (x, y))
            return None
        rep.paths[res.path] += 1
        if res.path == "fallback" and locatable:
            rep.fallback_locatable += 1
            rep.examples.setdefault("fallback_locatable", (x, y))
        if res.path == "fast" and -(-params.n // params.blk) >= 2:
            rep.multi_block_fast += 1
            rep.blocks_hit[_first_diff(res.x, y) // params.blk] += 1
        if res.x != x:
            rep.failures += 1
            rep.examples.setdefault("failure", (x, y))
        if self.fallback:
            try:
                fb = fallback_recover(y, sk)
            except Ambiguous:
                rep.fallback_ambiguous += 1
                fb = None
            except DecodeFailure:
                fb = None
            if fb != res.x:
                rep.fallback_disagreements += 1
                rep.examples.setdefault("fallback_disagreement", (x, y))
        return res.x


def exhaustive_sweep(params: CodeParams, *, phi_mode: str = COMPRESSED, fallback: bool = True,
                     lemmas: bool = True, progress=None) -> SweepReport:
    """Every dense x of length params.n against every one-edit output y.

    Pairs are visited grouped by y, so the candidate list of each y is built
    once for all the x that reach it.
    """
    n, k = params.n, params.k
    t0 = time.perf_counter()
    rep = SweepReport("exhaustive", n, k, params.mode, phi_mode)
    sketches: dict[str, Sketch] = {}
    for bits in itertools.product("01", repeat=n):
        x = "".join(bits)
        if is_dense(x, k, params.delta):
            sk = sketch(x, params, phi_mode)
            sketches[x] = sk
            rep.primes[sk.P] += 1
    rep.strings = len(sketches)
    rep.edits = rep.strings * count_edits(n, k)
    sw = _Sweep(rep, params, fallback, lemmas)
    for m in range(max(0, n - k), n + k + 1):
        for bits in itertools.product("01", repeat=m):
            y = "".join(bits)
            for x in blockhash.ball_of_length(y, k, n):
                sk = sketches.get(x)
                if sk is not None:
                    sw.run(x, y, sk)
        if progress:
            progress(m, rep)
    rep.seconds = time.perf_counter() - t0
    return rep


def dense_samples(params: CodeParams, count: int, seed: int) -> list[str]:
    """``count`` distinct pseudorandom dense strings of length params.n."""
    rng = make_rng(seed)
    out: dict[str, None] = {}
    while len(out) < count:
        x = random_bits(params.n, rng)
        if is_dense(x, params.k, params.delta):
            out.setdefault(x, None)
    return list(out)


def sampled_sweep(params: CodeParams, samples: int, seed: int, *,
                  phi_modes: tuple[str, ...] = (COMPRESSED,), fallback: bool = True,
                  lemmas: bool = True) -> list[SweepReport]:
    """All edits of ``samples`` random dense strings, once per phi mode.

    Returns one report per mode; each report's ``examples["mode_mismatch"]``
    flags any instance where the modes recovered different strings.
    """
    t0 = time.perf_counter()
    xs = dense_samples(params, samples, seed)
    reps = [SweepReport(f"sampled(seed={seed})", params.n, params.k, params.mode, m) for m in phi_modes]
    sweeps = [_Sweep(r, params, fallback, lemmas and i == 0) for i, r in enumerate(reps)]
    for x in xs:
        sks = [sketch(x, params, m) for m in phi_modes]
        for r, sk in zip(reps, sks):
            r.strings += 1
            r.edits += count_edits(params.n, params.k)
            r.primes[sk.P] += 1
        for y in blockhash.edit_ball(x, params.k):
            outs = {sw.run(x, y, sk) for sw, sk in zip(sweeps, sks)}
            if len(outs) > 1:
                for r in reps:
                    r.examples.setdefault("mode_mismatch", (x, y))
                    r.lemma["mode_mismatch"] += 1
    for r in reps:
        r.seconds = time.perf_counter() - t0
    return reps
