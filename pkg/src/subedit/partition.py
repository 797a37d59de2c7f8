"""Splitting a binary string at occurrences of the marker 0^k 1^k."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def pattern(k: int) -> str:
    return "0" * k + "1" * k


def find_patterns(x: str, k: int) -> tuple[int, ...]:
    """1-based start positions of every occurrence of 0^k 1^k in x."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p = pattern(k)
    out = []
    i = x.find(p)
    while i >= 0:
        out.append(i + 1)
        # occurrences never overlap, so skipping the whole pattern is safe
        i = x.find(p, i + 2 * k)
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    parts: tuple[str, ...]
    starts: tuple[int, ...]
    length: int

    @property
    def n_parts(self) -> int:
        return len(self.parts)

    def end(self, i: int) -> int:
        """1-based last bit position of part i (1-based); start-1 when empty."""
        return self.starts[i - 1] + len(self.parts[i - 1]) - 1


@lru_cache(maxsize=1 << 14)
def partition(x: str, k: int) -> Partition:
    """Break x at the left edge of every pattern.

    Part 1 starts at bit 1 and is empty when x itself begins with the
    pattern, so the number of parts is always one more than the number of
    occurrences.
    """
    cuts = find_patterns(x, k)
    starts = (1,) + cuts
    bounds = starts + (len(x) + 1,)
    parts = tuple(x[bounds[i] - 1:bounds[i + 1] - 1] for i in range(len(starts)))
    return Partition(parts, starts, len(x))


def n_parts(x: str, k: int) -> int:
    return 1 + len(find_patterns(x, k))


def is_dense(x: str, k: int, delta: int) -> bool:
    """True when every part of x has length at most delta."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    if len(x) <= delta:
        return True
    prev = 1
    for pos in find_patterns(x, k):
        if pos - prev > delta:
            return False
        prev = pos
    return len(x) + 1 - prev <= delta


def part_interval_to_bits(part: Partition, j_lo: int, j_hi: int,
                          margin_parts: int = 0, margin_bits: int = 0) -> tuple[int, int]:
    """Bit interval covered by parts j_lo..j_hi, widened by the margins."""
    if j_lo < 1 or j_hi < j_lo:
        raise ValueError(f"bad part interval [{j_lo}, {j_hi}]")
    n = part.length
    first = min(max(1, j_lo - margin_parts), part.n_parts)
    last = max(1, min(part.n_parts, j_hi + margin_parts))
    lo = part.starts[first - 1] - margin_bits
    hi = part.end(last) + margin_bits
    lo = max(1, lo)
    return lo, max(lo, min(max(n, 1), hi))
