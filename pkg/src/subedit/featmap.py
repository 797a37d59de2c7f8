"""Per-part feature map f = d + B*n_{1^k} + C*len and its vector over a partition."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import CodeParams
from .partition import partition


def d_val(s: str, k: int) -> int:
    """Interleaved parities packed as a k-bit integer, class 1 most significant.

    Bit j (1-based, from the left) is the xor of s_i over i = j (mod k).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    out = 0
    for j in range(k):
        out = (out << 1) | (s[j::k].count("1") & 1)
    return out


def count_ones_runs(s: str, k: int) -> int:
    """Number of (overlapping) occurrences of 1^k in s."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(len(run) - k + 1 for run in s.split("0") if len(run) >= k)


def _f(s: str, k: int, B: int, C: int) -> int:
    if not s:
        return 0
    return d_val(s, k) + B * count_ones_runs(s, k) + C * len(s)


def f_val(s: str, params: CodeParams) -> int:
    return _f(s, params.k, params.B, params.C)


@dataclass(frozen=True)
class FeatureVector:
    vals: tuple[int, ...]
    total: int

    @property
    def n_parts(self) -> int:
        return len(self.vals)


@lru_cache(maxsize=1 << 12)
def _feature_vector(x: str, k: int, B: int, C: int) -> FeatureVector:
    vals = tuple(_f(p, k, B, C) for p in partition(x, k).parts)
    return FeatureVector(vals, sum(vals))


def feature_vector(x: str, params: CodeParams) -> FeatureVector:
    return _feature_vector(x, params.k, params.B, params.C)
