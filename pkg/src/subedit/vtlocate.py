"""VT sketches of integer strings and approximate location of a locatable edit."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from .core import CodeError, centered_residue


class InconsistentEdit(CodeError):
    pass


class EmptyCandidateSet(CodeError):
    pass


def vt(z) -> int:
    """Varshamov-Tenengolts weighted sum, sum of i*z_i with 1-based i."""
    return sum(i * v for i, v in enumerate(z, 1))


def eta(v: int, w, d_len: int, d_sum: int) -> int:
    """Predicted VT difference if the edit sat at index v of w."""
    if not 1 <= v <= len(w) + 1:
        raise ValueError(f"v={v} outside [1, {len(w) + 1}]")
    return d_len * sum(w[v - 1:]) + d_sum * v


def eta_table(w, d_len: int, d_sum: int) -> list[int]:
    """eta(v) for v = 1..|w|+1 in one pass."""
    suffix = list(accumulate(reversed(w), initial=0))[::-1]
    return [d_len * suffix[v - 1] + d_sum * v for v in range(1, len(w) + 2)]


def infer_edit(z, w) -> tuple[int, int, int]:
    """Smallest substring edit (j, a, b) turning z into w.

    Strips the longest common prefix, then the longest common suffix of what
    remains.  Identical strings give (|z|+1, 0, 0).
    """
    z, w = tuple(z), tuple(w)
    p = 0
    lim = min(len(z), len(w))
    while p < lim and z[p] == w[p]:
        p += 1
    s = 0
    while s < lim - p and z[-1 - s] == w[-1 - s]:
        s += 1
    return p + 1, len(z) - p - s, len(w) - p - s


def _check_edit(z, w, op) -> None:
    j, a, b = op
    if j < 1 or a < 0 or b < 0 or j + a - 1 > len(z) or j + b - 1 > len(w):
        raise InconsistentEdit(f"edit {op} out of range")
    if len(z) - a != len(w) - b:
        raise InconsistentEdit("lengths disagree with the edit")
    if tuple(z[:j - 1]) != tuple(w[:j - 1]) or tuple(z[j - 1 + a:]) != tuple(w[j - 1 + b:]):
        raise InconsistentEdit(f"z and w differ outside edit {op}")


def is_locatable(z, w, op, K: int) -> bool:
    """Whether w arises from z by a locatable K-substring edit described by op.

    Conditions: a, b <= K; |sum z - sum w| < w_i for every i; and the edit
    changes the length or the sum.
    """
    _check_edit(z, w, op)
    _, a, b = op
    if a > K or b > K:
        return False
    d_sum = sum(z) - sum(w)
    if any(abs(d_sum) >= wi for wi in w):
        return False
    return len(z) != len(w) or d_sum != 0


def is_strictly_monotone(values) -> bool:
    steps = [b - a for a, b in zip(values, values[1:])]
    return all(s > 0 for s in steps) or all(s < 0 for s in steps)


@dataclass(frozen=True)
class LocatorInput:
    w: tuple[int, ...]
    d_len: int
    d_sum: int
    vt_mod: int
    m: int
    A: int
    K: int


def locate(inp: LocatorInput) -> tuple[int, int]:
    """Interval [j_lo, j_hi] of part indices that contains the edit position.

    The VT difference is known modulo m.  When m exceeds twice the magnitude
    bound there is one lift; otherwise every lift within the bound is kept,
    and an index survives if it is within 3K^2 A of the eta prediction for
    any lift.  The result is widened by one index on the left.
    """
    w = inp.w
    if inp.d_len == 0 and inp.d_sum == 0:
        raise EmptyCandidateSet("no change in length or sum: edit is not locatable")
    K2 = inp.K * inp.K
    sum_z = sum(w) + inp.d_sum
    bound = 4 * K2 * (sum_z + inp.A)
    window = 3 * K2 * inp.A
    r = (inp.vt_mod - vt(w)) % inp.m
    cands = []
    if inp.m > 2 * bound:
        t = centered_residue(r, inp.m, bound)
        cands = [v for v, e in enumerate(eta_table(w, inp.d_len, inp.d_sum), 1)
                 if abs(t - e) < window]
    else:
        m = inp.m
        for v, e in enumerate(eta_table(w, inp.d_len, inp.d_sum), 1):
            # is some t = r (mod m) with |t| <= bound inside the window around e?
            lo = max(e - window + 1, -bound)
            hi = min(e + window - 1, bound)
            if lo <= hi and lo + (r - lo) % m <= hi:
                cands.append(v)
    if not cands:
        raise EmptyCandidateSet("no index matches the VT residue")
    return max(1, cands[0] - 1), min(len(w) + 1, cands[-1])
