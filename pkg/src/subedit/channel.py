"""The single k-substring-edit channel: apply, enumerate, sample."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .blockhash import _inserts
from .core import CodeError
from .partition import is_dense


class OutOfRange(CodeError, ValueError):
    pass


@dataclass(frozen=True)
class EditOp:
    """Replace x[pos .. pos+del_len-1] (1-based) by ``ins``."""
    pos: int
    del_len: int
    ins: str = ""

    def __str__(self) -> str:
        return f"j={self.pos} a={self.del_len} ins={self.ins or '-'}"


def apply_edit(x: str, op: EditOp, k: int | None = None) -> str:
    if op.pos < 1 or op.del_len < 0 or op.pos + op.del_len - 1 > len(x):
        raise OutOfRange(f"{op} does not fit a string of length {len(x)}")
    if op.ins.strip("01"):
        raise ValueError("inserted string must be binary")
    if k is not None and (op.del_len > k or len(op.ins) > k):
        raise OutOfRange(f"{op} exceeds k={k}")
    return x[:op.pos - 1] + op.ins + x[op.pos - 1 + op.del_len:]


def enumerate_edits(x: str, k: int) -> Iterator[tuple[EditOp, str]]:
    """Every edit in canonical order (position, deleted length, inserted bits)."""
    ins = _inserts(k)
    for j in range(1, len(x) + 2):
        for a in range(min(k, len(x) - j + 1) + 1):
            head, tail = x[:j - 1], x[j - 1 + a:]
            for u in ins:
                yield EditOp(j, a, u), head + u + tail


def count_edits(n: int, k: int) -> int:
    per = 2 ** (k + 1) - 1
    return per * sum(n + 1 - a for a in range(min(k, n) + 1))


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 seeded with a 64-bit integer; identical streams on every platform."""
    return np.random.Generator(np.random.PCG64(seed & (2**64 - 1)))


def _op_at(n: int, k: int, index: int) -> EditOp:
    """The index-th edit of the canonical enumeration for length n."""
    ins = _inserts(k)
    per = len(ins)
    full = per * (k + 1)
    # positions 1..n+1-k admit every deleted length
    n_full = max(0, n + 1 - k)
    if index < n_full * full:
        j, rest = divmod(index, full)
        a, u = divmod(rest, per)
        return EditOp(j + 1, a, ins[u])
    index -= n_full * full
    for j in range(n_full + 1, n + 2):
        width = (min(k, n - j + 1) + 1) * per
        if index < width:
            a, u = divmod(index, per)
            return EditOp(j, a, ins[u])
        index -= width
    raise IndexError("edit index out of range")


def sample_edit(x: str, k: int, seed: int | np.random.Generator) -> tuple[EditOp, str]:
    """Uniform draw over the canonical edits of x."""
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    op = _op_at(len(x), k, int(rng.integers(count_edits(len(x), k))))
    return op, apply_edit(x, op, k)


def random_bits(n: int, rng: np.random.Generator) -> str:
    return (rng.integers(0, 2, n, dtype=np.uint8) + 48).tobytes().decode()


def density_trial(n: int, k: int, delta: int, trials: int, seed: int) -> float:
    """Fraction of uniform x in {0,1}^n that are not (P, delta)-dense."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = make_rng(seed)
    bad = sum(not is_dense(random_bits(n, rng), k, delta) for _ in range(trials))
    return bad / trials
