"""Set partitions and the moment / truncated-function transforms.

Ground sets are ``{0, .., n-1}`` so indices line up with Python argument
lists.  Blocks are sorted tuples and a partition lists its blocks by
smallest element.

Both transforms take a callable on index blocks (sorted tuples).  They use
the recursion that splits off the block containing the smallest index,

    S(A) = sum over B with min(A) in B, B subset of A:  T(B) * S(A minus B),

which equals the sum over all set partitions of A with O(3**n) work instead
of Bell(n).  Block values are memoized per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

from .errors import DomainError, SizeError

MAX_N = 12


@dataclass(frozen=True)
class SetPartition:
    blocks: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        blocks = tuple(sorted(blocks, key=lambda b: b[0] if b else -1))
        seen = [i for b in blocks for i in b]
        if any(len(b) == 0 for b in blocks):
            raise DomainError("blocks must be nonempty")
        if sorted(seen) != list(range(self.n)):
            raise DomainError(f"blocks {blocks} do not partition range({self.n})")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self):
        return len(self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


def _check_n(n: int, low: int = 1) -> None:
    if int(n) != n or n < low:
        raise DomainError(f"size must be an integer >= {low}, got {n}")
    if n > MAX_N:
        raise SizeError(f"size {n} exceeds the cap {MAX_N}")


def _growth_strings(n: int):
    # Restricted growth strings a[0]=0, a[i] <= 1 + max(a[:i]) enumerate
    # every set partition exactly once.
    a = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    if n == 0:
        yield ()
    else:
        yield from rec(1, 0)


def _from_growth(rgs) -> SetPartition:
    k = max(rgs) + 1 if rgs else 0
    blocks = [[] for _ in range(k)]
    for i, b in enumerate(rgs):
        blocks[b].append(i)
    return SetPartition(tuple(tuple(b) for b in blocks), len(rgs))


def all_partitions(n: int) -> list[SetPartition]:
    """Every set partition of ``{0..n-1}``; there are Bell(n) of them."""
    _check_n(n)
    return [_from_growth(g) for g in _growth_strings(n)]


def partitions_into_k(n: int, k: int) -> list[SetPartition]:
    """Set partitions of ``{0..n-1}`` with exactly ``k`` blocks."""
    _check_n(n)
    if int(k) != k or not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    return [_from_growth(g) for g in _growth_strings(n) if max(g) + 1 == k]


def pairings(n: int) -> list[SetPartition]:
    """Partitions into blocks of size two; empty for odd ``n``."""
    _check_n(n, low=0)
    if n % 2:
        return []

    def rec(rest):
        if not rest:
            yield ()
            return
        first = rest[0]
        for j in range(1, len(rest)):
            pair = (first, rest[j])
            remaining = rest[1:j] + rest[j + 1:]
            for tail in rec(remaining):
                yield (pair,) + tail

    return [SetPartition(p, n) for p in rec(tuple(range(n)))]


def crossing_partitions(m: int, n: int) -> list[SetPartition]:
    """Partitions of ``{0..m+n-1}`` with a block meeting both ``{0..m-1}`` and ``{m..m+n-1}``."""
    if int(m) != m or int(n) != n or m < 1 or n < 1:
        raise DomainError("m and n must be positive integers")
    _check_n(m + n)
    return [p for p in all_partitions(m + n)
            if any(b[0] < m <= b[-1] for b in p.blocks)]


def bell(n: int) -> int:
    """Bell number via the recurrence B(n+1) = sum_k C(n, k) B(k)."""
    b = [1]
    for i in range(n):
        b.append(sum(comb(i, k) * b[k] for k in range(i + 1)))
    return b[n]


def stirling2(n: int, k: int) -> int:
    @lru_cache(maxsize=None)
    def s(n, k):
        if n == k:
            return 1
        if k == 0 or k > n:
            return 0
        return k * s(n - 1, k) + s(n - 1, k - 1)

    return s(n, k)


def _bits(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _submasks_with_lowest(mask: int):
    """Nonempty submasks of ``mask`` that contain its lowest set bit."""
    low = mask & -mask
    rest = mask ^ low
    sub = rest
    while True:
        yield sub | low
        if sub == 0:
            return
        sub = (sub - 1) & rest


def _check_transform_n(n: int) -> None:
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n}")
    if n > MAX_N:
        raise SizeError(f"size {n} exceeds the cap {MAX_N}")


def moments_from_truncated(t: Callable[[tuple[int, ...]], float], n: int) -> float:
    """Sum over all partitions of ``{0..n-1}`` of products of ``t(block)``.

    ``n = 0`` gives the empty product 1.
    """
    _check_transform_n(n)
    tmemo: dict[int, float] = {}
    smemo: dict[int, float] = {0: 1.0}

    def tval(mask):
        if mask not in tmemo:
            tmemo[mask] = t(_bits(mask))
        return tmemo[mask]

    def s(mask):
        if mask in smemo:
            return smemo[mask]
        total = 0.0
        for b in _submasks_with_lowest(mask):
            tb = tval(b)
            if tb != 0.0:
                total += tb * s(mask ^ b)
        smemo[mask] = total
        return total

    return s((1 << n) - 1)


def truncated_from_moments(m: Callable[[tuple[int, ...]], float], n: int) -> float:
    """Invert :func:`moments_from_truncated`: the truncated value on ``{0..n-1}``.

    Uses ``T(A) = S(A) - sum over proper B containing min(A) of T(B) S(A minus B)``.
    """
    _check_transform_n(n)
    if n == 0:
        raise DomainError("truncated functions start at order 1")
    smemo: dict[int, float] = {0: 1.0}
    tmemo: dict[int, float] = {}

    def s(mask):
        if mask not in smemo:
            smemo[mask] = m(_bits(mask))
        return smemo[mask]

    def t(mask):
        if mask in tmemo:
            return tmemo[mask]
        total = s(mask)
        for b in _submasks_with_lowest(mask):
            if b != mask:
                total -= t(b) * s(mask ^ b)
        tmemo[mask] = total
        return total

    return t((1 << n) - 1)


def partition_sum(t: Callable[[tuple[int, ...]], float], partitions: Sequence[SetPartition]) -> float:
    """Literal sum of block products over an explicit list of partitions."""
    total = 0.0
    for p in partitions:
        prod = 1.0
        for b in p.blocks:
            prod *= t(b)
        total += prod
    return total
