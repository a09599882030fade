"""Integer partitions and the statistics used by the vertex formalism."""
from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterable

__all__ = [
    "Partition",
    "conjugate",
    "kappa",
    "enumerate_partitions",
    "hooks",
    "contains",
    "partitions_inside",
]


class Partition(tuple):
    """Weakly decreasing tuple of positive integers; ``Partition()`` is empty."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] <= 0:
            raise ValueError(f"parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def part(self, j: int) -> int:
        """The ``j``-th part (0-based), zero past the end."""
        return self[j] if j < len(self) else 0

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    def to_json(self) -> str:
        return json.dumps(list(self))


EMPTY = Partition()


def conjugate(mu: Partition) -> Partition:
    """Column lengths of the Young diagram of ``mu``."""
    if not mu:
        return EMPTY
    return Partition(sum(1 for p in mu if p > j) for j in range(mu[0]))


def kappa(mu: Partition) -> int:
    """``sum_j mu_j (mu_j - 2j + 1)`` with 1-based ``j``; always even."""
    return sum(p * (p - 2 * j + 1) for j, p in enumerate(mu, start=1))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[Partition, ...]:
    if n == 0:
        return (EMPTY,)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append(Partition((first,) + rest))
    return tuple(out)


def enumerate_partitions(size: int) -> list[Partition]:
    """All partitions of ``size`` in reverse lexicographic order.

    >>> enumerate_partitions(3)
    [Partition([3]), Partition([2, 1]), Partition([1, 1, 1])]
    """
    if size < 0:
        raise ValueError("size must be nonnegative")
    return list(_partitions(size, size))


def hooks(c: int) -> list[Partition]:
    """The hook shapes ``(c-k, 1^k)`` for ``k = 0..c-1``."""
    if c <= 0:
        raise ValueError(f"winding must be positive, got {c}")
    return [Partition((c - k,) + (1,) * k) for k in range(c)]


def contains(lam: Partition, mu: Partition) -> bool:
    """Whether the diagram of ``mu`` sits inside that of ``lam``."""
    if len(mu) > len(lam):
        return False
    return all(m <= l for m, l in zip(mu, lam))


@lru_cache(maxsize=None)
def partitions_inside(bound: Partition) -> tuple[Partition, ...]:
    """Every partition contained in ``bound``, smallest first."""
    out = [EMPTY]

    def grow(prefix: tuple[int, ...], row: int) -> None:
        if row >= len(bound):
            return
        cap = bound[row] if row == 0 else min(bound[row], prefix[-1])
        for p in range(1, cap + 1):
            nxt = prefix + (p,)
            out.append(Partition(nxt))
            grow(nxt, row + 1)

    grow((), 0)
    return tuple(sorted(out, key=lambda p: (p.size, [-x for x in p])))
