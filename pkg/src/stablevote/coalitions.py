"""Coalitions as bitmasks and permutations of the player set.

Players are numbered 1..n.  Internally a coalition is an ``int`` whose bit
``i - 1`` is set when player ``i`` belongs to it; the public API hands out
``frozenset`` objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import OutOfRange

Coalition = frozenset


def to_mask(coalition: Iterable[int] | int, n: int) -> int:
    if isinstance(coalition, (int, np.integer)):
        mask = int(coalition)
        if mask < 0 or mask >> n:
            raise OutOfRange(f"coalition mask {mask:#x} outside {n} players")
        return mask
    mask = 0
    for p in coalition:
        if not 1 <= p <= n:
            raise OutOfRange(f"player {p} outside 1..{n}")
        mask |= 1 << (p - 1)
    return mask


def members(mask: int) -> frozenset:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def coalition(*players: int) -> frozenset:
    return frozenset(players)


def fmt_coalition(c: Iterable[int]) -> str:
    return "{" + ",".join(str(p) for p in sorted(c)) + "}"


@lru_cache(maxsize=None)
def coalition_order(n: int) -> np.ndarray:
    """Masks sorted by (size, sorted member tuple)."""
    masks = range(1 << n)
    key = lambda m: (m.bit_count(), sorted(members(m)))
    return np.array(sorted(masks, key=key), dtype=np.int64)


@lru_cache(maxsize=None)
def coalition_rank(n: int) -> np.ndarray:
    """Inverse of :func:`coalition_order`: position of each mask."""
    order = coalition_order(n)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return rank


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        out += (idx >> i) & 1
    return out


def iter_submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class Permutation:
    """Bijection on 1..n stored as its image tuple: ``images[i-1] == p(i)``."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise OutOfRange(f"not a permutation of 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[j - 1] = j, i
        return cls(tuple(imgs))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Iterable[int]) -> "Permutation":
        imgs = list(range(1, n + 1))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    @classmethod
    def all(cls, n: int) -> Iterator["Permutation"]:
        """Every permutation, in lexicographic order of image tuples."""
        for imgs in itertools.permutations(range(1, n + 1)):
            yield cls(imgs)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def image(self, coalition: Iterable[int]) -> frozenset:
        return frozenset(self.images[i - 1] for i in coalition)

    def image_mask(self, mask: int) -> int:
        out = 0
        for i, img in enumerate(self.images):
            if mask >> i & 1:
                out |= 1 << (img - 1)
        return out

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first."""
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def mask_map(self) -> np.ndarray:
        """Array ``a`` with ``a[T] == p(T)`` for every mask ``T``."""
        return _mask_map(self.images)

    def cycles(self) -> list:
        seen, out = set(), []
        for start in range(1, self.n + 1):
            if start in seen or self(start) == start:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@lru_cache(maxsize=4096)
def _mask_map(images: tuple) -> np.ndarray:
    n = len(images)
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros_like(idx)
    for i, img in enumerate(images):
        out |= ((idx >> i) & 1) << (img - 1)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def all_mask_maps(n: int) -> np.ndarray:
    """Stacked :meth:`Permutation.mask_map` for every permutation, lexicographic."""
    return np.stack([p.mask_map() for p in Permutation.all(n)])
