"""Exhaustive enumeration of all voting rules on small player sets."""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np

from .coalitions import Permutation, all_mask_maps, coalition_order, coalition_rank
from .errors import TooLarge
from .kernels import monotone_merge
from .rules import ExplicitRule, VotingRule, minimal_table

MAX_ENUMERATION = 6


def monotone_tables(n: int) -> np.ndarray:
    """Every monotone Boolean function on ``n`` players, constants included.

    Tables are ``uint64`` words whose bit ``T`` is the value on mask ``T``.
    """
    if n > MAX_ENUMERATION:
        raise TooLarge(f"enumeration limited to n <= {MAX_ENUMERATION}, got {n}")
    tabs = np.array([0, 1], dtype=np.uint64)
    for k in range(n):
        tabs = monotone_merge(tabs, 1 << k)
    return tabs


def _order_keys(tabs: np.ndarray, n: int) -> np.ndarray:
    width = 1 << n
    keys = np.zeros(tabs.shape, dtype=np.uint64)
    one = np.uint64(1)
    for pos, mask in enumerate(coalition_order(n)):
        bit = (tabs >> np.uint64(mask)) & one
        keys |= bit << np.uint64(width - 1 - pos)
    return keys


@lru_cache(maxsize=None)
def rule_tables(n: int) -> np.ndarray:
    """Truth tables of all rules on ``n`` players in canonical enumeration order,
    as an ``(m, 2**n)`` boolean array."""
    if not 1 <= n <= MAX_ENUMERATION:
        raise TooLarge(f"enumeration needs 1 <= n <= {MAX_ENUMERATION}, got {n}")
    tabs = monotone_tables(n)
    full = np.uint64((1 << (1 << n)) - 1)
    tabs = tabs[(tabs != 0) & (tabs != full)]
    tabs = tabs[np.argsort(_order_keys(tabs, n), kind="stable")]
    bits = ((tabs[:, None] >> np.arange(1 << n, dtype=np.uint64)) & np.uint64(1)).astype(bool)
    bits.setflags(write=False)
    return bits


def enumerate_rules(n: int) -> Iterator[ExplicitRule]:
    """Yield every voting rule on ``n`` players exactly once, deterministically.

    Order: truth table read big-endian over coalitions sorted by
    (size, members), ascending.
    """
    for row in rule_tables(n):
        yield ExplicitRule(n, row)


def count_rules(n: int) -> int:
    return rule_tables(n).shape[0]


class RuleSpace:
    """All rules on ``n`` players with precomputed structural arrays.

    Rows follow :func:`enumerate_rules`; ``swing[r, i]`` etc. are boolean
    player-set memberships (column ``i`` is player ``i + 1``).
    """

    def __init__(self, n: int):
        if n > 5:
            raise TooLarge(f"census operations support n <= 5, got {n}")
        self.n = n
        self.tables = rule_tables(n)
        self.size = self.tables.shape[0]
        self.minimal = minimal_table(self.tables, n)
        self._lookup = {row.tobytes(): k for k, row in enumerate(self.tables)}
        bit = 1 << np.arange(n)
        has = (np.arange(1 << n)[:, None] & bit) != 0          # (2^n, n)
        mwc_count = self.minimal.sum(axis=1)
        self.mwc_count = mwc_count
        self.swing = (self.minimal.astype(np.int64) @ has.astype(np.int64)) > 0
        self.veto = (self.minimal.astype(np.int64) @ has.astype(np.int64)) == mwc_count[:, None]
        self.null = ~self.swing
        self.is_veto = self.veto.any(axis=1)
        self.is_oligarchic = mwc_count == 1
        self.oligarchic = self.veto & self.is_oligarchic[:, None]
        rank = coalition_rank(n)
        self.mwc_lists = []
        for row in self.minimal:
            ms = np.nonzero(row)[0]
            self.mwc_lists.append(ms[np.argsort(rank[ms], kind="stable")])

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"RuleSpace(n={self.n}, rules={self.size})"

    def rule(self, k: int) -> ExplicitRule:
        return self._rules[k]

    @cached_property
    def _rules(self):
        return [ExplicitRule(self.n, row) for row in self.tables]

    @property
    def rules(self):
        return self._rules

    def index_of(self, v: VotingRule) -> int:
        if v.n != self.n:
            raise ValueError(f"rule on {v.n} players, space on {self.n}")
        return self._lookup[np.ascontiguousarray(v.table()).tobytes()]

    @staticmethod
    def mask_of(cols) -> int:
        return int(sum(1 << int(i) for i in cols))

    def swing_mask(self, k: int) -> int:
        return self.mask_of(np.nonzero(self.swing[k])[0])

    def veto_mask(self, k: int) -> int:
        return self.mask_of(np.nonzero(self.veto[k])[0])

    def oligarchic_mask(self, k: int) -> int:
        return self.mask_of(np.nonzero(self.oligarchic[k])[0])

    @cached_property
    def permutations(self) -> list:
        return list(Permutation.all(self.n))

    @cached_property
    def permutation_action(self) -> np.ndarray:
        """``action[p, r]`` is the index of ``apply_permutation(rule r, perm p)``."""
        maps = all_mask_maps(self.n)
        out = np.empty((len(maps), self.size), dtype=np.int64)
        for p, mm in enumerate(maps):
            permuted = np.ascontiguousarray(self.tables[:, mm])
            out[p] = [self._lookup[row.tobytes()] for row in permuted]
        return out

    @cached_property
    def canonical(self) -> np.ndarray:
        """Index of each rule's canonical representative.

        Rows are sorted by the same key that defines canonical form, so the
        representative is the smallest index in the orbit.
        """
        return self.permutation_action.min(axis=0)

    @cached_property
    def orbit_sizes(self) -> dict:
        reps, counts = np.unique(self.canonical, return_counts=True)
        return {int(r): int(c) for r, c in zip(reps, counts)}

    def category(self, k: int) -> str:
        if self.is_oligarchic[k]:
            return "oligarchic"
        if self.is_veto[k]:
            return "veto_non_oligarchic"
        return "non_veto"


@lru_cache(maxsize=None)
def rule_space(n: int) -> RuleSpace:
    return RuleSpace(n)
