"""Exact power indices.

Every index is evaluated on a stack of truth tables at once
(:func:`index_matrix`), producing ``fractions.Fraction`` values.  Raw
measures are normalized to sum to one.  ``_null_zero`` variants zero the
null players before normalizing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .coalitions import popcounts
from .errors import UnknownIndex, UnsupportedAtScale
from .rules import EXPLICIT_LIMIT, VotingRule, minimal_table

DEFAULT_EPSILON = Fraction(1, 10**9)


@dataclass(frozen=True)
class IndexId:
    name: str
    eps: Fraction | None = None

    def __post_init__(self):
        if self.name not in INDEX_NAMES:
            raise UnknownIndex(f"unknown index {self.name!r}; choose from {', '.join(INDEX_NAMES)}")
        if self.name == "veto_epsilon":
            eps = DEFAULT_EPSILON if self.eps is None else Fraction(self.eps)
            if eps <= 0:
                raise UnknownIndex("veto_epsilon needs a positive epsilon")
            object.__setattr__(self, "eps", eps)
        elif self.eps is not None:
            raise UnknownIndex(f"{self.name} takes no parameter")

    @classmethod
    def parse(cls, token) -> "IndexId":
        if isinstance(token, IndexId):
            return token
        name, _, param = str(token).partition(":")
        return cls(name, Fraction(param) if param else None)

    def __str__(self):
        if self.name == "veto_epsilon":
            return f"veto_epsilon:{self.eps}"
        return self.name


@dataclass(frozen=True)
class PowerVector:
    """Exact power per player; ``values[i - 1]`` belongs to player ``i``."""

    values: tuple

    def __getitem__(self, player: int) -> Fraction:
        if player < 1:
            raise IndexError(f"players are numbered from 1, got {player}")
        return self.values[player - 1]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.values) + ")"


# -- batch primitives -------------------------------------------------------

@lru_cache(maxsize=None)
def _membership(n: int) -> np.ndarray:
    """``has[i, T]``: player ``i + 1`` in mask ``T``."""
    idx = np.arange(1 << n, dtype=np.int64)
    return np.stack([((idx >> i) & 1).astype(bool) for i in range(n)])


def _critical(W: np.ndarray, n: int) -> np.ndarray:
    """``crit[r, i, T]``: ``T`` wins, contains ``i`` and loses without it."""
    idx = np.arange(1 << n, dtype=np.int64)
    has = _membership(n)
    out = np.empty((W.shape[0], n, 1 << n), dtype=bool)
    for i in range(n):
        out[:, i, :] = W & ~W[:, idx ^ (1 << i)] & has[i]
    return out


def _fractions(num: np.ndarray, den) -> list:
    num = num.tolist()
    if np.ndim(den) == 0:
        den = [int(den)] * len(num)
    else:
        den = np.asarray(den).tolist()
    return [tuple(Fraction(x, d) for x in row) for row, d in zip(num, den)]


def _normalized(num: np.ndarray) -> list:
    """Row-wise ``num / num.sum()`` on integer raw measures."""
    return _fractions(num, num.sum(axis=1))


def _normalized_fractions(raw: list) -> list:
    out = []
    for row in raw:
        s = sum(row, Fraction(0))
        out.append(tuple(x / s for x in row))
    return out


def _swing(W, n):
    mt = minimal_table(W, n)
    return (mt.astype(np.int64) @ _membership(n).T.astype(np.int64)) > 0


def shapley_shubik(W, n):
    sizes = popcounts(n)
    weights = np.array([math.factorial(s - 1) * math.factorial(n - s) if s else 0
                        for s in sizes], dtype=np.int64)
    num = _critical(W, n).astype(np.int64) @ weights
    return _fractions(num, math.factorial(n))


def banzhaf(W, n):
    eta = _critical(W, n).sum(axis=2)
    return _normalized(eta)


def _rae_raw_measure(W, n):
    eta = _critical(W, n).sum(axis=2)
    return [tuple(Fraction((1 << (n - 1)) + int(e), 1 << n) for e in row) for row in eta]


def rae_raw(W, n):
    return _normalized_fractions(_rae_raw_measure(W, n))


def rae_nullzero(W, n):
    raw = _rae_raw_measure(W, n)
    swing = _swing(W, n)
    return _normalized_fractions(
        [tuple(x if s else Fraction(0) for x, s in zip(row, srow)) for row, srow in zip(raw, swing)])


def coleman_initiate(W, n):
    eta = _critical(W, n).sum(axis=2)
    losing = (1 << n) - W.sum(axis=1)
    raw = [tuple(Fraction(int(e), int(l)) for e in row) for row, l in zip(eta, losing)]
    return _normalized_fractions(raw)


def coleman_prevent(W, n):
    eta = _critical(W, n).sum(axis=2)
    winning = W.sum(axis=1)
    raw = [tuple(Fraction(int(e), int(w)) for e in row) for row, w in zip(eta, winning)]
    return _normalized_fractions(raw)


def deegan_packel(W, n):
    mt = minimal_table(W, n)
    lcm = math.lcm(*range(1, n + 1))
    share = np.array([lcm // s if s else 0 for s in popcounts(n)], dtype=np.int64)
    num = np.stack([(mt & _membership(n)[i]).astype(np.int64) @ share for i in range(n)], axis=1)
    return _fractions(num, lcm * mt.sum(axis=1))


def johnston(W, n):
    crit = _critical(W, n)
    cnt = crit.sum(axis=1)                               # (m, 2^n) swing-set sizes
    lcm = math.lcm(*range(1, n + 1))
    share = np.where(cnt > 0, lcm // np.maximum(cnt, 1), 0)
    num = (crit * share[:, None, :]).sum(axis=2)
    return _normalized(num)


def _nevison_raw_measure(W, n):
    counts = (W[:, None, :] & _membership(n)[None]).sum(axis=2)
    return [tuple(Fraction(int(c), 1 << (n - 1)) for c in row) for row in counts]


def nevison_raw(W, n):
    return _normalized_fractions(_nevison_raw_measure(W, n))


def nevison_nullzero(W, n):
    raw = _nevison_raw_measure(W, n)
    swing = _swing(W, n)
    return _normalized_fractions(
        [tuple(x if s else Fraction(0) for x, s in zip(row, srow)) for row, srow in zip(raw, swing)])


def public_good(W, n):
    mt = minimal_table(W, n)
    counts = (mt[:, None, :] & _membership(n)[None]).sum(axis=2)
    return _normalized(counts)


def public_help(W, n):
    counts = (W[:, None, :] & _membership(n)[None]).sum(axis=2)
    return _normalized(counts)


def desirability(W: np.ndarray, n: int) -> np.ndarray:
    """``ge[r, i, j]``: ``v(T + i) >= v(T + j)`` for every ``T`` avoiding both."""
    idx = np.arange(1 << n, dtype=np.int64)
    ge = np.ones((W.shape[0], n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            bi, bj = 1 << i, 1 << j
            base = idx[(idx & (bi | bj)) == 0]
            ge[:, i, j] = np.all(W[:, base | bi] >= W[:, base | bj], axis=1)
    return ge


def shift_minimal(W: np.ndarray, n: int) -> np.ndarray:
    """Minimal winning coalitions from which no member can be traded for a
    strictly less desirable outsider while still winning."""
    ge = desirability(W, n)
    strict = ge & ~np.transpose(ge, (0, 2, 1))
    mt = minimal_table(W, n)
    idx = np.arange(1 << n, dtype=np.int64)
    has = _membership(n)
    shiftable = np.zeros_like(mt)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            swapped = (idx & ~(1 << i)) | (1 << j)
            cand = has[i] & ~has[j]
            shiftable |= strict[:, i, j][:, None] & cand[None] & W[:, swapped]
    return mt & ~shiftable


def shift(W, n):
    sm = shift_minimal(W, n)
    counts = (sm[:, None, :] & _membership(n)[None]).sum(axis=2)
    return _normalized(counts)


def _player_sets_rows(W, n):
    mt = minimal_table(W, n)
    inc = mt.astype(np.int64) @ _membership(n).T.astype(np.int64)
    k = mt.sum(axis=1)
    return inc > 0, inc == k[:, None]


def equal_swing(W, n):
    swing, _ = _player_sets_rows(W, n)
    return [_equal_swing_row(s) for s in swing]


def _equal_swing_row(swing) -> tuple:
    s = int(np.sum(swing))
    return tuple(Fraction(1, s) if x else Fraction(0) for x in swing)


def _veto_epsilon_row(swing, veto, eps) -> tuple:
    if not np.any(veto):
        return _equal_swing_row(swing)
    s = int(np.sum(swing))
    small = Fraction(eps) / s**s
    non_veto = int(np.sum(swing & ~veto))
    big = (1 - non_veto * small) / int(np.sum(veto))
    if big < 0:
        raise ValueError(f"epsilon {eps} leaves the veto players a negative share")
    return tuple(big if vt else small if sw else Fraction(0) for sw, vt in zip(swing, veto))


def veto_epsilon_rows(W, n, eps=DEFAULT_EPSILON):
    swing, veto = _player_sets_rows(W, n)
    return [_veto_epsilon_row(s, v, eps) for s, v in zip(swing, veto)]


_BATCH: dict = {
    "shapley_shubik": shapley_shubik,
    "banzhaf": banzhaf,
    "rae_raw": rae_raw,
    "rae_nullzero": rae_nullzero,
    "coleman_initiate": coleman_initiate,
    "coleman_prevent": coleman_prevent,
    "deegan_packel": deegan_packel,
    "johnston": johnston,
    "nevison_raw": nevison_raw,
    "nevison_nullzero": nevison_nullzero,
    "public_good": public_good,
    "public_help": public_help,
    "shift": shift,
    "equal_swing": equal_swing,
    "veto_epsilon": None,
}

INDEX_NAMES = tuple(_BATCH)


def index_matrix(index, tables: np.ndarray, n: int) -> list:
    """Power vectors (as tuples of Fractions) for every row of ``tables``."""
    index = IndexId.parse(index)
    W = np.asarray(tables, dtype=bool)
    if W.ndim == 1:
        W = W[None]
    if index.name == "veto_epsilon":
        return veto_epsilon_rows(W, n, index.eps)
    return _BATCH[index.name](W, n)


def compute_index(index, v: VotingRule) -> PowerVector:
    index = IndexId.parse(index)
    if index.name in ("equal_swing", "veto_epsilon"):
        if index.name == "equal_swing":
            return equal_swing_index(v)
        return veto_epsilon(v, index.eps)
    if v.n > EXPLICIT_LIMIT:
        raise UnsupportedAtScale(f"{index.name} enumerates coalitions; n={v.n} is too large")
    return PowerVector(index_matrix(index, v.table(), v.n)[0])


def _set_rows(v: VotingRule):
    ps = v.player_sets()
    players = range(1, v.n + 1)
    return (np.array([p in ps.swing for p in players]),
            np.array([p in ps.veto for p in players]))


def equal_swing_index(v: VotingRule) -> PowerVector:
    """``1/|S|`` for every swing player, zero for null players."""
    swing, _ = _set_rows(v)
    return PowerVector(_equal_swing_row(swing))


def veto_epsilon(v: VotingRule, eps=DEFAULT_EPSILON) -> PowerVector:
    """Equal-swing on non-veto rules.  On veto rules each non-veto swing player
    gets ``eps / |S|**|S|`` and the veto players split the rest evenly."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    swing, veto = _set_rows(v)
    return PowerVector(_veto_epsilon_row(swing, veto, eps))


IndexFunction = Callable[[VotingRule], Sequence[Fraction]]
