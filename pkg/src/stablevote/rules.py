"""Voting rules: monotone simple games with v(empty)=0 and v(N)=1.

Four representations share the :class:`VotingRule` interface:

* :class:`ExplicitRule` -- a truth table over all ``2**n`` coalitions
  (``n <= 20``), indexed by coalition bitmask.
* :class:`WeightedRule` -- quota and nonnegative integer weights.
* :class:`QuotaRule` -- a head-count quota plus a set of required members.
* :class:`IntersectionRule` -- pointwise minimum of rules on one player set.

Symbolic forms expand to a truth table on demand when ``n <= 20`` and
answer player-set queries analytically for any ``n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, NamedTuple

import numpy as np

from .coalitions import (
    Permutation,
    all_mask_maps,
    coalition_order,
    coalition_rank,
    fmt_coalition,
    full_mask,
    members,
    popcounts,
    to_mask,
)
from .errors import (
    EmptyFamily,
    InfeasibleQuota,
    InvalidRule,
    MismatchedPlayerSets,
    NotAntichain,
    OutOfRange,
    QuotaUnreachable,
    TooLarge,
    TooLargeForEnumeration,
    UnsupportedAtScale,
)

EXPLICIT_LIMIT = 20


# -- truth-table primitives (operate along the last axis) -------------------

def _split(arr: np.ndarray, n: int, i: int) -> np.ndarray:
    """View with axis -2 selecting whether player ``i + 1`` is absent/present."""
    return arr.reshape(arr.shape[:-1] + (1 << (n - i - 1), 2, 1 << i))


def upclose(table: np.ndarray, n: int) -> np.ndarray:
    out = np.array(table, dtype=bool, copy=True)
    for i in range(n):
        v = _split(out, n, i)
        v[..., 1, :] |= v[..., 0, :]
    return out


def is_monotone(table: np.ndarray, n: int) -> bool:
    for i in range(n):
        v = _split(table, n, i)
        if np.any(v[..., 0, :] & ~v[..., 1, :]):
            return False
    return True


def minimal_table(table: np.ndarray, n: int) -> np.ndarray:
    """Boolean table of minimal winning coalitions."""
    out = np.array(table, dtype=bool, copy=True)
    for i in range(n):
        o = _split(out, n, i)
        t = _split(table, n, i)
        o[..., 1, :] &= ~t[..., 0, :]
    return out


def order_key(table: np.ndarray, n: int) -> int:
    """Truth table read as a big-endian integer over (size, lex) coalition order."""
    bits = np.asarray(table, dtype=bool)[coalition_order(n)]
    return int.from_bytes(np.packbits(bits).tobytes(), "big") >> (-len(bits) % 8)


def _check_n(n: int) -> int:
    n = int(n)
    if n < 1:
        raise OutOfRange(f"player count must be positive, got {n}")
    return n


def _require_explicit(n: int, what: str) -> None:
    if n > EXPLICIT_LIMIT:
        raise TooLargeForEnumeration(
            f"{what} needs a truth table; n={n} exceeds {EXPLICIT_LIMIT}"
        )


class PlayerSets(NamedTuple):
    swing: frozenset
    null_set: frozenset
    veto: frozenset
    oligarchic: frozenset


class RuleClass(NamedTuple):
    is_veto: bool
    is_oligarchic: bool


class VotingRule:
    """Common interface.  Subclasses provide ``n`` and ``_wins``."""

    n: int

    def _wins(self, mask: int) -> bool:
        raise NotImplementedError

    def _build_table(self) -> np.ndarray:
        idx = np.arange(1 << self.n, dtype=np.int64)
        return np.fromiter((self._wins(int(m)) for m in idx), dtype=bool, count=idx.size)

    def wins(self, coalition: Iterable[int] | int) -> bool:
        return bool(self._wins(to_mask(coalition, self.n)))

    __call__ = wins

    @cached_property
    def _table(self) -> np.ndarray:
        _require_explicit(self.n, "truth table expansion")
        t = self._build_table()
        t.setflags(write=False)
        return t

    def table(self) -> np.ndarray:
        """Read-only boolean array, ``table()[mask]`` is the worth of ``mask``."""
        return self._table

    def to_explicit(self) -> "ExplicitRule":
        return ExplicitRule(self.n, self.table())

    @cached_property
    def _mwc_masks(self) -> tuple:
        _require_explicit(self.n, "minimal winning coalition listing")
        mt = minimal_table(self.table(), self.n)
        masks = np.nonzero(mt)[0]
        masks = masks[np.argsort(coalition_rank(self.n)[masks], kind="stable")]
        return tuple(int(m) for m in masks)

    def mwc_masks(self) -> tuple:
        """Minimal winning coalitions as masks, in (size, lex) order."""
        return self._mwc_masks

    def minimal_winning(self) -> frozenset:
        return frozenset(members(m) for m in self._mwc_masks)

    def winning_coalitions(self) -> frozenset:
        return frozenset(members(int(m)) for m in np.nonzero(self.table())[0])

    def veto_players(self) -> frozenset:
        """Players whose absence makes even the grand coalition lose."""
        full = full_mask(self.n)
        return frozenset(i for i in range(1, self.n + 1)
                         if not self._wins(full & ~(1 << (i - 1))))

    def oligarchic_players(self) -> frozenset:
        # exactly one MWC iff the veto set itself wins
        veto = self.veto_players()
        if veto and self._wins(to_mask(veto, self.n)):
            return veto
        return frozenset()

    def _swing_mask(self) -> int:
        return reduce(lambda a, b: a | b, self.mwc_masks(), 0)

    def player_sets(self) -> PlayerSets:
        swing = members(self._swing_mask())
        everyone = frozenset(range(1, self.n + 1))
        return PlayerSets(swing, everyone - swing,
                          self.veto_players(), self.oligarchic_players())

    # equality is semantic for n <= 20 and structural above
    def _symbolic_key(self):
        return (type(self).__name__, id(self))

    @cached_property
    def _eq_key(self):
        if self.n <= EXPLICIT_LIMIT:
            return ("table", self.n, self.table().tobytes())
        return self._symbolic_key()

    def __eq__(self, other):
        if not isinstance(other, VotingRule):
            return NotImplemented
        return self.n == other.n and self._eq_key == other._eq_key

    def __hash__(self):
        return hash(self._eq_key)

    def mwc_string(self) -> str:
        body = "|".join(",".join(map(str, sorted(members(m)))) for m in self.mwc_masks())
        return f"mwc@{self.n}:{{{body}}}"


@dataclass(frozen=True, eq=False, repr=False)
class ExplicitRule(VotingRule):
    n: int
    bits: np.ndarray = field(compare=False)

    def __post_init__(self):
        n = _check_n(self.n)
        _require_explicit(n, "explicit rule")
        t = np.array(self.bits, dtype=bool).reshape(-1)
        if t.size != 1 << n:
            raise InvalidRule(f"truth table has {t.size} entries, expected {1 << n}")
        if t[0]:
            raise InvalidRule("empty coalition must lose")
        if not t[-1]:
            raise InvalidRule("grand coalition must win")
        if not is_monotone(t, n):
            raise InvalidRule("truth table is not monotone")
        t.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", t)

    def _build_table(self):
        return self.bits

    def _wins(self, mask):
        return bool(self.bits[mask])

    def __repr__(self):
        return f"ExplicitRule({self.mwc_string()})"


@dataclass(frozen=True, eq=False)
class WeightedRule(VotingRule):
    quota: int
    weights: tuple

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if not w:
            raise OutOfRange("weighted rule needs at least one player")
        if any(x < 0 for x in w):
            raise InvalidRule("weights must be nonnegative")
        q = int(self.quota)
        if q <= 0:
            raise InvalidRule("quota must be positive (the empty coalition must lose)")
        if q > sum(w):
            raise QuotaUnreachable(f"quota {q} exceeds total weight {sum(w)}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "quota", q)

    @property
    def n(self) -> int:
        return len(self.weights)

    def _wins(self, mask):
        return sum(w for i, w in enumerate(self.weights) if mask >> i & 1) >= self.quota

    def _build_table(self):
        sums = np.zeros(1, dtype=np.int64)
        for w in self.weights:
            sums = np.concatenate([sums, sums + w])
        return sums >= self.quota

    def veto_players(self):
        total = sum(self.weights)
        return frozenset(i + 1 for i, w in enumerate(self.weights) if total - w < self.quota)

    def _swing_mask(self):
        q = self.quota
        cap = (1 << q) - 1
        swing_weights = set()
        for w in set(self.weights):
            if w == 0:
                continue
            reach = 1
            skipped = False
            for x in self.weights:
                if x == w and not skipped:
                    skipped = True
                    continue
                reach = (reach | (reach << x)) & cap
            lo = max(q - w, 0)
            if reach >> lo:
                swing_weights.add(w)
        mask = 0
        for i, w in enumerate(self.weights):
            if w in swing_weights:
                mask |= 1 << i
        return mask

    def as_quota_rule(self):
        ws = set(self.weights)
        if len(ws) == 1:
            w = ws.pop()
            return QuotaRule(self.n, -(-self.quota // w), frozenset())
        return None

    def _symbolic_key(self):
        qr = self.as_quota_rule()
        if qr is not None:
            return qr._symbolic_key()
        return ("wt", self.quota, self.weights)


@dataclass(frozen=True, eq=False)
class QuotaRule(VotingRule):
    """Wins iff at least ``count_quota`` members, all of ``required`` among them."""

    n: int
    count_quota: int
    required: frozenset = frozenset()

    def __post_init__(self):
        n = _check_n(self.n)
        k = int(self.count_quota)
        req = frozenset(int(p) for p in self.required)
        if not 0 < k <= n:
            raise InfeasibleQuota(f"count quota {k} outside 1..{n}")
        if any(not 1 <= p <= n for p in req):
            raise InfeasibleQuota(f"required players {sorted(req)} outside 1..{n}")
        if len(req) > k:
            raise InfeasibleQuota(
                f"{len(req)} required players exceed the count quota {k}"
            )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "count_quota", k)
        object.__setattr__(self, "required", req)

    @cached_property
    def _req_mask(self):
        return to_mask(self.required, self.n)

    def _wins(self, mask):
        return mask.bit_count() >= self.count_quota and mask & self._req_mask == self._req_mask

    def _build_table(self):
        idx = np.arange(1 << self.n, dtype=np.int64)
        r = self._req_mask
        return (popcounts(self.n) >= self.count_quota) & ((idx & r) == r)

    def _single_mwc(self):
        if self.count_quota == self.n:
            return frozenset(range(1, self.n + 1))
        if self.count_quota == len(self.required):
            return self.required
        return None

    def player_sets(self):
        everyone = frozenset(range(1, self.n + 1))
        only = self._single_mwc()
        if only is not None:
            return PlayerSets(only, everyone - only, only, only)
        return PlayerSets(everyone, frozenset(), self.required, frozenset())

    def veto_players(self):
        return self.player_sets().veto

    def oligarchic_players(self):
        return self.player_sets().oligarchic

    def _symbolic_key(self):
        only = self._single_mwc()
        if only is not None:
            return ("oligarchy", self.n, only)
        return ("qr", self.n, self.count_quota, self.required)


@dataclass(frozen=True, eq=False)
class IntersectionRule(VotingRule):
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise EmptyFamily("intersection needs at least one component")
        ns = {c.n for c in comps}
        if len(ns) != 1:
            raise MismatchedPlayerSets(f"components have player counts {sorted(ns)}")
        object.__setattr__(self, "components", comps)

    @property
    def n(self):
        return self.components[0].n

    def _wins(self, mask):
        return all(c._wins(mask) for c in self.components)

    def _build_table(self):
        out = np.ones(1 << self.n, dtype=bool)
        for c in self.components:
            out &= c.table()
        return out

    def simplified(self):
        """Equivalent :class:`QuotaRule` when every component is head-count based."""
        qrs = []
        for c in self.components:
            if isinstance(c, IntersectionRule):
                c = c.simplified()
            elif isinstance(c, WeightedRule):
                c = c.as_quota_rule()
            if not isinstance(c, QuotaRule):
                return None
            qrs.append(c)
        req = frozenset().union(*(q.required for q in qrs))
        k = max(max(q.count_quota for q in qrs), len(req))
        return QuotaRule(self.n, k, req)

    def player_sets(self):
        if self.n <= EXPLICIT_LIMIT:
            return super().player_sets()
        simple = self.simplified()
        if simple is None:
            raise UnsupportedAtScale(
                f"swing players of a mixed intersection on {self.n} players"
            )
        return simple.player_sets()

    def _symbolic_key(self):
        simple = self.simplified()
        if simple is not None:
            return simple._symbolic_key()
        return ("and",) + tuple(c._eq_key for c in self.components)


# -- constructors -----------------------------------------------------------

def from_table(n: int, table) -> ExplicitRule:
    return ExplicitRule(n, np.asarray(table, dtype=bool))


def normalize_antichain(mwcs: Iterable[Iterable[int]]) -> list:
    """Drop every coalition that strictly contains another one."""
    sets = sorted({frozenset(c) for c in mwcs}, key=lambda c: (len(c), sorted(c)))
    out = []
    for c in sets:
        if not any(o <= c for o in out):
            out.append(c)
    return out


def from_minimal_winning(n: int, mwcs: Iterable[Iterable[int]]) -> ExplicitRule:
    n = _check_n(n)
    _require_explicit(n, "explicit rule")
    family = [frozenset(c) for c in mwcs]
    if not family:
        raise EmptyFamily("no minimal winning coalitions given")
    masks = []
    for c in family:
        if not c:
            raise EmptyFamily("the empty coalition cannot be winning")
        masks.append(to_mask(c, n))
    uniq = sorted(set(masks), key=lambda m: (m.bit_count(), sorted(members(m))))
    for a, b in itertools.combinations(uniq, 2):
        if a & b == a:
            raise NotAntichain(members(a), members(b))
    t = np.zeros(1 << n, dtype=bool)
    t[uniq] = True
    return ExplicitRule(n, upclose(t, n))


def from_weighted(quota: int, weights: Iterable[int]) -> WeightedRule:
    """``[quota; weights]``.  Expands to a truth table on demand for ``n <= 20``."""
    return WeightedRule(quota, tuple(weights))


def quota_with_required(n: int, count_quota: int, required: Iterable[int] = ()) -> QuotaRule:
    return QuotaRule(n, count_quota, frozenset(required))


def count_quota(n: int, k: int) -> QuotaRule:
    return QuotaRule(n, k, frozenset())


def oligarchy(n: int, coalition: Iterable[int]) -> ExplicitRule:
    return from_minimal_winning(n, [coalition])


def dictator(n: int, player: int) -> ExplicitRule:
    return oligarchy(n, [player])


def unanimity(n: int) -> ExplicitRule:
    return oligarchy(n, range(1, n + 1))


def intersection(components: Iterable[VotingRule]) -> VotingRule:
    comps = tuple(components)
    if len(comps) == 1:
        if not isinstance(comps[0], VotingRule):
            raise InvalidRule("intersection components must be voting rules")
        return comps[0]
    return IntersectionRule(comps)


# -- structural queries -----------------------------------------------------

def minimal_winning(v: VotingRule) -> frozenset:
    return v.minimal_winning()


def player_sets(v: VotingRule) -> PlayerSets:
    return v.player_sets()


def classify(v: VotingRule) -> RuleClass:
    return RuleClass(bool(v.veto_players()), bool(v.oligarchic_players()))


def apply_permutation(v: VotingRule, p: Permutation) -> VotingRule:
    """The relabelled rule ``u`` with ``u(T) = v(p(T))``.

    Player ``i`` of ``u`` plays the role that player ``p(i)`` has in ``v``.
    """
    if p.n != v.n:
        raise MismatchedPlayerSets(f"permutation on {p.n} players, rule on {v.n}")
    if v.n <= EXPLICIT_LIMIT:
        return ExplicitRule(v.n, v.table()[p.mask_map()])
    if isinstance(v, QuotaRule):
        return QuotaRule(v.n, v.count_quota, p.inverse().image(v.required))
    if isinstance(v, WeightedRule):
        return WeightedRule(v.quota, tuple(v.weights[p(i) - 1] for i in range(1, v.n + 1)))
    raise TooLarge(f"cannot relabel a {type(v).__name__} on {v.n} players")


def canonical_form(v: VotingRule) -> ExplicitRule:
    """Orbit representative with the smallest :func:`order_key`."""
    if v.n > 7:
        raise TooLarge(f"canonical form scans n! relabellings; n={v.n} exceeds 7")
    n = v.n
    images = v.table()[all_mask_maps(n)]
    packed = np.packbits(images[:, coalition_order(n)], axis=1)
    best = min(range(len(packed)), key=lambda k: packed[k].tobytes())
    return ExplicitRule(n, images[best])


def _automorphism(table: np.ndarray, images: tuple) -> bool:
    return bool(np.array_equal(table[Permutation(images).mask_map()], table))


def symmetric_coalitions(v: VotingRule) -> frozenset:
    """Coalitions ``T`` such that every permutation of ``T`` extends, by some
    permutation of the complement, to a relabelling that fixes ``v``.

    Permutations of ``T`` form a group generated by adjacent transpositions and
    the extendable ones form a subgroup, so testing the generators suffices.
    """
    n = v.n
    if n > 10:
        raise TooLarge(f"symmetric coalition scan limited to n <= 10, got {n}")
    t = v.table()
    sizes = popcounts(n)
    sig = []
    for i in range(n):
        has = (np.arange(1 << n) >> i) & 1 == 1
        sig.append(tuple(np.bincount(sizes[has & t], minlength=n + 1)))

    cache = {}

    def swap_extends(a: int, b: int, rest_mask: int) -> bool:
        key = (a, b, rest_mask)
        if key in cache:
            return cache[key]
        ok = False
        if sig[a] == sig[b]:
            comp = [i for i in range(n) if rest_mask >> i & 1]
            classes = {}
            for i in comp:
                classes.setdefault(sig[i], []).append(i)
            groups = list(classes.values())
            for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
                imgs = list(range(1, n + 1))
                imgs[a], imgs[b] = b + 1, a + 1
                for g, perm in zip(groups, choice):
                    for src, dst in zip(g, perm):
                        imgs[src] = dst + 1
                if _automorphism(t, tuple(imgs)):
                    ok = True
                    break
        cache[key] = ok
        return ok

    full = full_mask(n)
    out = []
    for mask in range(1 << n):
        mem = [i for i in range(n) if mask >> i & 1]
        rest = full & ~mask
        if all(swap_extends(a, b, rest) for a, b in zip(mem, mem[1:])):
            out.append(members(mask))
    return frozenset(out)


def describe(v: VotingRule) -> str:
    ps = v.player_sets()
    return (f"swing={fmt_coalition(ps.swing)} null={fmt_coalition(ps.null_set)} "
            f"veto={fmt_coalition(ps.veto)} oligarchic={fmt_coalition(ps.oligarchic)}")
