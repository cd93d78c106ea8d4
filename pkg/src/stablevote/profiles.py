"""Index-induced preference profiles and the four axiom checkers.

A profile ranks every rule on ``n`` players for every player by exact power
value.  The value table is materialized once and turned into an integer rank
table (``ranks[r, i]``) with identical order, which the kernels consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .coalitions import Permutation, full_mask, members, to_mask
from .enumeration import RuleSpace, rule_space
from .errors import EmptyCoalition, TooLarge
from .indices import INDEX_NAMES, IndexId, PowerVector, compute_index, index_matrix
from .kernels import first_pareto_pair
from .rules import VotingRule, apply_permutation

AXIOMS = ("non_dominance", "anonymity", "null_player", "swing_player")


class PreferenceProfile:
    """Weak orderings over all rules on ``n`` players induced by a power index.

    ``v R_i v2`` iff ``rho_i(v) >= rho_i(v2)``.
    """

    def __init__(self, index, n: int, *, function: Optional[Callable] = None, name: str = None):
        self.n = int(n)
        if function is None:
            self.index = IndexId.parse(index)
            self.name = str(self.index)
            self._fn = None
        else:
            self.index = None
            self.name = name or getattr(function, "__name__", "custom")
            self._fn = function
        self._extra = {}

    @classmethod
    def from_function(cls, function: Callable, n: int, name: str = None) -> "PreferenceProfile":
        """Profile from an arbitrary ``rule -> sequence of Fractions`` map (test fixtures)."""
        return cls(None, n, function=function, name=name)

    def __repr__(self):
        return f"PreferenceProfile({self.name}, n={self.n})"

    @cached_property
    def space(self) -> RuleSpace:
        return rule_space(self.n)

    @cached_property
    def values(self) -> list:
        """Power tuples for every rule of :attr:`space`, in enumeration order."""
        if self._fn is None:
            return index_matrix(self.index, self.space.tables, self.n)
        return [tuple(Fraction(x) for x in self._fn(r)) for r in self.space.rules]

    @cached_property
    def ranks(self) -> np.ndarray:
        distinct = sorted(set(x for row in self.values for x in row))
        pos = {x: k for k, x in enumerate(distinct)}
        r = np.array([[pos[x] for x in row] for row in self.values], dtype=np.int64)
        r.setflags(write=False)
        return r

    def value(self, v: VotingRule) -> PowerVector:
        if v.n != self.n:
            raise ValueError(f"rule on {v.n} players, profile on {self.n}")
        if self.n <= 5:
            try:
                return PowerVector(self.values[self.space.index_of(v)])
            except KeyError:
                pass
        if self._fn is None:
            return compute_index(self.index, v)
        return PowerVector(tuple(Fraction(x) for x in self._fn(v)))

    def weakly_prefers(self, i: int, v: VotingRule, v2: VotingRule) -> bool:
        return self.value(v)[i] >= self.value(v2)[i]

    def strictly_prefers(self, i: int, v: VotingRule, v2: VotingRule) -> bool:
        return self.value(v)[i] > self.value(v2)[i]

    def indifferent(self, i: int, v: VotingRule, v2: VotingRule) -> bool:
        return self.value(v)[i] == self.value(v2)[i]


def _coalition_players(t, n) -> list:
    mask = to_mask(t, n)
    if mask == 0:
        raise EmptyCoalition("dominance needs a nonempty coalition")
    return sorted(members(mask))


def pareto_dominates(p: PreferenceProfile, v: VotingRule, v2: VotingRule, t) -> bool:
    """Everyone in ``t`` weakly prefers ``v`` to ``v2``, someone strictly."""
    players = _coalition_players(t, p.n)
    a, b = p.value(v), p.value(v2)
    return all(a[i] >= b[i] for i in players) and any(a[i] > b[i] for i in players)


def strong_pareto_dominates(p: PreferenceProfile, v: VotingRule, v2: VotingRule, t) -> bool:
    players = _coalition_players(t, p.n)
    a, b = p.value(v), p.value(v2)
    return all(a[i] > b[i] for i in players)


# -- axiom checks -----------------------------------------------------------

@dataclass(frozen=True)
class AxiomWitness:
    """A violating instance.  Fields not used by an axiom are ``None``."""

    axiom: str
    rule: VotingRule
    other: VotingRule
    player: Optional[int] = None
    permutation: Optional[Permutation] = None
    coalition: Optional[frozenset] = None

    def to_dict(self) -> dict:
        d = {"axiom": self.axiom, "rule": self.rule.mwc_string(),
             "other": self.other.mwc_string()}
        if self.player is not None:
            d["player"] = self.player
        if self.permutation is not None:
            d["permutation"] = list(self.permutation.images)
        if self.coalition is not None:
            d["coalition"] = sorted(self.coalition)
        return d


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    holds: bool
    witness: Optional[AxiomWitness] = None
    note: str = ""

    @property
    def verdict(self) -> str:
        return "yes" if self.holds else "no"

    def to_dict(self) -> dict:
        d = {"axiom": self.axiom, "holds": self.holds}
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class AxiomReport:
    index: str
    n: int
    results: list = field(default_factory=list)

    def __getitem__(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.results)

    def verdicts(self) -> tuple:
        return tuple(self[a].verdict for a in AXIOMS)

    def to_dict(self) -> dict:
        return {"index": self.index, "n": self.n,
                "results": [r.to_dict() for r in self.results]}


def _guard(p: PreferenceProfile, limit: int = 5):
    if p.n > limit:
        raise TooLarge(f"exhaustive axiom check limited to n <= {limit}, got {p.n}")


def check_non_dominance(p: PreferenceProfile) -> AxiomResult:
    _guard(p)
    a, b = first_pareto_pair(p.ranks)
    if a < 0:
        return AxiomResult("non_dominance", True)
    rules = p.space.rules
    w = AxiomWitness("non_dominance", rules[a], rules[b],
                     coalition=frozenset(range(1, p.n + 1)))
    return AxiomResult("non_dominance", False, w)


def _dense(col: np.ndarray) -> np.ndarray:
    return np.unique(col, return_inverse=True)[1]


def check_anonymity(p: PreferenceProfile, mode: str = "literal") -> AxiomResult:
    """Relabelling the players must relabel their preferences.

    For every permutation ``pi`` the rule ``pi.v`` gives player ``pi(i)`` the
    position ``i`` holds in ``v``, i.e. ``pi.v = apply_permutation(v, pi^-1)``.
    ``literal`` compares the induced weak orders pair by pair (done exactly
    through dense ranks); ``value_identity`` checks the sufficient condition
    ``rho_{pi(i)}(pi.v) == rho_i(v)``.
    """
    _guard(p)
    sp = p.space
    ranks = p.ranks
    action = sp.permutation_action
    for k, perm in enumerate(sp.permutations):
        inv_k = sp.permutations.index(perm.inverse())
        moved = action[inv_k]                      # r -> index of pi.r
        for i in range(1, p.n + 1):
            j = perm(i)
            x = ranks[:, i - 1]
            y = ranks[moved, j - 1]
            if mode == "value_identity":
                bad = np.nonzero(x != y)[0]
                if bad.size:
                    r = int(bad[0])
                    w = AxiomWitness("anonymity", sp.rules[r], sp.rules[int(moved[r])],
                                     player=i, permutation=perm)
                    return AxiomResult("anonymity", False, w, note="value identity")
                continue
            if np.array_equal(_dense(x), _dense(y)):
                continue
            gx = x[:, None] >= x[None, :]
            gy = y[:, None] >= y[None, :]
            a, b = np.argwhere(gx != gy)[0]
            w = AxiomWitness("anonymity", sp.rules[int(a)], sp.rules[int(b)],
                             player=i, permutation=perm)
            return AxiomResult("anonymity", False, w)
    note = "value identity" if mode == "value_identity" else ""
    return AxiomResult("anonymity", True, note=note)


def check_null_player(p: PreferenceProfile) -> AxiomResult:
    _guard(p)
    sp, ranks = p.space, p.ranks
    best = None
    for i in range(p.n):
        rows = np.nonzero(sp.null[:, i])[0]
        if rows.size == 0:
            continue
        col = ranks[rows, i]
        if np.all(col == col[0]):
            continue
        v = int(rows[0])
        v2 = int(rows[np.argmax(col != col[0])])
        cand = (v, v2, i)
        if best is None or cand < best:
            best = cand
    if best is None:
        return AxiomResult("null_player", True)
    v, v2, i = best
    w = AxiomWitness("null_player", sp.rules[v], sp.rules[v2], player=i + 1)
    return AxiomResult("null_player", False, w)


def check_swing_player(p: PreferenceProfile) -> AxiomResult:
    _guard(p)
    sp, ranks = p.space, p.ranks
    best = None
    for i in range(p.n):
        sw = np.nonzero(sp.swing[:, i])[0]
        nl = np.nonzero(sp.null[:, i])[0]
        if sw.size == 0 or nl.size == 0:
            continue
        top_null = ranks[nl, i].max()
        bad = sw[ranks[sw, i] <= top_null]
        if bad.size == 0:
            continue
        v = int(bad[0])
        v2 = int(nl[np.argmax(ranks[nl, i] >= ranks[v, i])])
        cand = (v, v2, i)
        if best is None or cand < best:
            best = cand
    if best is None:
        return AxiomResult("swing_player", True)
    v, v2, i = best
    w = AxiomWitness("swing_player", sp.rules[v], sp.rules[v2], player=i + 1)
    return AxiomResult("swing_player", False, w)


def axiom_report(index, n: int, anonymity_mode: str = "literal") -> AxiomReport:
    p = index if isinstance(index, PreferenceProfile) else PreferenceProfile(index, n)
    rep = AxiomReport(p.name, p.n)
    rep.results.append(check_non_dominance(p))
    rep.results.append(check_anonymity(p, anonymity_mode))
    rep.results.append(check_null_player(p))
    rep.results.append(check_swing_player(p))
    return rep


def recheck_witness(p: PreferenceProfile, w: AxiomWitness) -> bool:
    """Re-evaluate a witness from scratch; True if it is a genuine violation."""
    a, b = p.value(w.rule), p.value(w.other)
    if w.axiom == "non_dominance":
        return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))
    if w.axiom == "anonymity":
        perm = w.permutation
        inv = perm.inverse()
        pa = p.value(apply_permutation(w.rule, inv))
        pb = p.value(apply_permutation(w.other, inv))
        i, j = w.player, perm(w.player)
        return (a[i] >= b[i]) != (pa[j] >= pb[j])
    i = w.player
    sa, sb = w.rule.player_sets(), w.other.player_sets()
    if w.axiom == "null_player":
        return i in sa.null_set and i in sb.null_set and a[i] != b[i]
    if w.axiom == "swing_player":
        return i in sa.swing and i in sb.null_set and not a[i] > b[i]
    raise ValueError(w.axiom)


# -- axiom verdict table ------------------------------------------------------

# (row label, index name or None when not implemented, expected A1..A4)
TABLE1 = (
    ("Shapley & Shubik", "shapley_shubik", ("yes", "yes", "yes", "yes")),
    ("Banzhaf", "banzhaf", ("yes", "yes", "yes", "yes")),
    ("Nucleolus", None, ("yes", "yes", "yes", "no")),
    ("Rae", "rae_raw", ("yes", "yes", "no", "yes")),
    ("Rae, null players zeroed", "rae_nullzero", ("yes", "yes", "yes", "yes")),
    ("Coleman to initiate", "coleman_initiate", ("yes", "yes", "yes", "yes")),
    ("Coleman to prevent", "coleman_prevent", ("yes", "yes", "yes", "yes")),
    ("Deegan & Packel", "deegan_packel", ("yes", "yes", "yes", "yes")),
    ("Johnston", "johnston", ("yes", "yes", "yes", "yes")),
    ("Nevison, Zicht & Schoepke", "nevison_raw", ("yes", "yes", "no", "yes")),
    ("Nevison, null players zeroed", "nevison_nullzero", ("yes", "yes", "yes", "yes")),
    ("Regular semivalues", None, ("yes", "yes", "yes", "yes")),
    ("Non-regular semivalues", None, ("yes", "yes", "yes", "no")),
    ("tau-value", None, ("yes", "yes", "yes", "no")),
    ("Public good (Holler)", "public_good", ("yes", "yes", "yes", "yes")),
    ("Public help", "public_help", ("yes", "yes", "no", "yes")),
    ("Shift power", "shift", ("yes", "yes", "yes", "yes")),
    ("Equal swing share", "equal_swing", ("yes", "yes", "yes", "yes")),
    ("Veto epsilon", "veto_epsilon", ("yes", "yes", "yes", "yes")),
)

EXPECTED = {name: exp for _, name, exp in TABLE1 if name}

ALL_YES = tuple(name for _, name, exp in TABLE1 if name and exp == ("yes",) * 4)

assert set(EXPECTED) == set(INDEX_NAMES)


@dataclass
class Table1Row:
    label: str
    index: Optional[str]
    expected: tuple
    report: Optional[AxiomReport] = None

    @property
    def implemented(self) -> bool:
        return self.report is not None

    @property
    def matches(self) -> Optional[bool]:
        if self.report is None:
            return None
        return self.report.verdicts() == self.expected

    def to_dict(self) -> dict:
        d = {"label": self.label, "index": self.index, "expected": list(self.expected)}
        if self.report is None:
            d["status"] = "not implemented"
        else:
            d["observed"] = list(self.report.verdicts())
            d["matches"] = self.matches
            d["report"] = self.report.to_dict()
        return d


def table1(n: int, eps: Fraction | None = None) -> list:
    rows = []
    for label, name, expected in TABLE1:
        if name is None:
            rows.append(Table1Row(label, None, expected))
            continue
        token = IndexId("veto_epsilon", eps) if name == "veto_epsilon" else name
        rows.append(Table1Row(label, name, expected, axiom_report(token, n)))
    return rows
