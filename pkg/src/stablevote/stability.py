"""Stability of voting rules and self-stability of constitutions.

Challengers range over every rule on the same player set.  All scans go
through :func:`stablevote.kernels.first_dominators` on the profile's rank
table; witnesses are the earliest challenger in enumeration order, ties
broken by coalition order.
"""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .coalitions import coalition_rank, members
from .errors import AxiomPreconditionFailed, EpsilonNotSmallEnough, MismatchedPlayerSets, TooLarge
from .indices import DEFAULT_EPSILON, IndexId
from .kernels import first_dominators
from .profiles import ALL_YES, PreferenceProfile, axiom_report
from .rules import VotingRule, symmetric_coalitions

NOTIONS = ("ms", "ws", "wms")
SCHEMA = "stablevote.census/1"


@dataclass(frozen=True)
class Constitution:
    ordinary: VotingRule
    extraordinary: VotingRule

    def __post_init__(self):
        if self.ordinary.n != self.extraordinary.n:
            raise MismatchedPlayerSets(
                f"ordinary rule on {self.ordinary.n} players, extraordinary on {self.extraordinary.n}")

    @property
    def n(self) -> int:
        return self.ordinary.n


@dataclass(frozen=True)
class DominanceWitness:
    challenger: VotingRule
    coalition: frozenset
    dominated: VotingRule
    tag: Optional[str] = None       # "ordinary" / "extraordinary" for constitutions

    def to_dict(self) -> dict:
        d = {"challenger": self.challenger.mwc_string(),
             "coalition": sorted(self.coalition),
             "dominated": self.dominated.mwc_string()}
        if self.tag:
            d["tag"] = self.tag
        return d


@dataclass(frozen=True)
class StabilityVerdict:
    notion: str
    stable: bool
    witness: Optional[DominanceWitness] = None

    def to_dict(self) -> dict:
        d = {"notion": self.notion, "stable": self.stable}
        if self.witness:
            d["witness"] = self.witness.to_dict()
        return d


class StructuralClass(enum.Enum):
    STABLE_BY_SUFFICIENT = "StableBySufficient"
    UNSTABLE_BY_NECESSARY = "UnstableByNecessary"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


def _guard(n: int):
    if n > 5:
        raise TooLarge(f"stability scans every rule on n players; n={n} exceeds 5")


def dominator_table(p: PreferenceProfile, strong: bool = False) -> np.ndarray:
    """``D[r, T]``: first rule dominating rule ``r`` for mask ``T`` (-1 if none).

    Column 0 (the empty coalition) is always -1.
    """
    key = ("dominators", bool(strong))
    if key not in p._extra:
        _guard(p.n)
        m, width = p.space.size, 1 << p.n
        inc = np.repeat(np.arange(m, dtype=np.int64), width - 1)
        masks = np.tile(np.arange(1, width, dtype=np.int64), m)
        found = first_dominators(p.ranks, inc, masks, strong)
        table = np.full((m, width), -1, dtype=np.int64)
        table[:, 1:] = found.reshape(m, width - 1)
        table.setflags(write=False)
        p._extra[key] = table
    return p._extra[key]


def _coalitions_for(p: PreferenceProfile, k: int, notion: str) -> np.ndarray:
    sp = p.space
    if notion == "ws":
        wins = np.nonzero(sp.tables[k])[0]
        return wins[np.argsort(coalition_rank(p.n)[wins], kind="stable")]
    return sp.mwc_lists[k]


def _first_witness(p, queries, strong):
    """``queries``: list of (rule index, mask, tag).  Earliest hit or None."""
    if not queries:
        return None
    inc = np.array([q[0] for q in queries], dtype=np.int64)
    masks = np.array([q[1] for q in queries], dtype=np.int64)
    if ("dominators", bool(strong)) in p._extra:
        found = p._extra[("dominators", bool(strong))][inc, masks]
    else:
        found = first_dominators(p.ranks, inc, masks, strong)
    rank = coalition_rank(p.n)
    best = None
    for (r, t, tag), c in zip(queries, found):
        if c < 0:
            continue
        key = (int(c), int(rank[t]), tag or "")
        if best is None or key < best[0]:
            best = (key, int(c), int(t), int(r), tag)
    if best is None:
        return None
    _, c, t, r, tag = best
    rules = p.space.rules
    return DominanceWitness(rules[c], members(t), rules[r], tag)


def _rule_verdict(p: PreferenceProfile, v: VotingRule, notion: str) -> StabilityVerdict:
    if notion not in NOTIONS:
        raise ValueError(f"unknown stability notion {notion!r}")
    _guard(p.n)
    k = p.space.index_of(v)
    queries = [(k, int(t), None) for t in _coalitions_for(p, k, notion)]
    w = _first_witness(p, queries, strong=(notion == "wms"))
    return StabilityVerdict(notion, w is None, w)


def is_minimal_stable(p: PreferenceProfile, v: VotingRule) -> StabilityVerdict:
    """No rule Pareto dominates ``v`` for any of its minimal winning coalitions."""
    return _rule_verdict(p, v, "ms")


def is_winning_stable(p: PreferenceProfile, v: VotingRule) -> StabilityVerdict:
    return _rule_verdict(p, v, "ws")


def is_weak_minimal_stable(p: PreferenceProfile, v: VotingRule) -> StabilityVerdict:
    """As :func:`is_minimal_stable` with strong (all strict) dominance."""
    return _rule_verdict(p, v, "wms")


def is_minimal_self_stable(p: PreferenceProfile, c: Constitution) -> StabilityVerdict:
    """No rule dominates the ordinary or the extraordinary rule for any
    minimal winning coalition of the extraordinary rule."""
    _guard(p.n)
    sp = p.space
    ko, ke = sp.index_of(c.ordinary), sp.index_of(c.extraordinary)
    queries = []
    for t in sp.mwc_lists[ke]:
        queries.append((ko, int(t), "ordinary"))
        queries.append((ke, int(t), "extraordinary"))
    w = _first_witness(p, queries, strong=False)
    return StabilityVerdict("mss", w is None, w)


def recheck_dominance(p: PreferenceProfile, w: DominanceWitness, strong: bool = False) -> bool:
    """Independent re-evaluation of a witness from exact index values."""
    a, b = p.value(w.challenger), p.value(w.dominated)
    players = sorted(w.coalition)
    if strong:
        return all(a[i] > b[i] for i in players)
    return all(a[i] >= b[i] for i in players) and any(a[i] > b[i] for i in players)


# -- structural classification -------------------------------------------------

def classify_constitution(c: Constitution) -> StructuralClass:
    """Sufficient/necessary conditions read off the player sets alone."""
    so = c.ordinary.player_sets().swing
    ve = c.extraordinary.veto_players()
    oe = c.extraordinary.oligarchic_players()
    if so <= oe:
        return StructuralClass.STABLE_BY_SUFFICIENT
    if not ve or (not so <= ve and not ve <= so):
        return StructuralClass.UNSTABLE_BY_NECESSARY
    return StructuralClass.INDETERMINATE


def _structural_masks(sp):
    bits = 1 << np.arange(sp.n, dtype=np.int64)
    return ((sp.swing * bits).sum(1), (sp.veto * bits).sum(1), (sp.oligarchic * bits).sum(1))


def structural_matrix(n: int):
    """``(sufficient, necessary)`` boolean matrices indexed ``[ordinary, extraordinary]``."""
    from .enumeration import rule_space
    sp = rule_space(n)
    S, V, O = _structural_masks(sp)
    suff = (S[:, None] & ~O[None, :]) == 0
    nec = (V[None, :] == 0) | (((S[:, None] & ~V[None, :]) != 0) & ((V[None, :] & ~S[:, None]) != 0))
    return suff, nec


# -- census reports ------------------------------------------------------------

@dataclass
class CensusReport:
    name: str
    index: str
    n: int
    status: str                          # "pass" | "fail" | "skipped"
    params: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    classes: list = field(default_factory=list)
    seed: Optional[int] = None
    elapsed: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {"schema": SCHEMA, "name": self.name, "index": self.index, "n": self.n,
             "status": self.status, "params": self.params, "seed": self.seed,
             "counts": self.counts, "witnesses": self.witnesses, "classes": self.classes}
        if self.note:
            d["note"] = self.note
        if include_timing:
            d["wall_clock_seconds"] = round(self.elapsed, 6)
        return d

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True)

    def filename(self) -> str:
        safe = self.index.replace(":", "_").replace("/", "_")
        return f"{self.name}_{safe}_n{self.n}.json"

    def write(self, out_dir) -> str:
        import os
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(str(out_dir), self.filename())
        with open(path, "w") as fh:
            fh.write(self.to_json() + "\n")
        return path


@dataclass
class StableSet:
    notion: str
    profile: str
    n: int
    indices: np.ndarray
    space: object

    @property
    def rules(self) -> list:
        return [self.space.rules[k] for k in self.indices]

    def __len__(self):
        return len(self.indices)

    def __contains__(self, v: VotingRule) -> bool:
        return self.space.index_of(v) in set(self.indices.tolist())

    def index_set(self) -> set:
        return set(int(k) for k in self.indices)

    def summary(self) -> dict:
        sp = self.space
        out = {}
        stable = np.zeros(sp.size, dtype=bool)
        stable[self.indices] = True
        for name, sel in (("oligarchic", sp.is_oligarchic),
                          ("veto_non_oligarchic", sp.is_veto & ~sp.is_oligarchic),
                          ("non_veto", ~sp.is_veto)):
            out[name] = {"total": int(sel.sum()), "stable": int((stable & sel).sum())}
        out["stable"] = int(stable.sum())
        out["rules"] = int(sp.size)
        return out

    def classes(self) -> list:
        """Isomorphism classes keyed by canonical representative."""
        sp = self.space
        stable = np.zeros(sp.size, dtype=bool)
        stable[self.indices] = True
        out = []
        for rep, size in sorted(sp.orbit_sizes.items()):
            orbit = sp.canonical == rep
            out.append({"canonical": sp.rules[rep].mwc_string(), "orbit_size": size,
                        "category": sp.category(rep), "stable": int((stable & orbit).sum())})
        return out


def stable_mask(p: PreferenceProfile, notion: str) -> np.ndarray:
    if notion not in NOTIONS:
        raise ValueError(f"unknown stability notion {notion!r}")
    _guard(p.n)
    D = dominator_table(p, strong=(notion == "wms"))
    sp = p.space
    cover = sp.tables if notion == "ws" else sp.minimal
    return ~((D >= 0) & cover).any(axis=1)


def stable_set(p: PreferenceProfile, n: int = None, notion: str = "ms") -> StableSet:
    if n is not None and n != p.n:
        raise ValueError(f"profile is on {p.n} players, asked for {n}")
    mask = stable_mask(p, notion)
    return StableSet(notion, p.name, p.n, np.nonzero(mask)[0], p.space)


def _precondition(p: PreferenceProfile, name: str, on_fail: str):
    rep = axiom_report(p, p.n)
    if rep.all_hold:
        return None, rep
    if on_fail == "raise":
        raise AxiomPreconditionFailed(rep)
    failed = [r.axiom for r in rep.results if not r.holds]
    skipped = CensusReport(name, p.name, p.n, "skipped",
                           params={"axioms": rep.to_dict()},
                           note="profile violates " + ", ".join(failed) + "; theorem not applicable")
    return skipped, rep


def _rule_list(sp, idx, limit=10):
    return [sp.rules[int(k)].mwc_string() for k in list(idx)[:limit]]


def verify_theorem1(p: PreferenceProfile, n: int = None, on_precondition: str = "skip") -> CensusReport:
    """Oligarchic rules are minimal stable and minimal stable rules are veto."""
    t0 = time.perf_counter()
    _guard(p.n)
    skipped, rep = _precondition(p, "theorem1", on_precondition)
    if skipped:
        skipped.elapsed = time.perf_counter() - t0
        return skipped
    ss = stable_set(p, notion="ms")
    sp = p.space
    stable = np.zeros(sp.size, dtype=bool)
    stable[ss.indices] = True
    lower = np.nonzero(sp.is_oligarchic & ~stable)[0]
    upper = np.nonzero(stable & ~sp.is_veto)[0]
    witnesses = ([{"kind": "oligarchic_not_stable", "rule": r} for r in _rule_list(sp, lower)]
                 + [{"kind": "stable_not_veto", "rule": r} for r in _rule_list(sp, upper)])
    counts = {"rules": sp.size, "oligarchic": int(sp.is_oligarchic.sum()),
              "veto": int(sp.is_veto.sum()), "stable": int(stable.sum()),
              "stable_veto_non_oligarchic": int((stable & sp.is_veto & ~sp.is_oligarchic).sum())}
    status = "pass" if lower.size == 0 and upper.size == 0 else "fail"
    return CensusReport("theorem1", p.name, p.n, status, params={"notion": "ms"},
                        counts=counts, witnesses=witnesses, classes=ss.classes(),
                        elapsed=time.perf_counter() - t0)


def _sandwich_report(name, p, notion, upper_ok, t0):
    ss = stable_set(p, notion=notion)
    sp = p.space
    stable = np.zeros(sp.size, dtype=bool)
    stable[ss.indices] = True
    lower = np.nonzero(sp.is_oligarchic & ~stable)[0]
    upper = np.nonzero(stable & ~upper_ok)[0]
    witnesses = ([{"kind": "oligarchic_not_stable", "rule": r} for r in _rule_list(sp, lower)]
                 + [{"kind": "stable_outside_bound", "rule": r} for r in _rule_list(sp, upper)])
    counts = {"rules": sp.size, "oligarchic": int(sp.is_oligarchic.sum()),
              "upper_bound": int(upper_ok.sum()), "stable": int(stable.sum())}
    status = "pass" if lower.size == 0 and upper.size == 0 else "fail"
    return CensusReport(name, p.name, p.n, status, params={"notion": notion},
                        counts=counts, witnesses=witnesses, classes=ss.classes(),
                        elapsed=time.perf_counter() - t0)


def symmetric_mwc_flags(n: int) -> np.ndarray:
    """Per rule on ``n`` players: does some minimal winning coalition sit in
    the rule's symmetric coalitions?"""
    from .enumeration import rule_space
    sp = rule_space(n)
    key = "symmetric_mwc"
    cached = getattr(sp, "_sym_cache", None)
    if cached is None:
        flags = np.zeros(sp.size, dtype=bool)
        for k, v in enumerate(sp.rules):
            sym = symmetric_coalitions(v)
            flags[k] = any(members(int(t)) in sym for t in sp.mwc_lists[k])
        sp._sym_cache = flags
        cached = flags
    return cached


def _equal_sets_report(name, p, target, t0, extra=None):
    ss = stable_set(p, notion="ms")
    sp = p.space
    stable = np.zeros(sp.size, dtype=bool)
    stable[ss.indices] = True
    diff = np.nonzero(stable != target)[0]
    witnesses = [{"kind": "stable" if stable[k] else "not_stable", "rule": sp.rules[k].mwc_string()}
                 for k in diff[:10]]
    counts = {"rules": sp.size, "stable": int(stable.sum()), "target": int(target.sum()),
              "mismatches": int(diff.size)}
    counts.update(extra or {})
    return CensusReport(name, p.name, p.n, "pass" if diff.size == 0 else "fail",
                        params={"notion": "ms"}, counts=counts, witnesses=witnesses,
                        classes=ss.classes(), elapsed=time.perf_counter() - t0), stable


def verify_corollaries(n: int, indices=ALL_YES, eps=DEFAULT_EPSILON) -> list:
    """Census checks for the equal-swing and veto-epsilon rows plus the ws and wms bounds.

    1. equal_swing: stable set equals the oligarchic rules.
    2. veto_epsilon: stable set equals the veto rules, unchanged when
       epsilon is halved (raises :class:`EpsilonNotSmallEnough` otherwise).
    3. winning stability sits between the oligarchic rules and the oligarchic
       or null-free veto rules, for every listed index.
    4. weak minimal stability sits between the oligarchic rules and those
       without a symmetric minimal winning coalition.
    """
    _guard(n)
    reports = []
    t0 = time.perf_counter()
    p = PreferenceProfile("equal_swing", n)
    r1, _ = _equal_sets_report("corollary1", p, p.space.is_oligarchic, t0)
    reports.append(r1)

    t0 = time.perf_counter()
    eps = Fraction(eps)
    p = PreferenceProfile(IndexId("veto_epsilon", eps), n)
    r2, stable = _equal_sets_report("corollary2", p, p.space.is_veto, t0)
    half = PreferenceProfile(IndexId("veto_epsilon", eps / 2), n)
    stable_half = stable_mask(half, "ms")
    changed = int((stable != stable_half).sum())
    r2.params["epsilon"] = str(eps)
    r2.counts["changed_under_halving"] = changed
    if changed:
        raise EpsilonNotSmallEnough(
            f"{changed} verdicts change when epsilon {eps} is halved; choose a smaller epsilon")
    reports.append(r2)

    sp = p.space
    ws_bound = sp.is_oligarchic | (sp.is_veto & ~sp.null.any(axis=1))
    wms_bound = sp.is_oligarchic | ~symmetric_mwc_flags(n)
    for name in indices:
        prof = PreferenceProfile(name, n)
        t0 = time.perf_counter()
        reports.append(_sandwich_report("corollary3", prof, "ws", ws_bound, t0))
        t0 = time.perf_counter()
        reports.append(_sandwich_report("corollary4", prof, "wms", wms_bound, t0))
    return reports


def mss_stable(p: PreferenceProfile, ordinary: np.ndarray, extraordinary: np.ndarray) -> np.ndarray:
    """Vectorized self-stability verdicts for index pairs."""
    D = dominator_table(p)
    bad = D >= 0
    mt = p.space.minimal
    return ~((bad[ordinary] | bad[extraordinary]) & mt[extraordinary]).any(axis=1)


def verify_theorem2(p: PreferenceProfile, n: int = None, sample_budget: int = 100_000,
                    seed: int = 0, on_precondition: str = "skip") -> CensusReport:
    """Sufficient pairs are self-stable; necessary-condition pairs are not.

    Exhaustive over all ordered pairs for ``n <= 4``; for ``n == 5`` samples
    ``sample_budget`` pairs uniformly with the given seed.
    """
    t0 = time.perf_counter()
    _guard(p.n)
    skipped, _ = _precondition(p, "theorem2", on_precondition)
    if skipped:
        skipped.elapsed = time.perf_counter() - t0
        return skipped
    sp = p.space
    m = sp.size
    used_seed = None
    if p.n <= 4:
        o, e = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        o, e = o.ravel(), e.ravel()
    else:
        used_seed = int(seed)
        rng = np.random.default_rng(used_seed)
        o = rng.integers(0, m, size=sample_budget)
        e = rng.integers(0, m, size=sample_budget)
    stable = mss_stable(p, o, e)
    suff_m, nec_m = structural_matrix(p.n)
    suff, nec = suff_m[o, e], nec_m[o, e]
    both = suff & nec
    bad_suff = np.nonzero(suff & ~stable)[0]
    bad_nec = np.nonzero(nec & stable)[0]
    ind = ~suff & ~nec
    witnesses = []
    for kind, idx in (("sufficient_but_unstable", bad_suff), ("necessary_but_stable", bad_nec),
                      ("both_conditions", np.nonzero(both)[0])):
        for k in idx[:10]:
            witnesses.append({"kind": kind, "ordinary": sp.rules[o[k]].mwc_string(),
                              "extraordinary": sp.rules[e[k]].mwc_string()})
    counts = {"pairs": int(o.size), "sufficient": int(suff.sum()), "necessary": int(nec.sum()),
              "indeterminate": int(ind.sum()),
              "indeterminate_stable": int((ind & stable).sum()),
              "indeterminate_unstable": int((ind & ~stable).sum()),
              "self_stable": int(stable.sum())}
    ok = bad_suff.size == 0 and bad_nec.size == 0 and not both.any()
    params = {"mode": "exhaustive" if p.n <= 4 else "sampled"}
    if p.n > 4:
        params["sample_budget"] = int(sample_budget)
    return CensusReport("theorem2", p.name, p.n, "pass" if ok else "fail", params=params,
                        counts=counts, witnesses=witnesses, seed=used_seed,
                        elapsed=time.perf_counter() - t0)
