import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from stablevote.coalitions import Permutation, members
from stablevote.enumeration import enumerate_rules, rule_space
from stablevote.errors import (EmptyFamily, InfeasibleQuota, InvalidRule, MismatchedPlayerSets,
                               NotAntichain, QuotaUnreachable, TooLarge, UnsupportedAtScale)
from stablevote.rules import (ExplicitRule, apply_permutation, canonical_form, classify,
                              count_quota, describe, dictator, from_minimal_winning, from_table,
                              from_weighted, intersection, minimal_winning, oligarchy,
                              player_sets, quota_with_required, symmetric_coalitions, unanimity)

MAJ3 = [{1, 2}, {1, 3}, {2, 3}]


def fs(*cs):
    return frozenset(frozenset(c) for c in cs)


def test_majority_of_three():
    v = from_minimal_winning(3, MAJ3)
    assert minimal_winning(v) == fs(*MAJ3)
    ps = player_sets(v)
    assert ps.swing == {1, 2, 3} and not ps.null_set and not ps.veto and not ps.oligarchic
    assert classify(v) == (False, False)
    assert v.wins({1, 2}) and not v.wins({3})


def test_oligarchy_and_veto():
    v = oligarchy(3, {1, 2})
    assert player_sets(v) == ({1, 2}, {3}, {1, 2}, {1, 2})
    w = from_minimal_winning(3, [{1, 2}, {1, 3}])
    assert player_sets(w).veto == {1} and not player_sets(w).oligarchic
    assert classify(w) == (True, False)
    assert "veto={1}" in describe(w)


def test_weighted_examples():
    v = from_weighted(3, [2, 1, 1])
    assert minimal_winning(v) == fs({1, 2}, {1, 3})
    assert from_weighted(1, [1, 0, 0]) == dictator(3, 1)
    assert player_sets(from_weighted(5, [3, 3, 1])).null_set == {3}


def test_constructor_errors():
    with pytest.raises(NotAntichain):
        from_minimal_winning(3, [{1}, {1, 2}])
    with pytest.raises(EmptyFamily):
        from_minimal_winning(3, [])
    with pytest.raises(EmptyFamily):
        from_minimal_winning(3, [set()])
    with pytest.raises(QuotaUnreachable):
        from_weighted(5, [1, 1, 1])
    with pytest.raises(InfeasibleQuota):
        quota_with_required(5, 2, [1, 2, 3])
    with pytest.raises(InfeasibleQuota):
        count_quota(3, 4)
    with pytest.raises(MismatchedPlayerSets):
        intersection([dictator(3, 1), dictator(4, 1)])
    with pytest.raises(InvalidRule):
        from_table(2, [0, 1, 0, 0])          # not monotone
    with pytest.raises(InvalidRule):
        from_table(2, [1, 1, 1, 1])          # empty coalition wins


def test_not_antichain_is_invalid_rule():
    assert issubclass(NotAntichain, InvalidRule)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=7), st.data())
def test_weighted_player_sets_match_table(weights, data):
    total = sum(weights)
    if total == 0:
        return
    q = data.draw(st.integers(1, total))
    v = from_weighted(q, weights)
    e = v.to_explicit()
    assert v.player_sets() == e.player_sets()
    assert v.veto_players() == e.veto_players()


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.data())
def test_quota_rule_analytic_matches_table(n, data):
    k = data.draw(st.integers(1, n))
    req = data.draw(st.sets(st.integers(1, n), max_size=k))
    v = quota_with_required(n, k, req)
    assert v.player_sets() == v.to_explicit().player_sets()
    assert v == v.to_explicit()


def test_quota_rule_at_scale():
    un = quota_with_required(193, 129, range(1, 6))
    ps = un.player_sets()
    assert ps.veto == frozenset(range(1, 6)) and not ps.oligarchic and len(ps.swing) == 193
    both = intersection([count_quota(193, 97), un])
    assert both.player_sets() == ps
    with pytest.raises(UnsupportedAtScale):
        intersection([from_weighted(5, [1] * 30), from_weighted(7, [2] + [1] * 29)]).player_sets()


def test_weighted_at_scale():
    v = from_weighted(101, [100] + [1] * 40)
    ps = v.player_sets()
    assert ps.veto == {1} and len(ps.swing) == 41
    assert from_weighted(1, [1] + [0] * 29).oligarchic_players() == {1}


def test_equality_is_by_winning_family():
    assert from_weighted(2, [1, 1, 1]) == from_minimal_winning(3, MAJ3) == count_quota(3, 2)
    assert hash(count_quota(3, 2)) == hash(from_minimal_winning(3, MAJ3))
    assert unanimity(3) != dictator(3, 1)


def test_apply_permutation_convention():
    v = from_minimal_winning(3, [{1, 2}, {1, 3}])
    p = Permutation.from_cycles(3, (1, 2))
    u = apply_permutation(v, p)
    assert player_sets(u).veto == {2}
    for t in range(8):
        assert u.wins(t) == v.wins(p.image_mask(t))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_apply_permutation_preserves_rule_set(n):
    rules = list(enumerate_rules(n))
    for p in Permutation.all(n):
        assert {apply_permutation(v, p) for v in rules} == set(rules)


def test_apply_permutation_symbolic():
    v = quota_with_required(30, 20, [1, 2])
    p = Permutation.from_cycles(30, (1, 3))
    u = apply_permutation(v, p)
    assert u.required == frozenset({2, 3})
    w = from_weighted(40, [30] + [1] * 29)
    assert apply_permutation(w, p).weights[2] == 30


def test_canonical_form():
    m = from_minimal_winning(3, MAJ3)
    assert canonical_form(m) == m
    d = [canonical_form(dictator(3, i)) for i in (1, 2, 3)]
    # the representative is the smallest enumeration key, i.e. the last dictator
    assert d[0] == d[1] == d[2] == dictator(3, 3)
    with pytest.raises(TooLarge):
        canonical_form(unanimity(8))


@pytest.mark.parametrize("n", [3, 4])
def test_canonical_form_classes(n):
    reps = {canonical_form(v) for v in enumerate_rules(n)}
    assert len(reps) == {3: 8, 4: 28}[n]        # non-isomorphic simple games, constants excluded
    sp = rule_space(n)
    for k, v in enumerate(sp.rules):
        assert canonical_form(v) == sp.rules[sp.canonical[k]]


def _symmetric_oracle(v):
    n = v.n
    auts = [p for p in itertools.permutations(range(1, n + 1))
            if all(v.wins(t) == v.wins(sum(1 << (p[i] - 1) for i in range(n) if t >> i & 1))
                   for t in range(1 << n))]
    out = set()
    for t in range(1 << n):
        mem = members(t)
        need = {tuple(p[i - 1] for i in sorted(mem)) for p in auts
                if {p[i - 1] for i in mem} == mem}
        if len(need) == len(list(itertools.permutations(mem))):
            out.add(mem)
    return frozenset(out)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_symmetric_coalitions_match_brute_force(n):
    for v in enumerate_rules(n):
        assert symmetric_coalitions(v) == _symmetric_oracle(v)


def test_symmetric_coalition_examples():
    maj = from_minimal_winning(3, MAJ3)
    assert len(symmetric_coalitions(maj)) == 8
    v = from_minimal_winning(3, [{1, 2}, {1, 3}])
    sym = symmetric_coalitions(v)
    assert frozenset({1, 2}) not in sym and frozenset({2, 3}) in sym
    assert all(frozenset({i}) in sym for i in (1, 2, 3))


def test_player_sets_match_oracle(brute_rules):
    for win in brute_rules(4):
        table = np.zeros(16, dtype=bool)
        for t in win:
            table[sum(1 << (i - 1) for i in t)] = True
        v = ExplicitRule(4, table)
        assert v.player_sets().swing == oracles.swing_set(win)
        assert v.player_sets().veto == oracles.veto_set(win)
        assert v.minimal_winning() == oracles.minimal(win)
