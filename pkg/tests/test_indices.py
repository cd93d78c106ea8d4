from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from stablevote.coalitions import Permutation, members
from stablevote.enumeration import rule_space
from stablevote.errors import UnknownIndex, UnsupportedAtScale
from stablevote.indices import (DEFAULT_EPSILON, INDEX_NAMES, IndexId, compute_index,
                                equal_swing_index, index_matrix, veto_epsilon)
from stablevote.rules import (apply_permutation, dictator, from_minimal_winning, from_weighted,
                              quota_with_required, unanimity)

F = Fraction
MAJ3 = from_minimal_winning(3, [{1, 2}, {1, 3}, {2, 3}])
VETO1 = from_minimal_winning(3, [{1, 2}, {1, 3}])


def winning_sets(table):
    return frozenset(members(int(t)) for t in np.nonzero(table)[0])


@pytest.mark.parametrize("name", INDEX_NAMES)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matches_oracle(name, n):
    sp = rule_space(n)
    ours = index_matrix(name, sp.tables, n)
    fn = oracles.INDICES[name]
    for row, table in zip(ours, sp.tables):
        assert row == fn(winning_sets(table), n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_coleman_normalizations_equal_banzhaf(n):
    sp = rule_space(n)
    bz = index_matrix("banzhaf", sp.tables, n)
    assert index_matrix("coleman_initiate", sp.tables, n) == bz
    assert index_matrix("coleman_prevent", sp.tables, n) == bz


def test_banzhaf_oracle_n5():
    sp = rule_space(5)
    ours = index_matrix("banzhaf", sp.tables, 5)
    for k in range(0, sp.size, 7):
        assert ours[k] == oracles.banzhaf(winning_sets(sp.tables[k]), 5)


@pytest.mark.parametrize("name,rule,expected", [
    ("shapley_shubik", MAJ3, (F(1, 3),) * 3),
    ("banzhaf", from_weighted(3, [2, 1, 1]), (F(3, 5), F(1, 5), F(1, 5))),
    ("deegan_packel", VETO1, (F(1, 2), F(1, 4), F(1, 4))),
    ("public_help", dictator(3, 1), (F(1, 2), F(1, 4), F(1, 4))),
    ("equal_swing", from_minimal_winning(3, [{1, 2}]), (F(1, 2), F(1, 2), F(0))),
    ("equal_swing", MAJ3, (F(1, 3),) * 3),
    ("equal_swing", VETO1, (F(1, 3),) * 3),
    ("veto_epsilon", MAJ3, (F(1, 3),) * 3),
    ("veto_epsilon", unanimity(3), (F(1, 3),) * 3),
])
def test_examples(name, rule, expected):
    assert tuple(compute_index(name, rule)) == expected


def test_veto_epsilon_example():
    eps = DEFAULT_EPSILON
    assert tuple(veto_epsilon(VETO1, eps)) == (1 - 2 * eps / 27, eps / 27, eps / 27)
    assert tuple(compute_index("veto_epsilon:1/100", VETO1)) == (F(1) - F(2, 2700), F(1, 2700), F(1, 2700))
    with pytest.raises(ValueError):
        veto_epsilon(VETO1, 0)
    with pytest.raises(ValueError):
        veto_epsilon(VETO1, 27)          # veto share 1 - 2 would be negative


@pytest.mark.parametrize("name", INDEX_NAMES)
def test_efficiency_exact(name):
    for n in (1, 2, 3, 4):
        for row in index_matrix(name, rule_space(n).tables, n):
            assert sum(row, F(0)) == 1
            assert all(x >= 0 for x in row)


@pytest.mark.parametrize("name", INDEX_NAMES)
def test_anonymity_at_value_level(name):
    sp = rule_space(4)
    vals = index_matrix(name, sp.tables, 4)
    for k, p in enumerate(sp.permutations):
        moved = sp.permutation_action[k]
        for r in range(sp.size):
            u = vals[moved[r]]          # u = v relabelled: player i plays p(i)
            assert all(u[i - 1] == vals[r][p(i) - 1] for i in range(1, 5))


RAW = {"rae_raw", "nevison_raw", "public_help"}


@pytest.mark.parametrize("name", sorted(set(INDEX_NAMES) - RAW))
def test_null_players_get_zero(name):
    for n in (2, 3, 4):
        sp = rule_space(n)
        for row, null in zip(index_matrix(name, sp.tables, n), sp.null):
            assert all(x == 0 for x, z in zip(row, null) if z)


@pytest.mark.parametrize("name", INDEX_NAMES)
def test_swing_players_positive(name):
    for n in (2, 3, 4):
        sp = rule_space(n)
        for row, swing in zip(index_matrix(name, sp.tables, n), sp.swing):
            assert all(x > 0 for x, s in zip(row, swing) if s)


@pytest.mark.parametrize("name", sorted(set(INDEX_NAMES) - RAW))
def test_dictator(name):
    assert tuple(compute_index(name, dictator(4, 2))) == (0, 1, 0, 0)


def test_raw_measures_value_null_players():
    # value of a null player before normalization is 1/2 for the Rae measure
    assert tuple(compute_index("rae_raw", dictator(3, 1))) == (F(1, 2), F(1, 4), F(1, 4))
    assert tuple(compute_index("nevison_raw", dictator(3, 1))) == (F(1, 2), F(1, 4), F(1, 4))


def test_index_id_parsing():
    assert IndexId.parse("banzhaf") == IndexId("banzhaf")
    tok = IndexId.parse("veto_epsilon:1/1000")
    assert tok.eps == F(1, 1000) and str(tok) == "veto_epsilon:1/1000"
    assert IndexId.parse("veto_epsilon").eps == DEFAULT_EPSILON
    for bad in ("nucleolus", "banzhaf:1/2", "veto_epsilon:0"):
        with pytest.raises(UnknownIndex):
            IndexId.parse(bad)


def test_power_vector_is_one_indexed():
    pv = compute_index("banzhaf", from_weighted(3, [2, 1, 1]))
    assert pv[1] == F(3, 5) and len(pv) == 3 and pv.total() == 1
    with pytest.raises(IndexError):
        pv[0]


def test_scale_paths():
    un = quota_with_required(193, 129, range(1, 6))
    es = equal_swing_index(un)
    assert es[1] == F(1, 193) and es.total() == 1
    ve = veto_epsilon(un)
    assert ve[1] > ve[6] > 0 and ve.total() == 1
    with pytest.raises(UnsupportedAtScale):
        compute_index("banzhaf", un)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=2, max_size=6), st.data(),
       st.sampled_from(INDEX_NAMES))
def test_weighted_rules_match_oracle(weights, data, name):
    if sum(weights) == 0:
        return
    q = data.draw(st.integers(1, sum(weights)))
    v = from_weighted(q, weights)
    win = winning_sets(v.table())
    assert tuple(compute_index(name, v)) == oracles.INDICES[name](win, v.n)


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(1, 5)), st.integers(0, 165), st.sampled_from(INDEX_NAMES))
def test_relabelling_moves_values(images, k, name):
    p = Permutation(tuple(images))
    v = rule_space(4).rules[k]
    a, b = compute_index(name, v), compute_index(name, apply_permutation(v, p))
    assert all(b[i] == a[p(i)] for i in range(1, 5))
