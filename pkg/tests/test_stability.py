import json

import numpy as np
import pytest

import oracles
from stablevote.coalitions import members
from stablevote.errors import AxiomPreconditionFailed, EpsilonNotSmallEnough, MismatchedPlayerSets, TooLarge
from stablevote.indices import INDEX_NAMES
from stablevote.profiles import ALL_YES, PreferenceProfile
from stablevote.rules import (count_quota, dictator, from_minimal_winning, oligarchy,
                              quota_with_required, unanimity)
from stablevote.stability import (Constitution, StructuralClass, classify_constitution,
                                  dominator_table, is_minimal_self_stable, is_minimal_stable,
                                  is_weak_minimal_stable, is_winning_stable, mss_stable,
                                  recheck_dominance, stable_mask, stable_set, structural_matrix,
                                  verify_corollaries, verify_theorem1, verify_theorem2)

MAJ3 = from_minimal_winning(3, [{1, 2}, {1, 3}, {2, 3}])
VETO1 = from_minimal_winning(3, [{1, 2}, {1, 3}])


def winning_sets(table):
    return frozenset(members(int(t)) for t in np.nonzero(table)[0])


@pytest.mark.parametrize("name", ALL_YES)
def test_oligarchy_stable_majority_unstable(name):
    p = PreferenceProfile(name, 3)
    assert is_minimal_stable(p, oligarchy(3, {1, 2})).stable
    v = is_minimal_stable(p, MAJ3)
    assert not v.stable and recheck_dominance(p, v.witness)


def test_equal_swing_and_veto_epsilon_examples():
    assert not is_minimal_stable(PreferenceProfile("equal_swing", 3), VETO1).stable
    assert is_minimal_stable(PreferenceProfile("veto_epsilon", 3), VETO1).stable


def test_winning_stability_examples():
    ss3, ss4 = PreferenceProfile("shapley_shubik", 3), PreferenceProfile("shapley_shubik", 4)
    assert is_winning_stable(ss3, unanimity(3)).stable
    assert not is_winning_stable(ss4, from_minimal_winning(4, [{1, 2}, {1, 3}])).stable
    assert not is_winning_stable(ss3, MAJ3).stable


def test_weak_minimal_stability_examples():
    ss3 = PreferenceProfile("shapley_shubik", 3)
    v = is_weak_minimal_stable(ss3, MAJ3)
    assert not v.stable
    assert recheck_dominance(ss3, v.witness, strong=True)
    assert is_weak_minimal_stable(PreferenceProfile("shapley_shubik", 4), unanimity(4)).stable
    for name in ALL_YES:
        assert is_weak_minimal_stable(PreferenceProfile(name, 3), dictator(3, 2)).stable


@pytest.mark.parametrize("name", ALL_YES)
def test_self_stability_examples(name):
    p = PreferenceProfile(name, 3)
    assert is_minimal_self_stable(p, Constitution(dictator(3, 1), dictator(3, 1))).stable
    v = is_minimal_self_stable(p, Constitution(MAJ3, MAJ3))
    assert not v.stable and v.witness.tag in ("ordinary", "extraordinary")
    assert recheck_dominance(p, v.witness)
    assert is_minimal_self_stable(p, Constitution(MAJ3, unanimity(3))).stable


def test_witness_is_first_in_order():
    p = PreferenceProfile("shapley_shubik", 3)
    w = is_minimal_stable(p, MAJ3).witness
    # earlier challengers must not dominate for any minimal winning coalition
    k = p.space.index_of(w.challenger)
    for c in p.space.rules[:k]:
        for t in MAJ3.minimal_winning():
            assert not recheck_dominance(p, type(w)(c, t, MAJ3))


@pytest.mark.parametrize("name", INDEX_NAMES)
@pytest.mark.parametrize("notion", ["ms", "ws", "wms"])
def test_stable_sets_match_oracle_n3(name, notion):
    p = PreferenceProfile(name, 3)
    rules = [winning_sets(t) for t in p.space.tables]
    want = oracles.stable_rules(rules, p.values, notion)
    assert set(np.nonzero(stable_mask(p, notion))[0].tolist()) == want


@pytest.mark.parametrize("name", ["shapley_shubik", "deegan_packel", "veto_epsilon"])
@pytest.mark.parametrize("notion", ["ms", "wms"])
def test_stable_sets_match_oracle_n4(name, notion):
    p = PreferenceProfile(name, 4)
    rules = [winning_sets(t) for t in p.space.tables]
    want = oracles.stable_rules(rules, p.values, notion)
    assert set(np.nonzero(stable_mask(p, notion))[0].tolist()) == want


def test_self_stability_matches_oracle_n3():
    p = PreferenceProfile("banzhaf", 3)
    rules = [winning_sets(t) for t in p.space.tables]
    m = len(rules)
    o, e = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    ours = mss_stable(p, o.ravel(), e.ravel()).reshape(m, m)
    for a in range(m):
        for b in range(m):
            assert ours[a, b] == oracles.self_stable(rules, p.values, a, b)


def test_stable_set_counts():
    assert len(stable_set(PreferenceProfile("equal_swing", 3), 3, "ms")) == 7
    ve = stable_set(PreferenceProfile("veto_epsilon", 3), 3, "ms")
    assert ve.index_set() == set(np.nonzero(ve.space.is_veto)[0].tolist())
    ss = stable_set(PreferenceProfile("shapley_shubik", 3), notion="ms")
    s = ss.summary()
    assert s["oligarchic"] == {"total": 7, "stable": 7} and s["non_veto"]["stable"] == 0
    assert VETO1 in ss
    classes = ss.classes()
    assert sum(c["orbit_size"] for c in classes) == 18


@pytest.mark.parametrize("name", ALL_YES)
def test_notion_implications(name):
    p = PreferenceProfile(name, 4)
    ms, ws, wms = (stable_mask(p, k) for k in ("ms", "ws", "wms"))
    assert not (ms & ~wms).any()
    assert not (ws & ~ms).any()
    olig = np.nonzero(p.space.is_oligarchic)[0]
    assert mss_stable(p, olig, olig).all()


def test_structural_conditions_exclusive():
    for n in (2, 3, 4):
        suff, nec = structural_matrix(n)
        assert not (suff & nec).any()


def test_structural_classes_profile_independent():
    for name in ALL_YES:
        p = PreferenceProfile(name, 3)
        m = p.space.size
        o, e = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        stable = mss_stable(p, o.ravel(), e.ravel()).reshape(m, m)
        suff, nec = structural_matrix(3)
        assert stable[suff].all() and not stable[nec].any()


def test_classify_examples():
    assert classify_constitution(Constitution(MAJ3, MAJ3)) is StructuralClass.UNSTABLE_BY_NECESSARY
    assert classify_constitution(Constitution(dictator(3, 1), dictator(3, 1))) is \
        StructuralClass.STABLE_BY_SUFFICIENT
    un = Constitution(count_quota(193, 97), quota_with_required(193, 129, range(1, 6)))
    assert classify_constitution(un) is StructuralClass.INDETERMINATE
    assert str(StructuralClass.INDETERMINATE) == "Indeterminate"
    with pytest.raises(MismatchedPlayerSets):
        Constitution(dictator(3, 1), dictator(4, 1))


def test_ms_sandwich_and_skip():
    assert verify_theorem1(PreferenceProfile("shapley_shubik", 3)).passed
    r = verify_theorem1(PreferenceProfile("public_help", 3))
    assert r.status == "skipped" and "null_player" in r.note
    with pytest.raises(AxiomPreconditionFailed):
        verify_theorem1(PreferenceProfile("public_help", 3), on_precondition="raise")


def test_ms_sandwich_skips_profile_without_axioms():
    # everyone prefers every non-oligarchic rule: non-dominance fails
    def anti(v):
        return [1 if len(v.minimal_winning()) > 1 else 0] * v.n

    r = verify_theorem1(PreferenceProfile.from_function(anti, 3, name="anti"))
    assert r.status == "skipped" and "non_dominance" in r.note


def test_pair_census_examples():
    r = verify_theorem2(PreferenceProfile("shapley_shubik", 3))
    assert r.passed and r.counts["pairs"] == 324
    r = verify_theorem2(PreferenceProfile("deegan_packel", 3))
    assert r.passed and r.counts["indeterminate"] == r.counts["indeterminate_stable"] + \
        r.counts["indeterminate_unstable"]


def test_sampled_pair_census_is_reproducible():
    p = PreferenceProfile("banzhaf", 5)
    a = verify_theorem2(p, sample_budget=2000, seed=3)
    b = verify_theorem2(p, sample_budget=2000, seed=3)
    assert a.passed and a.seed == 3 and a.params["mode"] == "sampled"
    assert a.to_json(include_timing=False) == b.to_json(include_timing=False)


def test_all_census_checks_n3():
    reports = verify_corollaries(3)
    assert all(r.passed for r in reports)
    assert {r.name for r in reports} == {"corollary1", "corollary2", "corollary3", "corollary4"}


def test_halving_check_rejects_large_epsilon():
    with pytest.raises(EpsilonNotSmallEnough):
        verify_corollaries(3, indices=(), eps=10)      # values stay positive at n=3


def test_report_files(tmp_path):
    r = verify_theorem1(PreferenceProfile("banzhaf", 3))
    path = r.write(tmp_path)
    assert path.endswith("theorem1_banzhaf_n3.json")
    doc = json.loads(open(path).read())
    assert doc["status"] == "pass" and "wall_clock_seconds" in doc
    assert doc["schema"] == "stablevote.census/1"


def test_scale_guard():
    with pytest.raises(TooLarge):
        dominator_table(PreferenceProfile("banzhaf", 6))
