"""Stable voting rules and self-stable constitutions on small player sets."""

from .coalitions import Permutation
from .enumeration import count_rules, enumerate_rules, rule_space
from .indices import INDEX_NAMES, IndexId, PowerVector, compute_index
from .notation import format_game, parse_game
from .profiles import PreferenceProfile, axiom_report, table1
from .rules import (VotingRule, apply_permutation, canonical_form, classify, count_quota,
                    dictator, from_minimal_winning, from_table, from_weighted, intersection,
                    minimal_winning, oligarchy, player_sets, quota_with_required,
                    symmetric_coalitions, unanimity)
from .stability import (Constitution, StructuralClass, classify_constitution, is_minimal_self_stable,
                        is_minimal_stable, is_weak_minimal_stable, is_winning_stable, stable_set,
                        verify_corollaries, verify_theorem1, verify_theorem2)

__version__ = "0.1.0"
