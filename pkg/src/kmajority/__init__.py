"""Finding a majority item with count and partition queries on k-subsets."""
from .adversary import (AdversaryOracle, DuelReport, achievable_discrepancies, duel,
                        extract_refutation, random_strategy, reasonable_transform,
                        truncated_dmk)
from .count_majority import count_query_bound, find_majority_count
from .errors import (CapacityError, InfeasibleInstanceError, InvalidStateError,
                     QueryModeError, QuerySizeError, RunawayError, StrategyError)
from .families import (Confirmed, SetFamily, Witness, family_even, family_odd,
                       family_three_sets, verify_unbalanceable)
from .oracle import AlwaysBalancedOracle, HonestOracle, Oracle, Transcript, replay
from .partition_majority import (dmk_partition_majority, pair_recursion_k2,
                                 partition_majority_improved, partition_query_bound)
from .setcore import (NO_MAJORITY, PartitionPair, coloring_from_str, coloring_to_str,
                      is_correct_answer, majority_truth)

__version__ = "0.1.0"
