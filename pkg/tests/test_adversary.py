import math
from itertools import product

import pytest

from brute import acceptable, ceil_div
from kmajority.adversary import (
    AdversaryOracle, achievable_discrepancies, answer_even, answer_odd, consistent_coloring,
    duel, extract_refutation, random_strategy, reasonable_transform, round_even_tau,
    truncated_dmk,
)
from kmajority.count_majority import find_majority_count
from kmajority.errors import RunawayError, StrategyError
from kmajority.oracle import replay
from kmajority.partition_majority import dmk_partition_majority, partition_majority_improved


def brute_refutable(adv, answer):
    """Search every orientation of every component."""
    comps = adv.components()
    for signs in product((1, -1), repeat=len(comps)):
        x = adv.coloring_for(signs)
        if answer not in acceptable(x):
            return True
    return False


def test_achievable_examples():
    assert achievable_discrepancies((1, 1)) == {0, 2}
    assert achievable_discrepancies((2, 2, 2, 2)) == {0, 4, 8}
    assert achievable_discrepancies((3, 2)) == {1, 5}
    assert achievable_discrepancies(()) == {0}


def test_achievable_matches_enumeration():
    for ds in [(1, 2, 3), (4, 4, 1), (5,), (2, 2, 6, 1)]:
        expect = {abs(sum(s * d for s, d in zip(signs, ds)))
                  for signs in product((1, -1), repeat=len(ds))}
        assert achievable_discrepancies(ds) == expect


def test_tau_rounding():
    assert round_even_tau(64, 4) == 4
    assert round_even_tau(32, 8) == 2
    assert round_even_tau(5, 4) == 2
    assert round_even_tau(256, 4) == 6


def test_odd_first_merge():
    adv = AdversaryOracle(7, 3, "odd")
    p = answer_odd(adv, (1, 2, 3))
    assert sorted(p.sizes) == [1, 2]
    (comp,) = [c for c in adv.components() if c.size == 3]
    assert comp.discrepancy == 1


def test_odd_merge_of_unit_components():
    adv = AdversaryOracle(9, 3, "odd")
    for q in [(1, 2, 3), (4, 5, 6), (7, 8, 9)]:
        answer_odd(adv, q)
    assert [c.discrepancy for c in adv.components()] == [1, 1, 1]
    answer_odd(adv, (1, 4, 7))
    assert len(adv.components()) == 1
    assert adv.components()[0].size == 9 and adv.components()[0].discrepancy == 1


def test_even_fresh_singletons():
    adv = AdversaryOracle(40, 4, "even", tau=4)
    answer_even(adv, (1, 2, 3, 4))
    assert adv.events[-1].discrepancy == 2


def test_even_zero_commit():
    adv = AdversaryOracle(16, 2, "even", tau=2)
    # two discrepancy-2 components of size 2, merged: achievable {0, 4}, 4 > tau
    answer_even(adv, (1, 2))
    answer_even(adv, (3, 4))
    assert [c.discrepancy for c in adv.components()[:2]] == [2, 2]
    answer_even(adv, (1, 3))
    assert adv.events[-1].discrepancy == 0
    assert adv.events[-1].merged_discrepancies == (2, 2)


def test_parity_checks():
    with pytest.raises(ValueError):
        AdversaryOracle(9, 4, "odd")
    with pytest.raises(ValueError):
        AdversaryOracle(9, 4, "even", tau=3)
    with pytest.raises(ValueError):
        answer_even(AdversaryOracle(9, 3, "odd"), (1, 2, 3))


def test_reasonable_transform_examples():
    adv = AdversaryOracle(12, 3, "odd")
    q2, plan = reasonable_transform(adv, (1, 2, 3))
    assert q2 == (1, 2, 3) and not plan.pads
    adv.query_partition((1, 2, 3))
    q2, plan = reasonable_transform(adv, (1, 2, 5))
    # 1 and 2 share a component: one is dropped and the smallest fresh item is added
    assert q2 == (1, 4, 5) and len(plan.pads) == 1
    adv.query_partition((1, 2, 5))
    # every original item is now inside a committed component
    assert adv.comp_of[1] == adv.comp_of[2] == adv.comp_of[5]


def test_transcript_answers_follow_commitments():
    for parity, k in (("odd", 3), ("even", 4)):
        adv = AdversaryOracle(30, k, parity)
        random_strategy(3, mess=0.7)(adv)
        assert replay(adv.transcript, consistent_coloring(adv))


def test_extract_refutation_examples():
    adv = AdversaryOracle(6, 3, "odd")
    adv.query_partition((1, 2, 3))
    adv.query_partition((4, 5, 6))
    # two discrepancy-1 components: equal signs give a majority
    x = extract_refutation(adv, None)
    assert x is not None and replay(adv.transcript, x) and None not in acceptable(x)
    x = extract_refutation(adv, 1)
    assert x is not None and 1 not in acceptable(x)
    adv.query_partition((1, 4, 5))
    assert len(adv.components()) == 1
    assert extract_refutation(adv, partition_majority_improved(adv)) is None


def test_three_components_element_refuted():
    adv = AdversaryOracle(9, 3, "odd")
    for q in [(1, 2, 3), (4, 5, 6), (7, 8, 9)]:
        adv.query_partition(q)
    for i in range(1, 10):
        x = extract_refutation(adv, i)
        assert x is not None and replay(adv.transcript, x) and i not in acceptable(x)
        assert x[0] == 0


def test_refutation_matches_brute_force():
    checked = 0
    for k in (3, 4, 5, 6):
        parity = "odd" if k % 2 else "even"
        for n in range(k + 1, 22):
            for algo in [truncated_dmk] + [random_strategy(s, m) for s in range(3) for m in (0.2, 0.6)]:
                adv = AdversaryOracle(n, k, parity)
                answer = algo(adv)
                if len(adv.comps) > 20:
                    continue
                for claim in {answer, None, 1, n}:
                    ref = extract_refutation(adv, claim)
                    assert (ref is not None) == brute_refutable(adv, claim)
                    if ref is not None:
                        assert replay(adv.transcript, ref)
                        assert claim not in acceptable(ref)
                    checked += 1
    assert checked > 500


def test_refutation_prefers_small_total():
    adv = AdversaryOracle(9, 3, "odd")
    for q in [(1, 2, 3), (4, 5, 6), (7, 8, 9)]:
        adv.query_partition(q)
    x = extract_refutation(adv, None)
    assert abs(2 * sum(x) - 9) == 1


def test_corollary_direction():
    # total discrepancy of at least 2 * tau always leaves the answer open
    hits = 0
    for rounds in range(1, 12):
        adv = AdversaryOracle(120, 4, "even")
        for _ in range(rounds):
            roots = sorted(adv.comps, key=lambda c: (-adv.comps[c].discrepancy, c))
            adv.query_partition([adv.comps[c].elements[0] for c in roots[:4]])
        total = sum(c.discrepancy for c in adv.components())
        if total >= 2 * adv.tau:
            hits += 1
            for claim in (None, 1, 120):
                assert extract_refutation(adv, claim) is not None
    assert hits > 0


def test_duel_examples():
    r = duel(partition_majority_improved, "odd", 9, 3)
    assert r.queries_used >= ceil_div(8, 2) and r.verdict == "AlgorithmCorrectForced"
    r = duel(truncated_dmk, "odd", 9, 3)
    assert r.verdict == "AlgorithmRefuted" and replay(r.transcript, r.refuting_coloring)
    r = duel(partition_majority_improved, "even", 64, 4)
    assert r.tau == 4 and r.to_json()["tau"] == 4 and "slack" in r.to_json()
    assert set(r.to_json()) >= {"queries", "bound", "answer", "refuted"}


def test_runaway_cap():
    def stubborn(oracle):
        while True:
            oracle.query_partition((1, 2, 3))

    with pytest.raises(RunawayError):
        duel(stubborn, "odd", 10, 3)


def test_count_algorithm_is_served():
    for n, k in ((15, 3), (20, 4), (30, 5)):
        r = duel(find_majority_count, "odd" if k % 2 else "even", n, k)
        assert not r.refuted and replay(r.transcript, r.extracted_coloring)


def test_odd_lower_bound_witness():
    for k in (3, 5, 7):
        for n in range(k + 1, 61):
            for algo in (dmk_partition_majority, partition_majority_improved, find_majority_count):
                r = duel(algo, "odd", n, k)
                assert not r.refuted
                assert r.queries_used >= ceil_div(n - 1, k - 1)


def test_odd_discrepancy_one_law():
    for seed in range(40):
        adv = AdversaryOracle(45, 5, "odd")
        random_strategy(seed, mess=0.5)(adv)
        for e in adv.events:
            if e.other_nonzero > 0:
                assert e.discrepancy == 1


def test_even_size_laws():
    for k in (4, 6):
        for seed in range(25):
            adv = AdversaryOracle(150, k, "even")
            random_strategy(seed, mess=0.4)(adv)
            for e in adv.events:
                assert e.discrepancy <= adv.tau
                if e.discrepancy and e.other_nonzero:
                    assert e.size >= k ** math.log2(e.discrepancy) - 1e-9
                if e.discrepancy == 0 and e.merged_discrepancies:
                    assert len(set(e.merged_discrepancies)) == 1
                    assert 2 * e.merged_discrepancies[0] > adv.tau
                    assert e.size > 2 * k ** math.log2(adv.tau / 2)


def test_strategy_error_is_assertion():
    assert issubclass(StrategyError, AssertionError)
