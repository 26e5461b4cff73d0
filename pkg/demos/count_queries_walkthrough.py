"""Walk through the count-query algorithm on one hidden coloring.

Run with:  python3 demos/count_queries_walkthrough.py
"""
from kmajority.count_majority import (CountSession, count_all, count_query_bound,
                                      find_homogeneous, find_majority_count,
                                      find_unbalanced_odd)
from kmajority.oracle import HonestOracle
from kmajority.rng import SplitMix64
from kmajority.setcore import coloring_to_str, majority_truth

n, k = 40, 5
hidden = SplitMix64(2024).coloring(n)
print("hidden coloring   ", coloring_to_str(hidden))
print("ones / zeros      ", sum(hidden), n - sum(hidden))

# Run the stages one at a time on a shared session so repeated sets are free.
oracle = HonestOracle(hidden, k, mode="count")
session = CountSession(oracle)

u = find_unbalanced_odd(session)  # stage 1
print("unbalanced set U  ", u.set, "count", u.known_count, "after", oracle.queries_used, "queries")

h = find_homogeneous(session, u)  # stage 2
print("homogeneous set H ", h.set, "color", hidden[h.set[0] - 1], "after", oracle.queries_used, "queries")

summary = count_all(session, h)  # stage 3
print("count([n])        ", summary.total_count, "H in majority:", summary.h_in_majority,
      "after", oracle.queries_used, "queries")

# The one-call version does all of that plus the final binary search.
fresh = HonestOracle(hidden, k, mode="count")
answer = find_majority_count(fresh)
print("answer            ", answer, "color", hidden[answer - 1] if answer else None,
      "truth", majority_truth(hidden))
print("queries used      ", fresh.queries_used, "budget", round(count_query_bound(n, k), 2))

# The transcript is a plain JSON-lines log.
print(fresh.transcript.to_jsonl().splitlines()[0])
