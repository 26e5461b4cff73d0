"""Duel majority algorithms against the lower-bound adversaries.

Run with:  python3 demos/adversary_duel.py
"""
from kmajority.adversary import duel, random_strategy, truncated_dmk
from kmajority.oracle import replay
from kmajority.partition_majority import partition_majority_improved
from kmajority.setcore import coloring_to_str

# Odd k: the merge-blocks algorithm is forced to use ceil((n-1)/(k-1)) queries.
for n in (9, 25, 49):
    r = duel(partition_majority_improved, "odd", n, 3)
    print(f"odd  k=3 n={n:3d}  queries={r.queries_used:3d}  bound={r.bound}  {r.verdict}")

# Stopping one query early is always caught: the adversary shows a coloring
# that agrees with every answer but not with the guess.
r = duel(truncated_dmk, "odd", 25, 3)
print("truncated guess", r.algorithm_answer, "refuted by", coloring_to_str(r.refuting_coloring))
print("refutation replays the transcript:", replay(r.transcript, r.refuting_coloring))

# Even k: discrepancies stay at most tau; zero components appear only when
# equal large discrepancies meet.
for seed in range(3):
    r = duel(random_strategy(seed), "even", 128, 4)
    print(f"even k=4 n=128 tau={r.tau} random strategy {seed}: queries={r.queries_used} "
          f"slack={r.slack:+.2f} {r.verdict}")
