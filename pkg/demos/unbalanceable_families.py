"""Build families of k-sets that no 2-coloring balances, and check them.

Run with:  python3 demos/unbalanceable_families.py
"""
from kmajority.families import (family_even, family_odd, family_three_sets,
                                verify_unbalanceable)

for k in (2, 4, 8, 12):
    fam = family_even(k)
    print(f"even k={k:2d}: {len(fam):2d} sets over {fam.ground_size:2d} items ->",
          type(verify_unbalanceable(fam)).__name__)

for k in (3, 5, 7, 9):
    fam = family_odd(k)
    print(f"odd  k={k:2d}: {len(fam):2d} sets over {fam.ground_size:2d} items ->",
          type(verify_unbalanceable(fam)).__name__)

for k in (2, 6, 10):
    fam = family_three_sets(k)
    print(f"three sets k={k:2d}:", fam.sets[0], "...", type(verify_unbalanceable(fam)).__name__)

# Without its last set, the simulated family can be balanced.
fam = family_even(8)
print("family_even(8) minus its final set:", verify_unbalanceable(fam.without_last()))
