"""Majority finding with partition queries.

``dmk_partition_majority`` merges blocks of known relative coloring until
one block covers the ground set, using ceil((N-1)/(k-1)) queries.
``partition_majority_improved`` saves a query for some odd n by leaving the
last item out, and ``pair_recursion_k2`` is the classic pairing scheme for
k = 2 that uses at most n - popcount(n) queries.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from .oracle import Oracle, same_color
from .parity import ParityUnionFind
from .setcore import NO_MAJORITY, IndexSet, MajorityAnswer, PartitionPair, span


class KnowledgeGraph:
    """Blocks of items whose relative colors are known from partition answers."""

    def __init__(self, ground: Iterable[int]):
        self.uf = ParityUnionFind()
        self.members: Dict[int, List[int]] = {}
        for x in ground:
            self.uf.add(x)
            self.members[x] = [x]

    @property
    def blocks(self) -> List[List[int]]:
        return list(self.members.values())

    def block_of(self, x: int) -> List[int]:
        return self.members[self.uf.find(x)[0]]

    def absorb(self, answer: PartitionPair) -> int:
        """Merge everything the answer connects; returns how many blocks vanished."""
        side = {x: 0 for x in answer.side_a}
        side.update({x: 1 for x in answer.side_b})
        items = sorted(side)
        first = items[0]
        merged = 0
        for x in items[1:]:
            ra = self.uf.find(first)[0]
            rb = self.uf.find(x)[0]
            if self.uf.union(first, x, side[first] != side[x]):
                root = self.uf.find(first)[0]
                gone = rb if root == ra else ra
                self.members[root] = sorted(self.members[ra] + self.members[rb])
                del self.members[gone]
                merged += 1
        return merged

    def classes(self, x: int) -> Tuple[List[int], List[int]]:
        return self.uf.classes(x)

    def schedule(self, k: int) -> IndexSet:
        """Representatives of the k largest blocks, padded from the largest
        blocks when fewer than k blocks are left."""
        order = sorted(self.members.values(), key=lambda b: (-len(b), b[0]))
        picked = [b[0] for b in order[:k]]
        if len(picked) < k:
            for b in order:
                for x in b[1:]:
                    if len(picked) == k:
                        break
                    picked.append(x)
        return tuple(sorted(picked))


def dmk_partition_majority(oracle: Oracle, ground: Optional[Iterable[int]] = None) -> MajorityAnswer:
    """Merge-blocks majority over ``ground`` (default ``[n]``).

    Every query takes one item from each of k distinct blocks, so the block
    count drops by k - 1 per query until one block remains.
    """
    n, k = oracle.params()
    ground = tuple(sorted(ground)) if ground is not None else span(n)
    if k < 2:
        raise ValueError("partition queries on single items carry no information")
    if len(ground) < k:
        raise ValueError(f"ground set of {len(ground)} items is smaller than k={k}")
    g = KnowledgeGraph(ground)
    while len(g.members) > 1:
        g.absorb(oracle.query_partition(g.schedule(k)))
    if len(ground) == 1:
        return ground[0]
    same, other = g.classes(ground[0])
    if len(same) == len(other):
        return NO_MAJORITY
    return (same if len(same) > len(other) else other)[0]


def partition_majority_improved(oracle: Oracle) -> MajorityAnswer:
    """For odd n, solve the first n - 1 items and fall back on item n on a tie."""
    n, k = oracle.params()
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    if n % 2 == 0:
        return dmk_partition_majority(oracle)
    answer = dmk_partition_majority(oracle, span(n - 1))
    return n if answer is None else answer


def pair_recursion_k2(oracle: Oracle) -> MajorityAnswer:
    """Pair items, drop mixed pairs, recurse on one representative per pair.

    An item left over at recursion depth d stands for 2**d items of one
    color; the deepest survivor outweighs all shallower ones together, so
    it has the majority color. Works with count or partition queries.
    """
    n, k = oracle.params()
    if k != 2:
        raise ValueError(f"pair recursion needs k = 2, got k={k}")
    items = list(range(1, n + 1))
    leftovers: List[Tuple[int, int]] = []
    depth = 0
    while len(items) > 1:
        if len(items) % 2:
            leftovers.append((depth, items.pop()))
        items = [a for a, b in zip(items[::2], items[1::2]) if same_color(oracle, a, b)]
        depth += 1
    if items:
        leftovers.append((depth, items[0]))
    if not leftovers:
        return NO_MAJORITY
    return max(leftovers)[1]


def partition_query_bound(n: int, k: int) -> int:
    """ceil((n-2)/(k-1)) for odd n, else ceil((n-1)/(k-1))."""
    return -(-(n - 2) // (k - 1)) if n % 2 else -(-(n - 1) // (k - 1))


def pair_recursion_bound(n: int) -> int:
    """n minus the number of one bits of n."""
    return n - bin(n).count("1")
