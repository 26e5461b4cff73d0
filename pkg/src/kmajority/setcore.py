"""Index-set algebra and two-coloring semantics.

Items are numbered 1..n. An index set is a strictly increasing tuple of
item numbers; a coloring is a tuple of 0/1 values where item ``i`` has
color ``coloring[i - 1]``. A majority answer is either an item number or
``None`` for an exact tie.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

IndexSet = Tuple[int, ...]
Coloring = Tuple[int, ...]
MajorityAnswer = Optional[int]

NO_MAJORITY: MajorityAnswer = None


def index_set(items: Iterable[int]) -> IndexSet:
    """Build a sorted duplicate-free index set, rejecting non-positive items."""
    out = tuple(sorted(set(items)))
    if out and out[0] < 1:
        raise ValueError(f"item indices are 1-based, got {out[0]}")
    return out


def span(m: int) -> IndexSet:
    """The set [m] = {1, ..., m}."""
    return tuple(range(1, m + 1))


def coloring_from_str(bits: str) -> Coloring:
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"coloring must be a nonempty 0/1 string, got {bits!r}")
    return tuple(int(b) for b in bits)


def coloring_to_str(coloring: Sequence[int]) -> str:
    return "".join(str(b) for b in coloring)


def substitute(s: IndexSet, i: int, j: int) -> IndexSet:
    """Replace ``i`` by ``j`` in ``s``."""
    if i not in s or j in s:
        raise ValueError(f"substitute needs {i} in S and {j} not in S")
    return tuple(sorted([x for x in s if x != i] + [j]))


def substitute_set(s: IndexSet, a: Iterable[int], b: Iterable[int]) -> IndexSet:
    """Return (S minus A) union B, for A inside S and B disjoint from S."""
    a, b = set(a), set(b)
    ss = set(s)
    if not a <= ss or b & ss:
        raise ValueError("substitute_set needs A within S and B disjoint from S")
    return tuple(sorted((ss - a) | b))


def graft(s: IndexSet, t: Iterable[int]) -> IndexSet:
    """S graft T: swap the largest members of S - T out for the members of T - S.

    The result has the size of S, contains T and lies inside S | T.
    """
    t = set(t)
    if len(s) < len(t):
        raise ValueError(f"graft needs |S| >= |T|, got {len(s)} < {len(t)}")
    incoming = t.difference(s)
    if not incoming:
        return s
    removable = [x for x in s if x not in t]
    drop = set(removable[len(removable) - len(incoming):])
    return tuple(sorted([x for x in s if x not in drop] + list(incoming)))


def graft_one(s: IndexSet, t: int) -> IndexSet:
    return graft(s, (t,))


def _ones(q: Iterable[int], coloring: Sequence[int]) -> Tuple[int, int]:
    n = len(coloring)
    ones = size = 0
    for i in q:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} outside [1, {n}]")
        ones += coloring[i - 1]
        size += 1
    if size == 0:
        raise ValueError("query set must be nonempty")
    return ones, size


def count_of(q: Iterable[int], coloring: Sequence[int]) -> int:
    """Size of the smaller color class within ``q``."""
    ones, size = _ones(q, coloring)
    return min(ones, size - ones)


def discrepancy_of(q: Iterable[int], coloring: Sequence[int]) -> int:
    ones, size = _ones(q, coloring)
    return abs(2 * ones - size)


def is_balanced(q: Iterable[int], coloring: Sequence[int]) -> bool:
    return discrepancy_of(q, coloring) <= 1


@dataclass(frozen=True)
class PartitionPair:
    """Unlabeled split of a query into its two monochromatic classes.

    Stored canonically (the side holding the smallest element comes first,
    an empty side last) so that ``==`` ignores which side is which.
    """

    side_a: IndexSet
    side_b: IndexSet

    def __post_init__(self):
        a, b = tuple(sorted(self.side_a)), tuple(sorted(self.side_b))
        if set(a) & set(b):
            raise ValueError("partition sides must be disjoint")
        if not a or (b and b[0] < a[0]):
            a, b = b, a
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @property
    def sizes(self) -> Tuple[int, int]:
        return len(self.side_a), len(self.side_b)

    def union(self) -> IndexSet:
        return tuple(sorted(self.side_a + self.side_b))

    def as_lists(self):
        return [list(self.side_a), list(self.side_b)]


def partition_of(q: Iterable[int], coloring: Sequence[int]) -> PartitionPair:
    q = list(q)
    _ones(q, coloring)
    zeros = [i for i in q if coloring[i - 1] == 0]
    ones = [i for i in q if coloring[i - 1] == 1]
    return PartitionPair(tuple(zeros), tuple(ones))


def classify_ml(coloring: Sequence[int], k: int) -> Tuple[IndexSet, IndexSet]:
    """Split [n] into M (same color as the majority of [k]) and L (the rest).

    Analysis-side helper for tests; algorithms never see it.
    """
    if k % 2 == 0:
        raise ValueError("M/L classification needs odd k")
    if k > len(coloring):
        raise ValueError("k exceeds n")
    major = 1 if 2 * sum(coloring[:k]) > k else 0
    m = tuple(i for i, x in enumerate(coloring, 1) if x == major)
    l = tuple(i for i, x in enumerate(coloring, 1) if x != major)
    return m, l


def majority_truth(coloring: Sequence[int]) -> MajorityAnswer:
    """Ground truth: smallest majority-colored item, or ``None`` on a tie."""
    ones = sum(coloring)
    zeros = len(coloring) - ones
    if ones == zeros:
        return NO_MAJORITY
    major = 1 if ones > zeros else 0
    return coloring.index(major) + 1


def is_correct_answer(coloring: Sequence[int], answer: MajorityAnswer) -> bool:
    """Accept any item of the strict majority color; ``None`` only on a tie."""
    ones = sum(coloring)
    zeros = len(coloring) - ones
    if answer is None:
        return ones == zeros
    if not 1 <= answer <= len(coloring) or ones == zeros:
        return False
    return (coloring[answer - 1] == 1) == (ones > zeros)
