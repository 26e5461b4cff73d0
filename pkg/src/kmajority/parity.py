"""Union-find that also tracks the relative color parity of merged items."""
from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Tuple


class ParityUnionFind:
    """Disjoint sets where each member carries a parity relative to its root.

    ``union(a, b, differ)`` records that ``a`` and ``b`` have equal colors
    (``differ=False``) or opposite colors (``differ=True``).
    """

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: Dict[Hashable, Hashable] = {}
        self.parity: Dict[Hashable, int] = {}
        self.size: Dict[Hashable, int] = {}
        for x in items:
            self.add(x)

    def add(self, x: Hashable) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0
            self.size[x] = 1

    def find(self, x: Hashable) -> Tuple[Hashable, int]:
        """Return (root, parity of x relative to root)."""
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # compress, accumulating parity from the top of the path down
        acc = 0
        for y in reversed(path):
            acc ^= self.parity[y]
            self.parity[y] = acc
            self.parent[y] = root
        return root, (self.parity[path[0]] if path else 0)

    def union(self, a: Hashable, b: Hashable, differ: bool) -> bool:
        """Merge the sets of ``a`` and ``b``; False if already joined."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            if (pa ^ pb) != int(differ):
                raise ValueError(f"parity conflict between {a} and {b}")
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ int(differ)
        self.size[ra] += self.size[rb]
        return True

    def connected(self, a: Hashable, b: Hashable) -> bool:
        return self.find(a)[0] == self.find(b)[0]

    def classes(self, x: Hashable) -> Tuple[List[Hashable], List[Hashable]]:
        """The two color classes of x's set: (same as x, opposite to x)."""
        root, px = self.find(x)
        same, other = [], []
        for y in self.parent:
            ry, py = self.find(y)
            if ry == root:
                (same if py == px else other).append(y)
        return sorted(same), sorted(other)
