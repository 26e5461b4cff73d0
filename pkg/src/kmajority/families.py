"""Families of k-sets that no 2-coloring balances all at once.

The even and odd constructions replay the unbalanced-set searches against
an oracle that calls every set balanced: the sets it was asked about, plus
the final set the search concludes must be unbalanced, form a family that
no coloring can balance. For k = 2 (mod 4) three sets suffice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .count_majority import CountSession, _Thrown, _unbalanced_even, _unbalanced_odd
from .errors import CapacityError
from .oracle import AlwaysBalancedOracle
from .setcore import Coloring, IndexSet, span

MAX_GROUND = 26
_CHUNK_BITS = 20


@dataclass(frozen=True)
class SetFamily:
    k: int
    ground_size: int
    sets: Tuple[IndexSet, ...]

    def __post_init__(self):
        for s in self.sets:
            if len(set(s)) != self.k:
                raise ValueError(f"family member {s} does not have k={self.k} items")
            if min(s) < 1 or max(s) > self.ground_size:
                raise ValueError(f"family member {s} leaves [1, {self.ground_size}]")

    def __len__(self) -> int:
        return len(self.sets)

    def without_last(self) -> "SetFamily":
        return SetFamily(self.k, self.ground_size, self.sets[:-1])

    def to_json(self) -> dict:
        return {"k": self.k, "ground": self.ground_size, "sets": [list(s) for s in self.sets]}


@dataclass(frozen=True)
class Confirmed:
    """No coloring balances every member."""


@dataclass(frozen=True)
class Witness:
    """A coloring that balances every member."""

    coloring: Coloring


Verdict = Union[Confirmed, Witness]


def _simulate(k: int, ground: int, run) -> SetFamily:
    oracle = AlwaysBalancedOracle(ground, k)
    session = CountSession(oracle)
    try:
        run(session)
    except _Thrown as t:
        final = t.witness.set
    else:
        raise AssertionError("an always-balanced oracle must end in a thrown set")
    sets = list(oracle.transcript.queries) + [tuple(sorted(final))]
    used = max(max(s) for s in sets)
    return SetFamily(k, used, tuple(sets))


def family_even(k: int) -> SetFamily:
    """At most 2*ceil(log2 k) + 1 sets over at most ceil(3k/2) items."""
    if k < 2 or k % 2:
        raise ValueError(f"family_even needs even k >= 2, got {k}")
    ground = -(-3 * k // 2)
    return _simulate(k, ground, lambda s: _unbalanced_even(s, span(ground), derive_final=True))


def family_odd(k: int) -> SetFamily:
    """At most k + 3*ceil(log2 k) + 4 sets over at most 2k - 1 items."""
    if k < 3 or k % 2 == 0:
        raise ValueError(f"family_odd needs odd k >= 3, got {k}")
    return _simulate(k, 2 * k - 1, _unbalanced_odd)


def family_three_sets(k: int) -> SetFamily:
    """P+Q, Q+R, P+R for consecutive blocks P, Q, R of k/2 items each."""
    if k % 4 != 2:
        raise ValueError(f"three-set family needs k = 2 (mod 4), got {k}")
    h = k // 2
    p, q, r = span(h), tuple(range(h + 1, 2 * h + 1)), tuple(range(2 * h + 1, 3 * h + 1))
    return SetFamily(k, 3 * h, (p + q, q + r, p + r))


def even_family_bound(k: int) -> int:
    return 2 * math.ceil(math.log2(k)) + 1


def odd_family_bound(k: int) -> int:
    return k + 3 * math.ceil(math.log2(k)) + 4


def verify_unbalanceable(fam: SetFamily) -> Verdict:
    """Try every 2-coloring of the ground set.

    Colorings are integers whose bit i - 1 is the color of item i, scanned
    in increasing order in numpy chunks; the first one balancing every
    member is returned as the witness.
    """
    g = fam.ground_size
    if g > MAX_GROUND:
        raise CapacityError(f"ground set of {g} items exceeds the limit of {MAX_GROUND}")
    masks = [sum(1 << (x - 1) for x in s) for s in fam.sets]
    total = 1 << g
    step = 1 << min(g, _CHUNK_BITS)
    for start in range(0, total, step):
        codes = np.arange(start, min(start + step, total), dtype=np.uint32)
        ok = np.ones(codes.shape, dtype=bool)
        for m in masks:
            ones = np.bitwise_count(codes & np.uint32(m)).astype(np.int32)
            ok &= np.abs(2 * ones - fam.k) <= 1
        hits = np.flatnonzero(ok)
        if hits.size:
            code = int(codes[hits[0]])
            return Witness(tuple((code >> i) & 1 for i in range(g)))
    return Confirmed()
