"""Majority finding with count queries.

For ``n >= 2k - 1`` the algorithm runs four stages:

1. find a k-set U whose count is known (unbalanced when k is odd),
2. swap items in and out of U to find a homogeneous k-set H,
3. graft blocks of at most k // 2 items into H to learn count([n]),
4. binary-search an inhomogeneous block if H's color is the minority.

Smaller ``n`` is handled by a pair-substitution search for an unbalanced
set followed by a spanning-tree labeling of all of ``[n]``, and ``n = k + 1``
by comparing leave-one-out counts. ``k = 2`` goes to the pairing recursion
in :mod:`kmajority.partition_majority`.

Subroutines that discover an unbalanced set abort their callers; this is
modelled with the private ``_Thrown`` exception and surfaced by the public
wrappers as an :class:`UnbalancedWitness` return value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .errors import InfeasibleInstanceError, InvalidStateError
from .oracle import Oracle
from .parity import ParityUnionFind
from .setcore import NO_MAJORITY, IndexSet, MajorityAnswer, graft, span


@dataclass(frozen=True)
class KnownCount:
    """A k-set together with its count, queried or inferred."""

    set: IndexSet
    known_count: int
    queried: bool = True


@dataclass(frozen=True)
class UnbalancedWitness(KnownCount):
    """A k-set known to be unbalanced."""


@dataclass(frozen=True)
class HomogeneousWitness:
    set: IndexSet


@dataclass(frozen=True)
class CountSummary:
    total_count: int
    h_in_majority: bool
    opposite: int
    # (I, block, count(I)) for the first block with a nonzero answer
    inhomogeneous_block: Optional[Tuple[IndexSet, IndexSet, int]] = None


class _Thrown(Exception):
    def __init__(self, witness: UnbalancedWitness):
        super().__init__(witness)
        self.witness = witness


class CountSession:
    """Count queries against one oracle, memoized so no set is paid for twice."""

    def __init__(self, oracle: Oracle):
        if not oracle.allows_count:
            raise InvalidStateError("count-query algorithms need an oracle that answers count")
        self.oracle = oracle
        self.n, self.k = oracle.params()
        self.half = self.k // 2
        self.memo: Dict[IndexSet, int] = {}

    @property
    def queries_used(self) -> int:
        return self.oracle.queries_used

    def count(self, q: IndexSet) -> int:
        c = self.memo.get(q)
        if c is None:
            c = self.memo[q] = self.oracle.query_count(q)
        return c

    def check(self, q: IndexSet) -> int:
        """Query ``q`` and throw it onward if it turns out unbalanced."""
        c = self.count(q)
        if c != self.half:
            raise _Thrown(UnbalancedWitness(q, c))
        return c


def _session(oracle: Union[Oracle, CountSession]) -> CountSession:
    return oracle if isinstance(oracle, CountSession) else CountSession(oracle)


def _smallest_outside(pool: Iterable[int], exclude, m: int) -> IndexSet:
    out = []
    for x in pool:
        if x not in exclude:
            out.append(x)
            if len(out) == m:
                return tuple(out)
    raise InfeasibleInstanceError(f"cannot find {m} fresh items outside {sorted(exclude)}")


def _swap(s: IndexSet, i: int, j: int) -> IndexSet:
    return tuple(sorted([x for x in s if x != i] + [j]))


def _replace(s: IndexSet, out: Iterable[int], into: Iterable[int]) -> IndexSet:
    out = set(out)
    return tuple(sorted([x for x in s if x not in out] + list(into)))


# -- stage 1: an unbalanced (or at least counted) k-set ---------------------


def _unbalanced_even(s: CountSession, pool: IndexSet, derive_final: bool) -> None:
    k = s.k
    b = tuple(pool[:k])
    h: IndexSet = (b[0],)
    while True:
        if 2 * len(h) > k:
            # B holds the homogeneous H, which is more than half of B
            if derive_final:
                raise _Thrown(UnbalancedWitness(b, -1, queried=False))
            c = s.count(b)
            if c == s.half:
                raise InvalidStateError(f"oracle calls {b} balanced although it cannot be")
            raise _Thrown(UnbalancedWitness(b, c))
        s.check(b)
        q = _smallest_outside(pool, set(b), len(h))
        s.check(_replace(b, h, q))
        h = tuple(sorted(h + q))
        b = graft(b, h)


def find_unbalanced_even(oracle, pool: Optional[Iterable[int]] = None) -> UnbalancedWitness:
    """Grow a homogeneous H inside a balanced B until B must be unbalanced.

    Needs even k and at least 3k/2 items in ``pool`` (default ``[n]``).
    Uses at most 2*ceil(log2 k) + 1 queries.
    """
    s = _session(oracle)
    if s.k % 2:
        raise ValueError("find_unbalanced_even needs even k")
    pool = tuple(sorted(pool)) if pool is not None else span(s.n)
    if 2 * len(pool) < 3 * s.k:
        raise InfeasibleInstanceError(f"need at least 3k/2 items, have {len(pool)}")
    try:
        _unbalanced_even(s, pool, derive_final=False)
    except _Thrown as t:
        return t.witness
    raise AssertionError("unreachable")


def _star(s: CountSession, j: int) -> None:
    k = s.k
    base = span(k)
    s.check(base)
    for i in range(1, (k + 3) // 2 + 1):
        s.check(base[:i - 1] + base[i:] + (j,))


def star(oracle, j: int) -> Optional[UnbalancedWitness]:
    """Swap ``j`` against the first (k+3)/2 members of [k].

    Returns an unbalanced witness, or None when every swap stayed balanced,
    which certifies that j has the minority color of [k].
    """
    s = _session(oracle)
    if s.k % 2 == 0 or s.k < 3:
        raise ValueError("star needs odd k >= 3")
    if not s.k < j <= s.n:
        raise ValueError(f"star needs k < j <= n, got j={j}")
    try:
        _star(s, j)
    except _Thrown as t:
        return t.witness
    return None


def _multiply(s: CountSession, p: IndexSet, m: int, pool: IndexSet) -> IndexSet:
    if m == 1:
        return p
    base = span(s.k)
    s.check(graft(base, p))
    q = _smallest_outside(pool, set(p), len(p))
    s.check(graft(base, q))
    r = _multiply(s, tuple(sorted(p + q)), m // 2, pool)
    if m % 2 == 0:
        return r
    extra = _smallest_outside(pool, set(r), len(p))
    s.check(graft(base, extra))
    return tuple(sorted(r + extra))


def multiply(oracle, p: Iterable[int], m: int,
             pool: Optional[Iterable[int]] = None) -> Union[UnbalancedWitness, IndexSet]:
    """Turn an L-heavy set P outside [k] into an L-heavy set of size m*|P|.

    Assumes [k] is balanced. Fresh items come from ``pool`` (default
    k+1..n), smallest first. Returns the grown set or an unbalanced witness;
    at most 3*log2(m) queries.
    """
    s = _session(oracle)
    p = tuple(sorted(p))
    if len(p) % 2 or m < 1 or m * len(p) > s.k or (p and p[0] <= s.k):
        raise ValueError("multiply needs even |P| outside [k] and m*|P| <= k")
    pool = tuple(sorted(pool)) if pool is not None else tuple(range(s.k + 1, s.n + 1))
    try:
        return _multiply(s, p, m, pool)
    except _Thrown as t:
        return t.witness


def _unbalanced_odd(s: CountSession) -> None:
    k = s.k
    _star(s, k + 1)
    _star(s, k + 2)
    y = (k + 1, k + 2)
    z = _multiply(s, y, (k - 1) // 2, tuple(range(k + 1, s.n + 1)))
    s.check((1,) + z)
    s.check((2,) + z)
    # 1 and 2 are now known to be in M, and Y lies in L
    raise _Thrown(UnbalancedWitness(tuple(range(3, k + 1)) + y, (k - 3) // 2, queried=False))


def find_unbalanced_odd(oracle) -> UnbalancedWitness:
    """Unbalanced k-set for odd k >= 3 and n >= 2k - 1.

    Two ``star`` calls certify k+1, k+2 in L, ``multiply`` grows them to a
    (k-1)-set, and two more queries identify two members of M. At most
    k + 3*log2(k) + 3 queries.
    """
    s = _session(oracle)
    if s.k % 2 == 0 or s.k < 3:
        raise ValueError("find_unbalanced_odd needs odd k >= 3")
    if s.n < 2 * s.k - 1:
        raise InfeasibleInstanceError(f"need n >= 2k-1 = {2 * s.k - 1}, have {s.n}")
    try:
        _unbalanced_odd(s)
    except _Thrown as t:
        return t.witness
    raise AssertionError("unreachable")


def _small_n_unbalanced_odd(s: CountSession) -> None:
    k = s.k
    _star(s, k + 1)
    _star(s, k + 2)
    q = (k + 1, k + 2)
    base = span(k)
    pairs = [(2 * t - 1, 2 * t) for t in range(1, k // 2 + 1)]
    for pair in pairs:
        s.check(_replace(base, pair, q))
    m = k
    i, j = pairs[0]
    s.check(_replace(base, (i, m), q))
    raise _Thrown(UnbalancedWitness(_replace(base, (j, m), q), (k - 3) // 2, queried=False))


def small_n_unbalanced_odd(oracle) -> UnbalancedWitness:
    """Unbalanced k-set for odd k when only n >= k + 2 items exist.

    After the two ``star`` calls, swaps the pair {k+1, k+2} against disjoint
    pairs of [k]; if all stay balanced each pair mixes M and L, and the
    leftover item pairs with one of them inside M.
    """
    s = _session(oracle)
    if s.k % 2 == 0 or s.k < 3:
        raise ValueError("small_n_unbalanced_odd needs odd k >= 3")
    if s.n < s.k + 2:
        raise InfeasibleInstanceError(f"need n >= k+2 = {s.k + 2}, have {s.n}")
    try:
        _small_n_unbalanced_odd(s)
    except _Thrown as t:
        return t.witness
    raise AssertionError("unreachable")


# -- swap labeling shared by stage 2 and the small-n finish ----------------


def _swap_classes(s: CountSession, u: IndexSet, count_u: int,
                  v: IndexSet) -> Tuple[List[int], List[int]]:
    """Split U | V into two color classes using queries of the form U_i^j.

    count(U_i^j) == count(U) exactly when x_i == x_j, provided U is
    unbalanced, or balanced with even k. Edges whose swap set was already
    queried are used for free first; a double star (u0 to all of V, v0 to
    the rest of U) completes the spanning tree.
    """
    uf = ParityUnionFind(u + v)
    uset, vset = set(u), set(v)
    for q, c in list(s.memo.items()):
        gone = uset.difference(q)
        if len(gone) != 1:
            continue
        came = [x for x in q if x not in uset]
        if len(came) == 1 and came[0] in vset:
            uf.union(gone.pop(), came[0], c != count_u)
    u0, v0 = u[0], v[0]
    edges = [(u0, j) for j in v] + [(i, v0) for i in u[1:]]
    for i, j in edges:
        if not uf.connected(i, j):
            uf.union(i, j, s.count(_swap(u, i, j)) != count_u)
    return uf.classes(u0)


def find_homogeneous(oracle, witness: KnownCount) -> HomogeneousWitness:
    """Find k items of one color from a k-set U with known count.

    U must be unbalanced for odd k; for even k any counted U works.
    Uses 2k - 2 queries (fewer only when some swap sets were already asked).
    """
    s = _session(oracle)
    u = tuple(witness.set)
    if len(u) != s.k:
        raise ValueError("witness must be a k-set")
    if s.n < 2 * s.k - 1:
        raise InfeasibleInstanceError(f"need n >= 2k-1 = {2 * s.k - 1}, have {s.n}")
    v = _smallest_outside(range(1, s.n + 1), set(u), s.k - 1)
    a, b = _swap_classes(s, u, witness.known_count, v)
    big = a if len(a) >= len(b) else b
    return HomogeneousWitness(tuple(big[:s.k]))


# -- stages 3 and 4 --------------------------------------------------------


def count_all(oracle, h: HomogeneousWitness) -> CountSummary:
    """Learn count([n]) by grafting blocks of k // 2 outside items into H.

    Each answer is the number of block items colored unlike H. Uses
    ceil((n - k) / (k // 2)) queries.
    """
    s = _session(oracle)
    hs = tuple(h.set)
    inside = set(hs)
    rest = [i for i in range(1, s.n + 1) if i not in inside]
    step = s.k // 2
    opposite = 0
    block = None
    for start in range(0, len(rest), step):
        part = tuple(rest[start:start + step])
        # part is disjoint from H, so H graft part keeps H's smallest members
        probe = tuple(sorted(hs[:s.k - len(part)] + part))
        a = s.count(probe)
        opposite += a
        if a and block is None:
            block = (probe, part, a)
    same = s.n - opposite
    return CountSummary(min(opposite, same), same > opposite, opposite, block)


def binary_search_majority(oracle, h: HomogeneousWitness, summary: CountSummary) -> int:
    """Halve an inhomogeneous block until only items unlike H remain."""
    s = _session(oracle)
    if (summary.h_in_majority or 2 * summary.total_count == s.n
            or summary.inhomogeneous_block is None):
        raise InvalidStateError("binary search needs H in the minority and a nonzero block")
    hs = tuple(h.set)
    _, u, c = summary.inhomogeneous_block
    while len(u) > c:
        half = u[:len(u) // 2]
        r = s.count(graft(hs, half))
        if r:
            u, c = half, r
        else:
            u = u[len(half):]
    return u[0]


# -- small n ---------------------------------------------------------------


def small_n_finish(oracle, witness: KnownCount) -> MajorityAnswer:
    """Label every item against U with one swap query per spanning-tree edge.

    Works for k + 1 < n < 2k - 1 given an unbalanced U (odd k) or U = [k]
    with its count (even k). Uses at most n - 1 further queries.
    """
    s = _session(oracle)
    n, k = s.n, s.k
    if not k + 1 < n < 2 * k - 1:
        raise InvalidStateError(f"small_n_finish needs k+1 < n < 2k-1, got n={n}, k={k}")
    u = tuple(witness.set)
    v = tuple(i for i in range(1, n + 1) if i not in set(u))
    a, b = _swap_classes(s, u, witness.known_count, v)
    if len(a) == len(b):
        return NO_MAJORITY
    return (a if len(a) > len(b) else b)[0]


def n_equals_k_plus_1(oracle) -> MajorityAnswer:
    """Compare leave-one-out counts when n = k + 1.

    Without a tie, leaving out a minority item gives a strictly smaller
    count than leaving out a majority item. When the first q + 1 probes all
    match count([k]) = q, item n is in the majority unless a tie is still
    possible (n even and q = n/2 - 1); one more probe settles that case.
    """
    s = _session(oracle)
    n, k = s.n, s.k
    if n != k + 1:
        raise InvalidStateError(f"n_equals_k_plus_1 needs n = k + 1, got n={n}, k={k}")
    base = span(k)
    q = s.count(base)
    for i in range(1, q + 2):
        qi = s.count(base[:i - 1] + base[i:] + (n,))
        if qi > q:
            return i
        if qi < q:
            return n
    if n % 2 or 2 * (q + 1) != n:
        return n
    i = q + 2
    qi = s.count(base[:i - 1] + base[i:] + (n,))
    return n if qi < q else NO_MAJORITY


# -- dispatcher ------------------------------------------------------------


def _stage_one(s: CountSession) -> KnownCount:
    k = s.k
    if k % 2 == 0:
        base = span(k)
        return KnownCount(base, s.count(base))
    try:
        _unbalanced_odd(s)
    except _Thrown as t:
        return t.witness
    raise AssertionError("unreachable")


def find_majority_count(oracle: Oracle) -> MajorityAnswer:
    """Majority item (or None on a tie) using count queries only.

    For n >= 2k - 1 the query count is at most n / (k // 2) + 3k + 4 log2 k.
    """
    n, k = oracle.params()
    if n <= k or k < 2:
        raise ValueError(f"need n > k >= 2, got n={n}, k={k}")
    if k == 2:
        from .partition_majority import pair_recursion_k2
        return pair_recursion_k2(oracle)
    s = CountSession(oracle)
    if n == k + 1:
        return n_equals_k_plus_1(s)
    if n < 2 * k - 1:
        if k % 2:
            try:
                _small_n_unbalanced_odd(s)
            except _Thrown as t:
                u: KnownCount = t.witness
        else:
            u = KnownCount(span(k), s.count(span(k)))
        return small_n_finish(s, u)
    u = _stage_one(s)
    h = find_homogeneous(s, u)
    summary = count_all(s, h)
    if 2 * summary.total_count == n:
        return NO_MAJORITY
    if summary.h_in_majority:
        return h.set[0]
    return binary_search_majority(s, h, summary)


def count_query_bound(n: int, k: int) -> float:
    """Query budget the count algorithm is held to for (n, k)."""
    if k == 2:
        return n - bin(n).count("1")
    if n == k + 1:
        return (k + 4) / 2
    if n < 2 * k - 1:
        if k % 2:
            return (3 * k + 3) / 2 + (n - 1)
        return n
    return n / (k // 2) + 3 * k + 4 * math.log2(k)
