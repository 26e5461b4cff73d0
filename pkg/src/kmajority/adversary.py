"""Adaptive adversaries for the majority problem, and a duel harness.

The adversary answers partition (and count) queries from a committed
relative two-coloring of each component of the query graph. It rewrites
every query into a *reasonable* one: one representative per
nonzero-discrepancy component, padded with items from other components,
and merges all touched components with a sign choice:

* odd k keeps every merged component at discrepancy 1 while more than one
  nonzero component remains;
* even k, with an even threshold tau, takes the smallest nonzero
  discrepancy not above tau, else discrepancy 0.

After the algorithm answers, :func:`extract_refutation` searches the
remaining orientation freedom for a coloring that agrees with every answer
given but contradicts the algorithm's output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from .errors import RunawayError, StrategyError
from .oracle import Oracle, Transcript
from .setcore import Coloring, IndexSet, MajorityAnswer, PartitionPair, coloring_to_str


def achievable_discrepancies(ds: Sequence[int]) -> Set[int]:
    """All values |sum(sign_i * d_i)| over sign choices in {+1, -1}."""
    sums = {0}
    for d in ds:
        sums = {s + d for s in sums} | {s - d for s in sums}
    return {abs(s) for s in sums}


def _lex_signs(ds: Sequence[int], targets: Set[int],
               forced: Optional[Dict[int, int]] = None) -> Optional[List[int]]:
    """Lexicographically first sign vector (+1 before -1) whose signed sum
    lands in ``targets``; ``forced`` pins the sign at some positions."""
    forced = forced or {}
    options = [(forced[j],) if j in forced else (1, -1) for j in range(len(ds))]
    # reach[j]: signed sums attainable by positions j and later
    reach: List[Set[int]] = [set() for _ in range(len(ds) + 1)]
    reach[-1] = {0}
    for j in range(len(ds) - 1, -1, -1):
        reach[j] = {s + sgn * ds[j] for s in reach[j + 1] for sgn in options[j]}
    if not reach[0] & targets:
        return None
    prefix = 0
    signs: List[int] = []
    for j, d in enumerate(ds):
        for sgn in options[j]:
            p = prefix + sgn * d
            if any(t - p in reach[j + 1] for t in targets):
                signs.append(sgn)
                prefix = p
                break
    return signs


@dataclass
class Component:
    """A query-graph component with its committed relative bipartition.

    ``ones`` counts members on side 1; side bits live in the adversary's
    per-item ``side`` table.
    """

    cid: int
    elements: List[int]
    ones: int = 0

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def discrepancy(self) -> int:
        return abs(self.size - 2 * self.ones)

    @property
    def signed(self) -> int:
        """(#side 1) - (#side 0)."""
        return 2 * self.ones - self.size


@dataclass(frozen=True)
class MergeEvent:
    query: IndexSet
    reasonable_query: IndexSet
    merged_discrepancies: Tuple[int, ...]
    discrepancy: int
    size: int
    other_nonzero: int


@dataclass(frozen=True)
class QueryPlan:
    touched: Tuple[int, ...]
    nonzero: Tuple[int, ...]
    zero: Tuple[int, ...]
    pads: Tuple[int, ...]
    reasonable_query: IndexSet
    # too few nonzero components to pad up to k: a final merging query
    passthrough: bool = False


def round_even_tau(n: int, k: int) -> int:
    """n ** (1 / (1 + log2 k)) rounded to the nearest even integer, at least 2."""
    x = n ** (1.0 / (1.0 + math.log2(k)))
    return max(2, 2 * int(math.floor(x / 2 + 0.5)))


class AdversaryOracle(Oracle):
    """Partition/count oracle that keeps the majority open as long as it can."""

    def __init__(self, n: int, k: int, parity: str, tau: Optional[int] = None,
                 cap: Optional[int] = None):
        super().__init__(n, k)
        if parity not in ("odd", "even"):
            raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
        if (k % 2 == 1) != (parity == "odd"):
            raise ValueError(f"{parity} adversary does not fit k={k}")
        if parity == "even":
            tau = round_even_tau(n, k) if tau is None else tau
            if tau < 2 or tau % 2:
                raise ValueError(f"tau must be a positive even integer, got {tau}")
        self.parity = parity
        self.tau = tau
        self.cap = 10 * n if cap is None else cap
        self.side = [0] * (n + 1)
        self.comp_of = list(range(n + 1))
        self.comps: Dict[int, Component] = {i: Component(i, [i]) for i in range(1, n + 1)}
        self.fresh: List[int] = list(range(1, n + 1))
        self.nonzero_count = n
        self.events: List[MergeEvent] = []

    # -- query plumbing ----------------------------------------------------

    def _count(self, q: IndexSet) -> int:
        p = self._answer(q)
        return min(len(p.side_a), len(p.side_b))

    def _partition(self, q: IndexSet) -> PartitionPair:
        return self._answer(q)

    def _answer(self, q: IndexSet) -> PartitionPair:
        if self.queries_used >= self.cap:
            raise RunawayError(f"algorithm exceeded {self.cap} queries")
        plan = self.plan(q)
        if len(plan.touched) > 1 or plan.pads:
            self._merge(q, plan)
        self._touch(q)
        side = self.side
        return PartitionPair(tuple(x for x in q if side[x] == 0),
                             tuple(x for x in q if side[x] == 1))

    def _touch(self, items) -> None:
        gone = set(items)
        if gone.intersection(self.fresh):
            self.fresh = [x for x in self.fresh if x not in gone]

    def plan(self, q: IndexSet) -> QueryPlan:
        """Reasonable rewrite of ``q`` (pure: does not change the state)."""
        touched: List[int] = []
        reps: Dict[int, int] = {}
        for x in q:
            c = self.comp_of[x]
            if c not in reps:
                reps[c] = x
                touched.append(c)
        if len(touched) == 1:
            return QueryPlan(tuple(touched), (), (), (), q)
        nonzero = [c for c in touched if self.comps[c].discrepancy > 0]
        zero = [c for c in touched if self.comps[c].discrepancy == 0]
        need = self.k - len(nonzero)
        pads: List[int] = []
        if need > 0:
            used = set(touched)
            for x in self.fresh:
                if len(pads) == need:
                    break
                c = self.comp_of[x]
                if c not in used:
                    pads.append(c)
                    used.add(c)
            if len(pads) < need:
                rest = sorted((comp.elements[0], c) for c, comp in self.comps.items()
                              if c not in used and comp.discrepancy > 0)
                pads.extend(c for _, c in rest[:need - len(pads)])
        passthrough = len(nonzero) + len(pads) < self.k
        if passthrough:
            rq = q
        else:
            rq = tuple(sorted([reps[c] for c in nonzero]
                              + [self.comps[c].elements[0] for c in pads]))
        return QueryPlan(tuple(touched), tuple(nonzero), tuple(zero), tuple(pads), rq, passthrough)

    # -- strategy ----------------------------------------------------------

    def _target(self, ds: Sequence[int], final: bool) -> int:
        achievable = achievable_discrepancies(ds)
        if self.parity == "odd":
            target = min(achievable)
            if not final and target != 1:
                raise StrategyError(f"odd strategy cannot reach discrepancy 1 from {ds}")
            return target
        small = [a for a in achievable if 0 < a <= self.tau]
        if small:
            return min(small)
        if 0 not in achievable:
            raise StrategyError(f"even strategy: neither a small nonzero nor zero from {ds}")
        return 0

    def _merge(self, q: IndexSet, plan: QueryPlan) -> None:
        merging = list(plan.nonzero) + list(plan.pads)
        self._touch([self.comps[c].elements[0] for c in plan.pads])
        ds = [self.comps[c].discrepancy for c in merging]
        other_nonzero = self.nonzero_count - len(merging)
        target = self._target(ds, final=other_nonzero == 0)
        signs = _lex_signs(ds, {target, -target})
        # sign +1: the component's larger side joins side 0 of the merged one
        flips = {}
        for c, sgn in zip(merging, signs):
            comp = self.comps[c]
            major = 1 if 2 * comp.ones > comp.size else 0
            flips[c] = major != (0 if sgn > 0 else 1)
        for c in plan.zero:
            flips[c] = False
        host_id = min(flips, key=lambda c: self.comps[c].elements[0])
        elements: List[int] = []
        ones = 0
        for c, flip in flips.items():
            comp = self.comps.pop(c)
            for x in comp.elements:
                if flip:
                    self.side[x] ^= 1
                self.comp_of[x] = host_id
                ones += self.side[x]
            elements.extend(comp.elements)
        elements.sort()
        merged = Component(host_id, elements, ones)
        self.comps[host_id] = merged
        d = merged.discrepancy
        if d != target:
            raise StrategyError(f"committed discrepancy {d}, planned {target}")
        self.nonzero_count = other_nonzero + (1 if d else 0)
        event = MergeEvent(q, plan.reasonable_query, tuple(ds), d, merged.size, other_nonzero)
        self.events.append(event)
        self._assert_laws(event)

    def _assert_laws(self, e: MergeEvent) -> None:
        if self.parity == "odd":
            if e.other_nonzero > 0 and e.discrepancy != 1:
                raise StrategyError(f"odd adversary committed discrepancy {e.discrepancy}")
            return
        tau = self.tau
        if e.discrepancy > tau:
            raise StrategyError(f"discrepancy {e.discrepancy} exceeds tau={tau}")
        if e.discrepancy == 0 and e.merged_discrepancies:
            ds = e.merged_discrepancies
            if len(set(ds)) != 1 or 2 * ds[0] <= tau:
                raise StrategyError(f"zero commitment from discrepancies {ds}")
            if e.size <= 2 * self.k ** math.log2(tau / 2):
                raise StrategyError(f"zero component of size {e.size} too small")
        if e.discrepancy > 0 and e.other_nonzero > 0:
            if e.size < self.k ** math.log2(e.discrepancy) - 1e-9:
                raise StrategyError(f"component of discrepancy {e.discrepancy} has only {e.size} items")

    # -- inspection ----------------------------------------------------------

    def components(self) -> List[Component]:
        return sorted(self.comps.values(), key=lambda c: c.elements[0])

    def classes(self, comp: Component) -> Tuple[IndexSet, IndexSet]:
        zero = tuple(x for x in comp.elements if self.side[x] == 0)
        one = tuple(x for x in comp.elements if self.side[x] == 1)
        return zero, one

    def coloring_for(self, signs: Sequence[int]) -> Coloring:
        """Color every component: sign +1 keeps side bits, -1 flips them.
        The result is normalized so that item 1 gets color 0."""
        bits = [0] * (self.n + 1)
        for comp, sgn in zip(self.components(), signs):
            flip = 1 if sgn < 0 else 0
            for x in comp.elements:
                bits[x] = self.side[x] ^ flip
        if bits[1] == 1:
            bits = [1 - b for b in bits]
        return tuple(bits[1:])


def reasonable_transform(adversary: AdversaryOracle, q) -> Tuple[IndexSet, QueryPlan]:
    """The reasonable query the adversary would actually commit to for ``q``."""
    plan = adversary.plan(adversary._validate(q))
    return plan.reasonable_query, plan


def _commit(adversary: AdversaryOracle, parity: str, q) -> PartitionPair:
    if adversary.parity != parity:
        raise ValueError(f"{adversary.parity} adversary cannot run the {parity} strategy")
    return adversary._answer(adversary._validate(q))


def answer_odd(adversary: AdversaryOracle, q) -> PartitionPair:
    """Commit and answer ``q`` under the odd strategy, outside the transcript."""
    return _commit(adversary, "odd", q)


def answer_even(adversary: AdversaryOracle, q) -> PartitionPair:
    """Commit and answer ``q`` under the even strategy, outside the transcript."""
    return _commit(adversary, "even", q)


def extract_refutation(adversary: AdversaryOracle, answer: MajorityAnswer) -> Optional[Coloring]:
    """A coloring agreeing with every commitment but contradicting ``answer``.

    Searches component orientations for the refutation of smallest total
    discrepancy, ties broken by the lexicographically first sign vector.
    Returns None when the answer is forced.
    """
    comps = adversary.components()
    es = [c.signed for c in comps]
    total_bound = sum(abs(e) for e in es)
    if answer is None:
        for t in range(1, total_bound + 1):
            signs = _lex_signs(es, {t, -t})
            if signs is not None:
                return adversary.coloring_for(signs)
        return None
    where = next(j for j, c in enumerate(comps) if answer in c.elements)
    bit = adversary.side[answer]
    best = None
    for sgn in (1, -1):
        # color of the claimed item under this orientation
        color = bit ^ (1 if sgn < 0 else 0)
        # refuted when the total is a tie or leans to the other color
        for t in range(0, total_bound + 1):
            bad = {0} if t == 0 else ({-t} if color == 1 else {t})
            signs = _lex_signs(es, bad, forced={where: sgn})
            if signs is not None:
                key = (t, [s < 0 for s in signs])
                if best is None or key < best[0]:
                    best = (key, signs)
                break
    if best is None:
        return None
    return adversary.coloring_for(best[1])


def consistent_coloring(adversary: AdversaryOracle) -> Coloring:
    """Some coloring that agrees with every commitment (all signs +1)."""
    return adversary.coloring_for([1] * len(adversary.comps))


@dataclass
class DuelReport:
    n: int
    k: int
    parity: str
    tau: Optional[int]
    queries_used: int
    bound: float
    algorithm_answer: MajorityAnswer
    refuting_coloring: Optional[Coloring]
    extracted_coloring: Coloring
    transcript: Transcript = field(repr=False)

    @property
    def verdict(self) -> str:
        return "AlgorithmRefuted" if self.refuting_coloring is not None else "AlgorithmCorrectForced"

    @property
    def refuted(self) -> bool:
        return self.refuting_coloring is not None

    @property
    def slack(self) -> float:
        """Leading-term lower bound n/(k-1) minus the queries actually used."""
        return self.n / (self.k - 1) - self.queries_used

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "parity": self.parity,
            "queries": self.queries_used,
            "bound": self.bound,
            "answer": self.algorithm_answer,
            "refuted": self.refuted,
            "verdict": self.verdict,
        }
        if self.tau is not None:
            out["tau"] = self.tau
            out["slack"] = round(self.slack, 6)
        if self.refuting_coloring is not None:
            out["coloring"] = coloring_to_str(self.refuting_coloring)
        return out


def lower_bound(n: int, k: int, parity: str) -> float:
    """ceil((n-1)/(k-1)) for odd k; the leading term n/(k-1) for even k."""
    if parity == "odd":
        return -(-(n - 1) // (k - 1))
    return n / (k - 1)


def duel(algorithm: Callable[[Oracle], MajorityAnswer], parity: str, n: int, k: int,
         tau: Optional[int] = None, cap: Optional[int] = None) -> DuelReport:
    """Run ``algorithm`` against the adversary and judge its answer."""
    adv = AdversaryOracle(n, k, parity, tau, cap)
    answer = algorithm(adv)
    refutation = extract_refutation(adv, answer)
    return DuelReport(
        n=n, k=k, parity=parity, tau=adv.tau,
        queries_used=adv.queries_used,
        bound=lower_bound(n, k, parity),
        algorithm_answer=answer,
        refuting_coloring=refutation,
        extracted_coloring=refutation if refutation is not None else consistent_coloring(adv),
        transcript=adv.transcript,
    )


def truncated_dmk(oracle: Oracle) -> MajorityAnswer:
    """Merge-blocks schedule stopped one query short, then a guess.

    Guesses the majority color of the largest known block. Exists to be
    refuted: any algorithm stopping below the lower bound must be.
    """
    from .partition_majority import KnowledgeGraph

    n, k = oracle.params()
    g = KnowledgeGraph(range(1, n + 1))
    budget = -(-(n - 1) // (k - 1)) - 1
    for _ in range(budget):
        if len(g.members) == 1:
            break
        g.absorb(oracle.query_partition(g.schedule(k)))
    block = max(g.members.values(), key=lambda b: (len(b), -b[0]))
    same, other = g.classes(block[0])
    if len(same) == len(other):
        return None
    return (same if len(same) > len(other) else other)[0]


def random_strategy(seed: int, mess: float = 0.2) -> Callable[[Oracle], MajorityAnswer]:
    """A seeded, correct but unstructured partition-query algorithm.

    Mostly queries one item from each of k random known blocks; with
    probability ``mess`` it queries a uniformly random k-set instead, which
    tends to repeat blocks. It answers only once its knowledge forces the
    majority.
    """
    import random

    from .partition_majority import KnowledgeGraph

    def algorithm(oracle: Oracle) -> MajorityAnswer:
        rng = random.Random(seed)
        n, k = oracle.params()
        g = KnowledgeGraph(range(1, n + 1))
        while True:
            info = []
            for b in g.members.values():
                odd = [y for y in b if g.uf.find(y)[1]]
                info.append((abs(len(b) - 2 * len(odd)), b, odd))
            total = sum(t[0] for t in info)
            if total == 0:
                return None
            d, b, odd = max(info, key=lambda t: t[0])
            if 2 * d > total:
                # answer with an item of the block's larger class
                return odd[0] if 2 * len(odd) > len(b) else min(set(b) - set(odd))
            blocks = list(g.members.values())
            if len(blocks) >= k and rng.random() >= mess:
                q = [rng.choice(b) for b in rng.sample(blocks, k)]
            else:
                q = rng.sample(range(1, n + 1), k)
            g.absorb(oracle.query_partition(q))

    algorithm.__name__ = f"random_strategy_{seed}"
    return algorithm
