"""Instrumented query oracles.

Every oracle answers ``count`` and/or ``partition`` queries on sets of
exactly ``k`` items out of ``[n]``, counts the accepted queries and keeps a
transcript. Algorithms only ever talk to an :class:`Oracle`; honest
oracles, the always-balanced simulator and the lower-bound adversaries are
interchangeable behind it.
"""
from __future__ import annotations

import json
from operator import lt
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from .errors import QueryModeError, QuerySizeError
from .setcore import Coloring, IndexSet, PartitionPair, count_of, partition_of

Answer = Union[int, PartitionPair]


@dataclass(frozen=True)
class QueryRecord:
    ordinal: int
    query: IndexSet
    answer: Answer

    @property
    def is_count(self) -> bool:
        return not isinstance(self.answer, PartitionPair)

    def to_json(self) -> dict:
        if self.is_count:
            return {"q": list(self.query), "count": self.answer}
        return {"q": list(self.query), "parts": self.answer.as_lists()}


class Transcript:
    """Ordered log of accepted queries and their answers."""

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.queries: List[IndexSet] = []
        self.answers: List[Answer] = []

    def __len__(self) -> int:
        return len(self.queries)

    def append(self, q: IndexSet, answer: Answer) -> None:
        self.queries.append(q)
        self.answers.append(answer)

    @property
    def records(self) -> List[QueryRecord]:
        return [QueryRecord(i, q, a)
                for i, (q, a) in enumerate(zip(self.queries, self.answers), 1)]

    def __iter__(self) -> Iterator[QueryRecord]:
        return iter(self.records)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json()) + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str, n: int, k: int) -> "Transcript":
        t = cls(n, k)
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            q = tuple(rec["q"])
            if "count" in rec:
                t.append(q, int(rec["count"]))
            else:
                a, b = rec["parts"]
                t.append(q, PartitionPair(tuple(a), tuple(b)))
        return t


def replay(transcript: Transcript, coloring: Sequence[int]) -> bool:
    """True iff every recorded answer matches what ``coloring`` would give."""
    if len(coloring) != transcript.n:
        return False
    for q, a in zip(transcript.queries, transcript.answers):
        if isinstance(a, PartitionPair):
            if partition_of(q, coloring) != a:
                return False
        elif count_of(q, coloring) != a:
            return False
    return True


class Oracle:
    """Base class: query validation, counting and transcript keeping.

    Subclasses implement ``_count`` and/or ``_partition`` on an already
    validated, sorted query tuple.
    """

    allows_count = True
    allows_partition = True

    def __init__(self, n: int, k: int):
        if not 1 <= k <= n:
            raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
        self.n = n
        self.k = k
        self.transcript = Transcript(n, k)

    def params(self) -> Tuple[int, int]:
        return self.n, self.k

    @property
    def queries_used(self) -> int:
        return len(self.transcript.queries)

    def _validate(self, q: Iterable[int]) -> IndexSet:
        if type(q) is not tuple:
            q = tuple(q)
        if len(q) != self.k or not all(map(lt, q, q[1:])):
            q = tuple(sorted(set(q)))
            if len(q) != self.k:
                raise QuerySizeError(f"query has {len(q)} distinct items, expected k={self.k}")
        if q[0] < 1 or q[-1] > self.n:
            raise QuerySizeError(f"query {q} leaves [1, {self.n}]")
        return q

    def query_count(self, q: Iterable[int]) -> int:
        if not self.allows_count:
            raise QueryModeError(f"{type(self).__name__} does not answer count queries")
        q = self._validate(q)
        c = self._count(q)
        self.transcript.queries.append(q)
        self.transcript.answers.append(c)
        return c

    def query_partition(self, q: Iterable[int]) -> PartitionPair:
        if not self.allows_partition:
            raise QueryModeError(f"{type(self).__name__} does not answer partition queries")
        q = self._validate(q)
        p = self._partition(q)
        self.transcript.append(q, p)
        return p

    def _count(self, q: IndexSet) -> int:
        raise NotImplementedError

    def _partition(self, q: IndexSet) -> PartitionPair:
        raise NotImplementedError


class HonestOracle(Oracle):
    """Answers truthfully from a hidden coloring.

    ``mode`` is ``"both"``, ``"count"`` or ``"partition"``.
    """

    def __init__(self, coloring: Coloring, k: int, mode: str = "both"):
        if mode not in ("both", "count", "partition"):
            raise ValueError(f"unknown oracle mode {mode!r}")
        if any(b not in (0, 1) for b in coloring):
            raise ValueError("coloring entries must be 0 or 1")
        super().__init__(len(coloring), k)
        self.hidden = tuple(coloring)
        self.mode = mode
        self.allows_count = mode != "partition"
        self.allows_partition = mode != "count"
        self._lookup = (0,) + self.hidden

    def _count(self, q: IndexSet) -> int:
        ones = sum(map(self._lookup.__getitem__, q))
        return min(ones, self.k - ones)

    def _partition(self, q: IndexSet) -> PartitionPair:
        return partition_of(q, self.hidden)


class AlwaysBalancedOracle(Oracle):
    """Knows nothing and claims every query is balanced (count = k // 2)."""

    allows_partition = False

    def _count(self, q: IndexSet) -> int:
        return self.k // 2


def same_color(oracle: Oracle, a: int, b: int) -> bool:
    """For k = 2: one query tells whether two items share a color."""
    pair = (a, b) if a < b else (b, a)
    if oracle.allows_count:
        return oracle.query_count(pair) == 0
    part = oracle.query_partition(pair)
    return not part.side_b
