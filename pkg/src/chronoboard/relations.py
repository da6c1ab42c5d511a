"""Qualitative algebra over time points.

Four labels relate two points: before (<), after (>), equal (=), and
vague (-), where vague means "no constraint known".  A :class:`PointGraph`
stores one label per unordered point pair; reading a pair in the reverse
direction yields the inverse label.  Closure propagates definite labels
through transitivity until a fixed point and detects contradictions.
:func:`oracle_minimal_labels` is an independent brute-force checker that
enumerates weak orderings (ordered set partitions) of the points.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator

from .errors import InvalidPoint, TooLargeForOracle

Pair = tuple[int, int]


class PointRelation(str, Enum):
    BEFORE = "<"
    AFTER = ">"
    EQUAL = "="
    VAGUE = "-"

    @property
    def is_definite(self) -> bool:
        return self is not PointRelation.VAGUE

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PointRelation({self.value!r})"


_B = PointRelation.BEFORE
_A = PointRelation.AFTER
_E = PointRelation.EQUAL
_V = PointRelation.VAGUE

DEFINITE_RELATIONS = (_B, _A, _E)

_INVERSE = {_B: _A, _A: _B, _E: _E, _V: _V}

# Transitivity table for definite operands; any vague operand composes to vague.
_COMPOSE = {
    (_B, _B): _B, (_B, _E): _B, (_E, _B): _B,
    (_A, _A): _A, (_A, _E): _A, (_E, _A): _A,
    (_E, _E): _E,
    (_B, _A): _V, (_A, _B): _V,
}


def invert(r: PointRelation) -> PointRelation:
    """Label for the reversed pair: swaps < and >, fixes = and -."""
    return _INVERSE[r]


def compose(r1: PointRelation, r2: PointRelation) -> PointRelation:
    """Tightest label for a->c given r1 on a->b and r2 on b->c."""
    if r1 is _V or r2 is _V:
        return _V
    return _COMPOSE[(r1, r2)]


@dataclass(frozen=True)
class Conflict:
    """A definite label derived for a pair that already holds a different one."""

    pair: Pair
    existing: PointRelation
    inferred: PointRelation


@dataclass
class ClosureResult:
    consistent: bool
    labels: dict[Pair, PointRelation]
    newly_inferred: list[tuple[Pair, PointRelation]] = field(default_factory=list)
    conflict: Conflict | None = None


class PointGraph:
    """Point-pair labels stored canonically for the low-index->high-index reading.

    Construction and :meth:`set_label` do not propagate; use
    :func:`assert_relation` for validated, closing mutation.  A graph is not
    safe for concurrent mutation; independent instances are.
    """

    __slots__ = ("n", "_labels")

    def __init__(self, n: int, labels: dict[Pair, PointRelation] | None = None):
        if n < 0:
            raise InvalidPoint(f"point count must be >= 0, got {n}")
        self.n = n
        self._labels: dict[Pair, PointRelation] = dict(labels) if labels else {}

    def _check(self, p: int) -> None:
        if not 0 <= p < self.n:
            raise InvalidPoint(f"point {p} out of range for graph of {self.n} points")

    def label(self, p: int, q: int) -> PointRelation | None:
        """Directed label p->q, or None when no label is stored."""
        self._check(p)
        self._check(q)
        if p == q:
            return _E
        return _read(self._labels, p, q)

    def set_label(self, p: int, q: int, r: PointRelation) -> None:
        """Store a label without propagation (used for raw graph construction)."""
        self._check(p)
        self._check(q)
        if p == q:
            raise InvalidPoint("self-pairs are implicitly equal and not stored")
        _write(self._labels, p, q, r)

    def items(self) -> dict[Pair, PointRelation]:
        return dict(self._labels)

    def definite_items(self) -> list[tuple[Pair, PointRelation]]:
        return sorted((k, r) for k, r in self._labels.items() if r.is_definite)

    def copy(self) -> "PointGraph":
        return PointGraph(self.n, self._labels)


def _read(labels: dict[Pair, PointRelation], x: int, y: int) -> PointRelation | None:
    if x == y:
        return _E
    if x < y:
        return labels.get((x, y))
    r = labels.get((y, x))
    return None if r is None else _INVERSE[r]


def _write(labels: dict[Pair, PointRelation], x: int, y: int, r: PointRelation) -> None:
    if x < y:
        labels[(x, y)] = r
    else:
        labels[(y, x)] = _INVERSE[r]


def _propagate(
    labels: dict[Pair, PointRelation], n: int, queue: list[Pair]
) -> tuple[Conflict | None, list[tuple[Pair, PointRelation]]]:
    """Worklist propagation: each definite cell re-checks the triangles it touches.

    Deterministic: FIFO over canonically ordered seeds, ascending third point.
    Inferred labels are appended in discovery order.
    """
    inferred: list[tuple[Pair, PointRelation]] = []
    pending: deque[Pair] = deque(queue)

    def update(x: int, y: int, value: PointRelation) -> Conflict | None:
        cur = _read(labels, x, y)
        if cur is not None and cur.is_definite:
            if cur is value:
                return None
            key = (x, y) if x < y else (y, x)
            lo_value = value if x < y else _INVERSE[value]
            lo_cur = cur if x < y else _INVERSE[cur]
            return Conflict(key, lo_cur, lo_value)
        _write(labels, x, y, value)
        key = (x, y) if x < y else (y, x)
        inferred.append((key, labels[key]))
        pending.append(key)
        return None

    while pending:
        p, q = pending.popleft()
        r_pq = labels.get((p, q))
        if r_pq is None or not r_pq.is_definite:
            continue
        for m in range(n):
            if m == p or m == q:
                continue
            r_qm = _read(labels, q, m)
            if r_qm is not None and r_qm.is_definite:
                c = compose(r_pq, r_qm)
                if c.is_definite:
                    conflict = update(p, m, c)
                    if conflict is not None:
                        return conflict, inferred
            r_mp = _read(labels, m, p)
            if r_mp is not None and r_mp.is_definite:
                c = compose(r_mp, r_pq)
                if c.is_definite:
                    conflict = update(m, q, c)
                    if conflict is not None:
                        return conflict, inferred
    return None, inferred


def close(g: PointGraph) -> ClosureResult:
    """Transitive closure to a fixed point.  Does not mutate the graph.

    On contradiction the result reports the first conflicting pair found
    under the deterministic propagation order.
    """
    labels = dict(g._labels)
    queue = sorted(k for k, r in labels.items() if r.is_definite)
    conflict, inferred = _propagate(labels, g.n, queue)
    if conflict is not None:
        return ClosureResult(False, dict(g._labels), [], conflict)
    return ClosureResult(True, labels, inferred)


def assert_relation(g: PointGraph, p: int, q: int, r: PointRelation) -> ClosureResult:
    """Set label p->q to r and re-close incrementally.

    Mutates the graph only on success; on contradiction the graph is left at
    its previous consistent state and the result carries the conflict.
    Vague is recorded as a placeholder without propagation and never
    overwrites a definite label.  Re-asserting an identical definite label
    is a no-op.
    """
    g._check(p)
    g._check(q)
    if p == q:
        raise InvalidPoint("cannot assert a relation between a point and itself")

    current = g.label(p, q)
    if r is _V:
        if current is None:
            g.set_label(p, q, _V)
        return ClosureResult(True, g.items(), [])

    if current is not None and current.is_definite:
        if current is r:
            return ClosureResult(True, g.items(), [])
        key = (p, q) if p < q else (q, p)
        existing = current if p < q else _INVERSE[current]
        attempted = r if p < q else _INVERSE[r]
        return ClosureResult(
            False, g.items(), [], Conflict(key, existing, attempted)
        )

    scratch = dict(g._labels)
    _write(scratch, p, q, r)
    seed = (p, q) if p < q else (q, p)
    conflict, inferred = _propagate(scratch, g.n, [seed])
    if conflict is not None:
        return ClosureResult(False, g.items(), [], conflict)
    g._labels = scratch
    return ClosureResult(True, dict(scratch), inferred)


ORACLE_MAX_POINTS = 8


def iter_weak_orderings(n: int) -> Iterator[tuple[int, ...]]:
    """Yield every weak ordering of ``range(n)`` as a rank vector.

    A weak ordering is an ordered set partition: points in the same block
    are equal, earlier blocks come first.  Counts follow the Fubini numbers
    (1, 1, 3, 13, 75, 541, ... for n = 0, 1, 2, 3, 4, 5, ...).
    """
    blocks: list[list[int]] = []

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            ranks = [0] * n
            for b, members in enumerate(blocks):
                for point in members:
                    ranks[point] = b
            yield tuple(ranks)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1)
            b.pop()
        for gap in range(len(blocks) + 1):
            blocks.insert(gap, [i])
            yield from rec(i + 1)
            del blocks[gap]

    yield from rec(0)


def oracle_minimal_labels(
    g: PointGraph,
) -> tuple[bool, dict[Pair, PointRelation]]:
    """Brute-force minimal labels via weak-order enumeration.

    Keeps the orderings satisfying every definite stored label; the graph is
    consistent iff at least one survives.  A pair's label is the unique
    definite relation holding in all survivors, else vague.  Enumeration is
    pruned (orderings violating a constraint are abandoned early) and stops
    once a survivor exists and every pair has already shown two distinct
    relations, neither of which can change the outcome.
    """
    n = g.n
    if n > ORACLE_MAX_POINTS:
        raise TooLargeForOracle(
            f"oracle bound is {ORACLE_MAX_POINTS} points, got {n}"
        )

    constraints_by_last: list[list[tuple[int, PointRelation]]] = [[] for _ in range(n)]
    for (p, q), r in g._labels.items():
        if r.is_definite:
            constraints_by_last[q].append((p, r))

    pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]
    observed: dict[Pair, set[PointRelation]] = {pair: set() for pair in pairs}
    found = False
    blocks: list[list[int]] = []

    def block_of(point: int) -> int:
        for b, members in enumerate(blocks):
            if point in members:
                return b
        raise AssertionError("unplaced point queried")

    def satisfied(i: int) -> bool:
        bi = block_of(i)
        for p, rel in constraints_by_last[i]:
            bp = block_of(p)
            actual = _B if bp < bi else _A if bp > bi else _E
            if actual is not rel:
                return False
        return True

    def rec(i: int) -> bool:
        nonlocal found
        if i == n:
            found = True
            index = {
                point: b for b, members in enumerate(blocks) for point in members
            }
            for pair, seen in observed.items():
                bp, bq = index[pair[0]], index[pair[1]]
                seen.add(_B if bp < bq else _A if bp > bq else _E)
            return all(len(seen) >= 2 for seen in observed.values())
        for b in blocks:
            b.append(i)
            stop = satisfied(i) and rec(i + 1)
            b.pop()
            if stop:
                return True
        for gap in range(len(blocks) + 1):
            blocks.insert(gap, [i])
            stop = satisfied(i) and rec(i + 1)
            del blocks[gap]
            if stop:
                return True
        return False

    rec(0)
    if not found:
        return False, {}
    labels = {
        pair: next(iter(seen)) if len(seen) == 1 else _V
        for pair, seen in observed.items()
    }
    return True, labels
