"""Entities, endpoints, and the visible temporal board.

An interval entity contributes start and end points, an instant a single
point, so a board over k intervals and i instants has j = 2k + i endpoints
and j(j-1)/2 visible cells.  Interval entities carry a seeded start<end
axiom.  Interval-level annotations (TimeML TLINK vocabulary) decompose into
definite point constraints via :func:`interval_to_points`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import (
    EmptyEntitySet,
    InvalidPair,
    InvalidSpan,
    OverlappingSpans,
    UnknownEntity,
    UnknownRelation,
)
from .relations import (
    ClosureResult,
    PointGraph,
    PointRelation,
    assert_relation,
    invert,
)


class Kind(str, Enum):
    INTERVAL = "interval"
    INSTANT = "instant"


class Side(str, Enum):
    START = "start"
    END = "end"
    POINT = "point"


class Provenance(str, Enum):
    EMPTY = "empty"
    AXIOM = "axiom"
    USER = "user"
    INFERRED = "inferred"
    GOLD = "gold"


@dataclass(frozen=True)
class Entity:
    """A text span treated as a temporal interval or instant.

    Offsets are 0-based character positions into the surrounding text,
    end exclusive.
    """

    id: str
    text: str
    start: int
    end: int
    kind: Kind = Kind.INTERVAL
    is_dct: bool = False


@dataclass(frozen=True)
class EndpointId:
    entity_id: str
    side: Side

    @property
    def ref(self) -> str:
        return f"{self.entity_id}.{self.side.value}"


def parse_ref(ref: str) -> EndpointId:
    entity_id, dot, side = ref.rpartition(".")
    if not dot:
        raise InvalidPair(f"malformed endpoint reference {ref!r}")
    try:
        return EndpointId(entity_id, Side(side))
    except ValueError:
        raise InvalidPair(f"malformed endpoint reference {ref!r}") from None


class IntervalRelation(str, Enum):
    BEFORE = "BEFORE"
    AFTER = "AFTER"
    IBEFORE = "IBEFORE"
    IAFTER = "IAFTER"
    INCLUDES = "INCLUDES"
    IS_INCLUDED = "IS_INCLUDED"
    BEGINS = "BEGINS"
    BEGUN_BY = "BEGUN_BY"
    ENDS = "ENDS"
    ENDED_BY = "ENDED_BY"
    SIMULTANEOUS = "SIMULTANEOUS"
    IDENTITY = "IDENTITY"
    DURING = "DURING"
    DURING_INV = "DURING_INV"


_LT = PointRelation.BEFORE
_GT = PointRelation.AFTER
_EQ = PointRelation.EQUAL

# (side of a, side of b, relation) constraint triples per interval relation.
# a- / a+ are the start / end of the source interval, b- / b+ of the target.
_INTERVAL_TO_POINTS: dict[IntervalRelation, tuple[tuple[Side, Side, PointRelation], ...]] = {
    IntervalRelation.BEFORE: ((Side.END, Side.START, _LT),),
    IntervalRelation.AFTER: ((Side.START, Side.END, _GT),),
    IntervalRelation.IBEFORE: ((Side.END, Side.START, _EQ),),
    IntervalRelation.IAFTER: ((Side.START, Side.END, _EQ),),
    IntervalRelation.INCLUDES: (
        (Side.START, Side.START, _LT),
        (Side.END, Side.END, _GT),
    ),
    IntervalRelation.IS_INCLUDED: (
        (Side.START, Side.START, _GT),
        (Side.END, Side.END, _LT),
    ),
    IntervalRelation.BEGINS: (
        (Side.START, Side.START, _EQ),
        (Side.END, Side.END, _LT),
    ),
    IntervalRelation.BEGUN_BY: (
        (Side.START, Side.START, _EQ),
        (Side.END, Side.END, _GT),
    ),
    IntervalRelation.ENDS: (
        (Side.START, Side.START, _GT),
        (Side.END, Side.END, _EQ),
    ),
    IntervalRelation.ENDED_BY: (
        (Side.START, Side.START, _LT),
        (Side.END, Side.END, _EQ),
    ),
    IntervalRelation.SIMULTANEOUS: (
        (Side.START, Side.START, _EQ),
        (Side.END, Side.END, _EQ),
    ),
}
# DURING and its inverse follow the TempEval evaluation convention and
# collapse to SIMULTANEOUS; IDENTITY is pointwise the same relation.
_INTERVAL_TO_POINTS[IntervalRelation.IDENTITY] = _INTERVAL_TO_POINTS[
    IntervalRelation.SIMULTANEOUS
]
_INTERVAL_TO_POINTS[IntervalRelation.DURING] = _INTERVAL_TO_POINTS[
    IntervalRelation.SIMULTANEOUS
]
_INTERVAL_TO_POINTS[IntervalRelation.DURING_INV] = _INTERVAL_TO_POINTS[
    IntervalRelation.SIMULTANEOUS
]


def interval_to_points(
    rel: IntervalRelation | str,
) -> tuple[tuple[Side, Side, PointRelation], ...]:
    """Definite point constraints implied by an interval-level relation.

    Both entities are treated as intervals; each triple reads
    (side of source, side of target, point relation).
    """
    try:
        rel = IntervalRelation(rel)
    except ValueError:
        raise UnknownRelation(f"unknown interval relation {rel!r}") from None
    return _INTERVAL_TO_POINTS[rel]


def endpoints_for(entity: Entity) -> tuple[EndpointId, ...]:
    if entity.kind is Kind.INTERVAL:
        return (
            EndpointId(entity.id, Side.START),
            EndpointId(entity.id, Side.END),
        )
    return (EndpointId(entity.id, Side.POINT),)


class Board:
    """Visible temporal board: ordered endpoints, labels, and per-cell provenance.

    Endpoints follow entity text order with start before end.  Cells are the
    unordered endpoint pairs, addressed canonically by (low index, high
    index).  Single writer; snapshots may be read concurrently.
    """

    def __init__(self, entities: list[Entity]):
        if not entities:
            raise EmptyEntitySet("a board needs at least one entity")
        ordered = sorted(entities, key=lambda e: (e.start, e.end))
        for prev, cur in zip(ordered, ordered[1:]):
            if cur.start < prev.end:
                raise OverlappingSpans(
                    f"entities {prev.id!r} and {cur.id!r} overlap"
                )
        self.entities: list[Entity] = ordered
        self.endpoints: list[EndpointId] = [
            ep for e in ordered for ep in endpoints_for(e)
        ]
        self._index: dict[str, int] = {
            ep.ref: i for i, ep in enumerate(self.endpoints)
        }
        self.graph = PointGraph(len(self.endpoints))
        self._prov: dict[tuple[int, int], Provenance] = {
            cell: Provenance.EMPTY for cell in self.cells()
        }
        self.user_history: list[tuple[str, str, PointRelation]] = []
        for e in ordered:
            if e.kind is Kind.INTERVAL:
                i = self._index[f"{e.id}.start"]
                j = self._index[f"{e.id}.end"]
                assert_relation(self.graph, i, j, PointRelation.BEFORE)
                self._prov[(i, j)] = Provenance.AXIOM

    # --- structure ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.endpoints)

    def cells(self) -> list[tuple[int, int]]:
        n = len(self.endpoints)
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    def entity(self, entity_id: str) -> Entity:
        for e in self.entities:
            if e.id == entity_id:
                return e
        raise UnknownEntity(f"unknown entity {entity_id!r}")

    def has_entity(self, entity_id: str) -> bool:
        return any(e.id == entity_id for e in self.entities)

    def index_of(self, ref: str) -> int:
        try:
            return self._index[ref]
        except KeyError:
            raise InvalidPair(f"unknown endpoint {ref!r}") from None

    def ref_at(self, index: int) -> str:
        return self.endpoints[index].ref

    def cell_for(self, source: str, target: str) -> tuple[int, int]:
        i, j = self.index_of(source), self.index_of(target)
        if i == j:
            raise InvalidPair(f"{source!r} and {target!r} name the same endpoint")
        return (i, j) if i < j else (j, i)

    # --- cell state --------------------------------------------------------

    def provenance(self, i: int, j: int) -> Provenance:
        return self._prov[(i, j) if i < j else (j, i)]

    def label_at(self, i: int, j: int) -> PointRelation | None:
        """Canonical (low->high) label for the cell, or None when empty."""
        return self.graph.label(*((i, j) if i < j else (j, i)))

    def playable_cells(self) -> list[tuple[int, int]]:
        return [c for c in self.cells() if self._prov[c] is Provenance.EMPTY]

    def filled(self) -> bool:
        return not self.playable_cells()

    # --- mutation ----------------------------------------------------------

    def assert_user(
        self,
        source: str,
        target: str,
        relation: PointRelation,
        provenance: Provenance = Provenance.USER,
    ) -> ClosureResult:
        """Apply one labelled choice and close; provenance updated on success.

        The chosen cell is marked with ``provenance``; propagated cells are
        marked inferred (gold import marks them gold).  A vague choice over
        an existing definite label is a no-op and records nothing.
        """
        i, j = self.index_of(source), self.index_of(target)
        if i == j:
            raise InvalidPair(f"{source!r} and {target!r} name the same endpoint")
        existing = self.graph.label(i, j)
        result = assert_relation(self.graph, i, j, relation)
        if not result.consistent:
            return result
        if relation is PointRelation.VAGUE and existing is not None and existing.is_definite:
            return result
        cell = (i, j) if i < j else (j, i)
        self._prov[cell] = provenance
        inferred_mark = (
            Provenance.GOLD if provenance is Provenance.GOLD else Provenance.INFERRED
        )
        for pair, _ in result.newly_inferred:
            self._prov[pair] = inferred_mark
        self.user_history.append((source, target, relation))
        return result


def build_board(entities: list[Entity]) -> Board:
    """Board with endpoints in text order and interval axioms seeded and closed."""
    return Board(entities)


def validate_spans(text: str, spans: list[tuple[int, int]]) -> None:
    """Bounds and overlap checks for entity spans over ``text``."""
    for start, end in spans:
        if not (0 <= start < end <= len(text)):
            raise InvalidSpan(f"span [{start}, {end}) out of bounds for text")
    ordered = sorted(spans)
    for (s1, e1), (s2, _) in zip(ordered, ordered[1:]):
        if s2 < e1:
            raise OverlappingSpans(f"spans [{s1}, {e1}) and starting {s2} overlap")


def _rewrite_ref(ref: str, mapping: dict[str, str]) -> str | None:
    return mapping.get(ref, ref)


def set_entity_kind(board: Board, entity_id: str, kind: Kind) -> Board:
    """Toggle an entity between interval and instant, preserving what survives.

    Interval -> instant drops labels touching the removed end point and the
    entity's axiom, re-attaching start-point labels to the new single point;
    instant -> interval re-attaches point labels to the new start.  The board
    is rebuilt from the surviving user history and re-closed.
    """
    entity = board.entity(entity_id)
    if entity.kind is kind:
        return board
    new_entities = [
        replace(e, kind=kind) if e.id == entity_id else e for e in board.entities
    ]
    if kind is Kind.INSTANT:
        dropped = {f"{entity_id}.end"}
        renames = {f"{entity_id}.start": f"{entity_id}.point"}
    else:
        dropped = set()
        renames = {f"{entity_id}.point": f"{entity_id}.start"}
    history: list[tuple[str, str, PointRelation]] = []
    for source, target, relation in board.user_history:
        if source in dropped or target in dropped:
            continue
        history.append(
            (renames.get(source, source), renames.get(target, target), relation)
        )
    return rebuild_board(new_entities, history)


def rebuild_board(
    entities: list[Entity], history: list[tuple[str, str, PointRelation]]
) -> Board:
    """Fresh board over ``entities`` with surviving history replayed in order."""
    board = build_board(entities)
    for source, target, relation in history:
        if source not in board._index or target not in board._index:
            continue
        result = board.assert_user(source, target, relation)
        if not result.consistent:  # pragma: no cover - history is a consistent subset
            raise AssertionError("replay of surviving labels cannot conflict")
    return board
