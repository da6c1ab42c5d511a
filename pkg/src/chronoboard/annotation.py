"""Free annotation sessions: import, entity editing, flagged assertions, export.

Unlike game play, an incoherent assertion does not terminate anything: the
board stays at its last consistent state and the session is flagged until
the next coherent assertion.  Pair suggestions support a random mode (seeded
per session) and a guided mode ranked by a pluggable confidence scorer;
entity detection is equally pluggable, with deterministic stubs bundled as
toy baselines.
"""

from __future__ import annotations

import hashlib
import random
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .board import (
    Board,
    Entity,
    Kind,
    Provenance,
    build_board,
    rebuild_board,
    set_entity_kind,
    validate_spans,
)
from .errors import (
    BoardComplete,
    CellNotPlayable,
    EmptyText,
    InvalidSpan,
    OverlappingSpans,
    UnknownEntity,
)
from .relations import Conflict, PointRelation
from .timeml import DCT_PREFIX

EXPORT_FORMAT_VERSION = 1
DCT_ENTITY_ID = "dct"

ConfidenceScorer = Callable[[tuple[str, str], str, Sequence[Entity]], float]
EntityDetector = Callable[[str], list[tuple[int, int, Kind | None]]]


@dataclass(frozen=True)
class AnnotationImport:
    text: str
    dct: str | None = None
    entities: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class PairSuggestion:
    source: str
    target: str
    mode: str
    confidence: float | None = None


@dataclass
class AnnotateOutcome:
    coherent: bool
    inferred: list[tuple[str, str, PointRelation]] = field(default_factory=list)
    conflict: Conflict | None = None
    conflict_cell: tuple[str, str] | None = None
    existing: PointRelation | None = None
    attempted: PointRelation | None = None


def stub_confidence(pair: tuple[str, str], text: str, entities: Sequence[Entity]) -> float:
    """Deterministic stand-in for a relation classifier: content hash in [0, 1]."""
    digest = hashlib.sha256(f"{pair[0]}|{pair[1]}|{text}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


_ISO_DATE = re.compile(r"\b\d{4}-\d{2}-\d{2}\b")
_YEAR = re.compile(r"\b(?:19|20)\d{2}\b")
# toy closed lexicon; real event extraction plugs in through EntityDetector
_EVENT_VERBS = (
    "said", "announced", "launched", "died", "met", "signed",
    "elected", "arrested", "began", "ended", "seized", "resigned",
)
_VERB = re.compile(r"\b(?:" + "|".join(_EVENT_VERBS) + r")\b", re.IGNORECASE)


def stub_detector(text: str) -> list[tuple[int, int, Kind | None]]:
    """Regex baseline: ISO dates, bare years, and a small event-verb lexicon.

    Earlier patterns win overlaps, so a date swallows its own year.
    """
    spans: list[tuple[int, int, Kind | None]] = []
    for pattern in (_ISO_DATE, _YEAR, _VERB):
        for m in pattern.finditer(text):
            if any(m.start() < e and s < m.end() for s, e, _ in spans):
                continue
            spans.append((m.start(), m.end(), None))
    spans.sort()
    return spans


class Session:
    """One annotated document; the service serializes mutations per session."""

    def __init__(
        self,
        session_id: str,
        original_text: str,
        dct: str | None,
        entities: list[Entity],
        seed: int | None = None,
    ):
        self.session_id = session_id
        self.original_text = original_text
        self.dct = dct
        self.prefix_length = len(f"{DCT_PREFIX}{dct} ") if dct else 0
        self.text = (f"{DCT_PREFIX}{dct} " if dct else "") + original_text
        self.board: Board = build_board(entities) if entities else _EMPTY_BOARD
        self._has_entities = bool(entities)
        self.coherent = True
        self.created_at = time.time()
        self.updated_at = self.created_at
        self.rng = random.Random(seed)
        self._entity_seq = _next_entity_seq(entities)

    # --- entity editing -----------------------------------------------------

    def entities(self) -> list[Entity]:
        return list(self.board.entities) if self._has_entities else []

    def _touch(self) -> None:
        self.updated_at = time.time()

    def _set_entities(self, entities: list[Entity], history) -> None:
        if entities:
            self.board = rebuild_board(entities, history)
            self._has_entities = True
        else:
            self.board = _EMPTY_BOARD
            self._has_entities = False
        self._touch()

    def add_entity(self, start: int, end: int, kind: Kind = Kind.INTERVAL) -> Entity:
        """Add a span (offsets into the displayed, possibly prefixed text)."""
        if not (0 <= start < end <= len(self.text)):
            raise InvalidSpan(f"span [{start}, {end}) out of bounds")
        for entity in self.entities():
            if start < entity.end and entity.start < end:
                raise OverlappingSpans(
                    f"span [{start}, {end}) overlaps entity {entity.id!r}"
                )
        self._entity_seq += 1
        entity = Entity(
            id=f"e{self._entity_seq}",
            text=self.text[start:end],
            start=start,
            end=end,
            kind=kind,
        )
        history = self.board.user_history if self._has_entities else []
        self._set_entities(self.entities() + [entity], history)
        return entity

    def remove_entity(self, entity_id: str) -> None:
        remaining = [e for e in self.entities() if e.id != entity_id]
        if len(remaining) == len(self.entities()):
            raise UnknownEntity(f"unknown entity {entity_id!r}")
        refs = {f"{entity_id}.{side}" for side in ("start", "end", "point")}
        history = [
            item
            for item in (self.board.user_history if self._has_entities else [])
            if item[0] not in refs and item[1] not in refs
        ]
        self._set_entities(remaining, history)

    def set_kind(self, entity_id: str, kind: Kind) -> None:
        if not self._has_entities:
            raise UnknownEntity(f"unknown entity {entity_id!r}")
        self.board = set_entity_kind(self.board, entity_id, kind)
        self._touch()

    # --- annotation -----------------------------------------------------------

    def annotate(self, source: str, target: str, relation: PointRelation) -> AnnotateOutcome:
        """Label an endpoint pair; a conflicting choice only flags the session.

        Empty cells, vague placeholders, and inferred cells are annotatable;
        axiom cells and committed user labels are not.
        """
        board = self.board
        i, j = board.cell_for(source, target)
        provenance = board.provenance(i, j)
        if provenance is Provenance.AXIOM:
            raise CellNotPlayable("axiom cells are fixed")
        if provenance is Provenance.USER and board.label_at(i, j).is_definite:
            raise CellNotPlayable("committed labels cannot be re-annotated")
        result = board.assert_user(source, target, relation)
        self._touch()
        if not result.consistent:
            self.coherent = False
            conflict = result.conflict
            return AnnotateOutcome(
                coherent=False,
                conflict=conflict,
                conflict_cell=(
                    board.ref_at(conflict.pair[0]),
                    board.ref_at(conflict.pair[1]),
                ),
                existing=conflict.existing,
                attempted=conflict.inferred,
            )
        self.coherent = True
        return AnnotateOutcome(
            coherent=True,
            inferred=[
                (board.ref_at(p), board.ref_at(q), r)
                for (p, q), r in result.newly_inferred
            ],
        )

    # --- dynamic mode -----------------------------------------------------------

    def empty_cells(self) -> list[tuple[str, str]]:
        board = self.board
        return [
            (board.ref_at(i), board.ref_at(j))
            for i, j in board.cells()
            if board.provenance(i, j) is Provenance.EMPTY
        ]

    def next_pair(
        self, mode: str = "random", scorer: ConfidenceScorer | None = None
    ) -> PairSuggestion:
        cells = self.empty_cells()
        if not cells:
            raise BoardComplete("no unannotated pairs remain")
        if mode == "random":
            source, target = cells[self.rng.randrange(len(cells))]
            return PairSuggestion(source, target, "random")
        scorer = scorer or stub_confidence
        entities = self.entities()
        best = None
        best_score = -1.0
        for pair in cells:  # canonical order breaks ties
            score = scorer(pair, self.text, entities)
            if score > best_score:
                best, best_score = pair, score
        return PairSuggestion(best[0], best[1], "guided", confidence=best_score)

    def detect_entities(self, detector: EntityDetector | None = None) -> list[Entity]:
        """Add detected non-overlapping spans; overlaps with existing are skipped."""
        detector = detector or stub_detector
        added: list[Entity] = []
        for start, end, kind in detector(self.text):
            taken = [(e.start, e.end) for e in self.entities()]
            if any(start < e and s < end for s, e in taken):
                continue
            added.append(self.add_entity(start, end, kind or Kind.INTERVAL))
        return added

    # --- export ---------------------------------------------------------------

    def export(self) -> dict:
        """Versioned JSON view; re-importing it reproduces the board exactly."""
        board = self.board
        relations = []
        if self._has_entities:
            for i, j in board.cells():
                provenance = board.provenance(i, j)
                if provenance is Provenance.EMPTY:
                    continue
                label = board.label_at(i, j)
                relations.append(
                    {
                        "source": board.ref_at(i),
                        "target": board.ref_at(j),
                        "relation": label.value,
                        "provenance": provenance.value,
                    }
                )
        return {
            "format_version": EXPORT_FORMAT_VERSION,
            "dct": self.dct,
            "text": self.original_text,
            "prefix_length": self.prefix_length,
            "entities": [
                {
                    "id": e.id,
                    "start": e.start,
                    "end": e.end,
                    "kind": e.kind.value,
                    "is_dct": e.is_dct,
                }
                for e in self.entities()
            ],
            "relations": relations,
            "coherent": self.coherent,
        }


class _EmptyBoard:
    """Stand-in board for sessions without entities yet."""

    entities: list[Entity] = []
    endpoints: list = []
    user_history: list = []

    def cells(self):
        return []

    def playable_cells(self):
        return []

    def cell_for(self, source, target):
        from .errors import InvalidPair

        raise InvalidPair(f"unknown endpoint {source!r}")

    def provenance(self, i, j):  # pragma: no cover - unreachable without cells
        raise KeyError((i, j))


_EMPTY_BOARD = _EmptyBoard()


def _next_entity_seq(entities: list[Entity]) -> int:
    highest = 0
    for entity in entities:
        m = re.fullmatch(r"e(\d+)", entity.id)
        if m:
            highest = max(highest, int(m.group(1)))
    return highest


def create_session(
    payload: dict | str,
    session_id: str = "session",
    seed: int | None = None,
) -> Session:
    """Build a session from an import payload, plain text, or a prior export."""
    if isinstance(payload, str):
        payload = {"text": payload}
    if payload.get("format_version") is not None:
        return restore_session(payload, session_id=session_id, seed=seed)

    text = payload.get("text")
    if not isinstance(text, str) or not text.strip():
        raise EmptyText("the text field is mandatory and must be non-empty")
    dct = payload.get("dct")
    if dct is not None and (not isinstance(dct, str) or not dct.strip()):
        raise EmptyText("dct, when given, must be a non-empty string")
    spans = []
    for item in payload.get("entities") or []:
        try:
            spans.append((int(item["start"]), int(item["end"])))
        except (KeyError, TypeError, ValueError):
            raise InvalidSpan(f"entity spans need integer start/end: {item!r}") from None
    validate_spans(text, spans)

    prefix = f"{DCT_PREFIX}{dct} " if dct else ""
    entities: list[Entity] = []
    if dct:
        entities.append(
            Entity(
                id=DCT_ENTITY_ID,
                text=dct,
                start=len(DCT_PREFIX),
                end=len(DCT_PREFIX) + len(dct),
                kind=Kind.INTERVAL,
                is_dct=True,
            )
        )
    for seq, (start, end) in enumerate(sorted(spans), start=1):
        entities.append(
            Entity(
                id=f"e{seq}",
                text=text[start:end],
                start=start + len(prefix),
                end=end + len(prefix),
                kind=Kind.INTERVAL,
            )
        )
    return Session(session_id, text, dct, entities, seed=seed)


def restore_session(export: dict, session_id: str = "session", seed: int | None = None) -> Session:
    """Rebuild a session from :meth:`Session.export` output.

    Axiom and inferred relations are recomputed by replaying the user ones,
    so a restored board matches the exported one exactly.
    """
    text = export.get("text")
    if not isinstance(text, str) or not text.strip():
        raise EmptyText("the text field is mandatory and must be non-empty")
    dct = export.get("dct")
    session = Session(session_id, text, dct, [], seed=seed)
    entities = [
        Entity(
            id=item["id"],
            text=session.text[item["start"]:item["end"]],
            start=item["start"],
            end=item["end"],
            kind=Kind(item["kind"]),
            is_dct=item.get("is_dct", False),
        )
        for item in export.get("entities") or []
    ]
    if entities:
        session.board = build_board(entities)
        session._has_entities = True
        session._entity_seq = _next_entity_seq(entities)
        for item in export.get("relations") or []:
            if item.get("provenance") != Provenance.USER.value:
                continue
            session.board.assert_user(
                item["source"], item["target"], PointRelation(item["relation"])
            )
    session.coherent = bool(export.get("coherent", True))
    return session
