"""Shared test oracles and fixtures helpers."""

from __future__ import annotations

from itertools import combinations

from chronoboard.board import Entity, IntervalRelation, Kind, Side
from chronoboard.relations import PointRelation

B = PointRelation.BEFORE
A = PointRelation.AFTER
E = PointRelation.EQUAL
V = PointRelation.VAGUE


def classify_intervals(a0: int, a1: int, b0: int, b1: int) -> IntervalRelation:
    """Name the relation holding between intervals [a0,a1] and [b0,b1].

    DURING/DURING_INV are folded into SIMULTANEOUS, mirroring the mapping
    convention under test.
    """
    if a1 < b0:
        return IntervalRelation.BEFORE
    if a0 > b1:
        return IntervalRelation.AFTER
    if a1 == b0:
        return IntervalRelation.IBEFORE
    if a0 == b1:
        return IntervalRelation.IAFTER
    if a0 == b0 and a1 == b1:
        return IntervalRelation.SIMULTANEOUS
    if a0 == b0:
        return IntervalRelation.BEGINS if a1 < b1 else IntervalRelation.BEGUN_BY
    if a1 == b1:
        return IntervalRelation.ENDS if a0 > b0 else IntervalRelation.ENDED_BY
    if a0 < b0 and a1 > b1:
        return IntervalRelation.INCLUDES
    if a0 > b0 and a1 < b1:
        return IntervalRelation.IS_INCLUDED
    # proper overlap: outside the mapped vocabulary
    return None  # type: ignore[return-value]


def point_cmp(x: int, y: int) -> PointRelation:
    return B if x < y else A if x > y else E


def realization_labels(rel: IntervalRelation, grid: int = 6):
    """Per endpoint-pair relation sets over every grid realization of ``rel``.

    Keys are (side of a, side of b); values are the sets of point relations
    observed across all integer-interval pairs on [0, grid] whose classified
    relation is ``rel`` (with DURING variants realized as SIMULTANEOUS).
    """
    wanted = rel
    if rel in (IntervalRelation.DURING, IntervalRelation.DURING_INV,
               IntervalRelation.IDENTITY):
        wanted = IntervalRelation.SIMULTANEOUS
    observed: dict[tuple[Side, Side], set[PointRelation]] = {
        (sa, sb): set()
        for sa in (Side.START, Side.END)
        for sb in (Side.START, Side.END)
    }
    count = 0
    for a0, a1 in combinations(range(grid + 1), 2):
        for b0, b1 in combinations(range(grid + 1), 2):
            if classify_intervals(a0, a1, b0, b1) is not wanted:
                continue
            count += 1
            points = {Side.START: (a0, b0), Side.END: (a1, b1)}
            for sa in (Side.START, Side.END):
                for sb in (Side.START, Side.END):
                    av = a0 if sa is Side.START else a1
                    bv = b0 if sb is Side.START else b1
                    observed[(sa, sb)].add(point_cmp(av, bv))
    assert count > 0, f"no grid realization for {rel}"
    return observed


def make_interval(eid: str, start: int, end: int, text: str = "", is_dct: bool = False) -> Entity:
    return Entity(eid, text or eid, start, end, Kind.INTERVAL, is_dct)


def make_instant(eid: str, start: int, end: int, text: str = "") -> Entity:
    return Entity(eid, text or eid, start, end, Kind.INSTANT, False)


def make_game(entity_ids, links, doc_id="doc", text=None):
    """Build a single game from synthetic interval entities and links."""
    from chronoboard.corpus import build_games
    from chronoboard.timeml import SentenceWindow

    entities = [
        make_interval(eid, i * 4, i * 4 + 2, text=f"w{i}")
        for i, eid in enumerate(entity_ids)
    ]
    window = SentenceWindow(
        doc_id=doc_id,
        sentence_index=0,
        text=text or " ".join(f"w{i}" for i in range(len(entity_ids))),
        entities=entities,
        gold_links=[(s, t, IntervalRelation(r)) for s, t, r in links],
    )
    games = build_games([window], level=len(entity_ids))
    assert len(games) == 1
    return games[0]
