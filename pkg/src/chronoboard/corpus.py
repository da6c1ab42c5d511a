"""Game generation from sentence windows, persistence, and corpus statistics.

A level-l game is one combination of l window entities whose annotated
interval links, decomposed to point constraints and closed together with the
start<end axioms, leave at least one definite non-axiom label.  Output is
deterministic: games are ordered by (doc id, sentence index, lexicographic
entity-id subset) and serialized as stable JSON Lines.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .board import (
    Board,
    Entity,
    IntervalRelation,
    Kind,
    Provenance,
    build_board,
    interval_to_points,
)
from .errors import CorpusFormatError, InconsistentGold, InvalidLevel
from .relations import PointRelation
from .timeml import SentenceWindow

logger = logging.getLogger(__name__)

MIN_LEVEL = 2
MAX_LEVEL = 5

GoldEntry = tuple[str, str, PointRelation]


@dataclass
class Game:
    """A playable unit: prefixed sentence text, entity subset, closed gold labels."""

    game_id: str
    doc_id: str
    level: int
    text: str
    entities: list[Entity]
    gold: list[GoldEntry]
    sentence_index: int | None = field(default=None, compare=False)

    def gold_map(self) -> dict[tuple[str, str], PointRelation]:
        return {(s, t): r for s, t, r in self.gold}


def game_id_for(doc_id: str, sentence_index: int, entity_ids: list[str]) -> str:
    key = "\x1f".join([doc_id, str(sentence_index), ",".join(sorted(entity_ids))])
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


def link_constraints(
    source: Entity, target: Entity, relation: IntervalRelation
) -> list[tuple[str, str, PointRelation]]:
    """Endpoint-level constraints for one interval link between two entities."""
    return [
        (f"{source.id}.{sa.value}", f"{target.id}.{sb.value}", r)
        for sa, sb, r in interval_to_points(relation)
    ]


def _gold_from_board(board: Board) -> list[GoldEntry]:
    entries: list[GoldEntry] = []
    for i, j in board.cells():
        if board.provenance(i, j) is Provenance.AXIOM:
            continue
        label = board.label_at(i, j)
        if label is not None and label.is_definite:
            entries.append((board.ref_at(i), board.ref_at(j), label))
    return entries


def build_games(windows: list[SentenceWindow], level: int) -> list[Game]:
    """All level-sized entity combinations per window, closed and filtered.

    Windows with fewer entities than the level are discarded; candidates whose
    links conflict are skipped with a warning; candidates without a single
    definite non-axiom gold label are dropped.
    """
    if not MIN_LEVEL <= level <= MAX_LEVEL:
        raise InvalidLevel(f"level must be in [{MIN_LEVEL}, {MAX_LEVEL}], got {level}")
    games: list[Game] = []
    for window in windows:
        if len(window.entities) < level:
            continue
        by_id = {e.id: e for e in window.entities}
        for subset in combinations(window.entities, level):
            chosen = {e.id for e in subset}
            links = [
                (s, t, rel)
                for s, t, rel in window.gold_links
                if s in chosen and t in chosen
            ]
            board = build_board(list(subset))
            contradicted = False
            for s, t, rel in links:
                for src_ref, tgt_ref, point_rel in link_constraints(
                    by_id[s], by_id[t], rel
                ):
                    result = board.assert_user(
                        src_ref, tgt_ref, point_rel, provenance=Provenance.GOLD
                    )
                    if not result.consistent:
                        contradicted = True
                        break
                if contradicted:
                    break
            if contradicted:
                logger.warning(
                    "skipping contradictory gold for %s sentence %d subset %s",
                    window.doc_id, window.sentence_index, sorted(chosen),
                )
                continue
            gold = _gold_from_board(board)
            if not gold:
                continue
            games.append(
                Game(
                    game_id=game_id_for(
                        window.doc_id, window.sentence_index, sorted(chosen)
                    ),
                    doc_id=window.doc_id,
                    level=level,
                    text=window.text,
                    entities=list(subset),
                    gold=gold,
                    sentence_index=window.sentence_index,
                )
            )
    games.sort(
        key=lambda g: (
            g.doc_id,
            g.sentence_index if g.sentence_index is not None else -1,
            tuple(sorted(e.id for e in g.entities)),
        )
    )
    return games


def gold_board(game: Game) -> Board:
    """The closed gold board of a game; raises if the stored gold conflicts."""
    board = build_board(game.entities)
    for source, target, relation in game.gold:
        result = board.assert_user(source, target, relation, provenance=Provenance.GOLD)
        if not result.consistent:
            raise InconsistentGold(
                f"game {game.game_id}: stored gold labels conflict at "
                f"({source}, {target})"
            )
    return board


@dataclass
class LevelStats:
    level: int
    games: int = 0
    tokens: int = 0
    relations: dict[str, int] = field(
        default_factory=lambda: {"<": 0, "=": 0, ">": 0, "-": 0}
    )


@dataclass
class StatsTable:
    levels: list[LevelStats]

    def to_dict(self) -> dict:
        return {
            "levels": [
                {
                    "level": ls.level,
                    "games": ls.games,
                    "tokens": ls.tokens,
                    "relations": dict(ls.relations),
                }
                for ls in self.levels
            ]
        }


def corpus_stats(games: list[Game]) -> StatsTable:
    """Per-level game, whitespace-token, and relation-label counts."""
    by_level: dict[int, LevelStats] = {}
    for game in games:
        stats = by_level.setdefault(game.level, LevelStats(level=game.level))
        stats.games += 1
        stats.tokens += len(game.text.split())
        for _, _, relation in game.gold:
            stats.relations[relation.value] += 1
    return StatsTable([by_level[level] for level in sorted(by_level)])


# --- JSON Lines persistence --------------------------------------------------

def game_to_dict(game: Game) -> dict:
    return {
        "game_id": game.game_id,
        "doc_id": game.doc_id,
        "level": game.level,
        "text": game.text,
        "entities": [
            {
                "id": e.id,
                "text": e.text,
                "start": e.start,
                "end": e.end,
                "kind": e.kind.value,
                "is_dct": e.is_dct,
            }
            for e in game.entities
        ],
        "gold": [
            {"source": s, "target": t, "relation": r.value}
            for s, t, r in game.gold
        ],
    }


def game_from_dict(data: dict) -> Game:
    try:
        entities = [
            Entity(
                id=e["id"],
                text=e["text"],
                start=e["start"],
                end=e["end"],
                kind=Kind(e["kind"]),
                is_dct=e["is_dct"],
            )
            for e in data["entities"]
        ]
        gold = [
            (g["source"], g["target"], PointRelation(g["relation"]))
            for g in data["gold"]
        ]
        return Game(
            game_id=data["game_id"],
            doc_id=data["doc_id"],
            level=data["level"],
            text=data["text"],
            entities=entities,
            gold=gold,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusFormatError(f"malformed game record: {exc}") from exc


def dump_games(games: list[Game]) -> str:
    return "".join(
        json.dumps(game_to_dict(g), ensure_ascii=False) + "\n" for g in games
    )


def write_games(games: list[Game], path: str | Path) -> None:
    Path(path).write_text(dump_games(games), encoding="utf-8")


def read_games(path: str | Path) -> list[Game]:
    games: list[Game] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"line {lineno}: invalid JSON: {exc}") from exc
            games.append(game_from_dict(data))
    return games


def games_by_level(games: list[Game]) -> dict[int, list[Game]]:
    grouped: dict[int, list[Game]] = {}
    for game in games:
        grouped.setdefault(game.level, []).append(game)
    return grouped
