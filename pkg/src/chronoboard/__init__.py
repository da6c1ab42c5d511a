"""Temporal board annotation: point algebra, corpus tools, game engine, service."""

from .board import (
    Board,
    Entity,
    EndpointId,
    IntervalRelation,
    Kind,
    Provenance,
    Side,
    build_board,
    interval_to_points,
    set_entity_kind,
)
from .corpus import Game, build_games, corpus_stats, gold_board, read_games, write_games
from .engine import Episode, ScoringPolicy, comparison, export_log, reset, step
from .relations import (
    ClosureResult,
    PointGraph,
    PointRelation,
    assert_relation,
    close,
    compose,
    invert,
    oracle_minimal_labels,
)
from .timeml import TimeMLDoc, parse_timeml, split_sentences

__version__ = "0.1.0"

__all__ = [
    "Board",
    "ClosureResult",
    "Entity",
    "EndpointId",
    "Episode",
    "Game",
    "IntervalRelation",
    "Kind",
    "PointGraph",
    "PointRelation",
    "Provenance",
    "ScoringPolicy",
    "Side",
    "TimeMLDoc",
    "assert_relation",
    "build_board",
    "build_games",
    "close",
    "comparison",
    "compose",
    "corpus_stats",
    "export_log",
    "gold_board",
    "interval_to_points",
    "invert",
    "oracle_minimal_labels",
    "parse_timeml",
    "read_games",
    "reset",
    "set_entity_kind",
    "split_sentences",
    "step",
    "write_games",
]
