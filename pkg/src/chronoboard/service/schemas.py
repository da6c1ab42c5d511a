"""Pydantic request and response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..annotation import Session
from ..board import Board, Provenance
from ..engine import CellComparison, Episode, StepOutcome


class HealthResponse(BaseModel):
    status: str = "ok"


class LevelCount(BaseModel):
    level: int
    games: int


class LevelsResponse(BaseModel):
    levels: list[LevelCount]


class NewGameRequest(BaseModel):
    level: int


class StepRequest(BaseModel):
    source: str
    target: str
    relation: str


class RelationRequest(BaseModel):
    source: str
    target: str
    relation: str


class EntityCreateRequest(BaseModel):
    start: int
    end: int


class EntityKindRequest(BaseModel):
    kind: str


class EndpointView(BaseModel):
    ref: str
    entity_id: str
    side: str
    entity_text: str
    kind: str
    is_dct: bool


class CellView(BaseModel):
    source: str
    target: str
    relation: str | None
    provenance: str
    playable: bool


class BoardView(BaseModel):
    endpoints: list[EndpointView]
    cells: list[CellView]


class EntityView(BaseModel):
    id: str
    text: str
    start: int
    end: int
    kind: str
    is_dct: bool


class ComparisonCellView(BaseModel):
    source: str
    target: str
    predicted: str
    gold: str | None
    provenance: str
    mismatch: bool


class EpisodeStateResponse(BaseModel):
    episode_id: str
    game_id: str
    level: int
    text: str
    entities: list[EntityView]
    board: BoardView
    score: float
    status: str
    done: bool
    comparison: list[ComparisonCellView] | None = None


class StepResponse(BaseModel):
    reward: float
    terminal_reward: float
    done: bool
    status: str
    score: float
    inferred: list[RelationRequest]
    board: BoardView
    comparison: list[ComparisonCellView] | None = None


class SessionStateResponse(BaseModel):
    session_id: str
    text: str
    dct: str | None
    entities: list[EntityView]
    board: BoardView
    coherent: bool


class ConflictView(BaseModel):
    source: str
    target: str
    existing: str
    attempted: str


class AnnotateResponse(BaseModel):
    coherent: bool
    inferred: list[RelationRequest] = Field(default_factory=list)
    conflict: ConflictView | None = None
    session: SessionStateResponse


class NextPairResponse(BaseModel):
    source: str
    target: str
    mode: str
    confidence: float | None = None


class ErrorBody(BaseModel):
    error: str
    message: str


# --- view builders -----------------------------------------------------------


def board_view(board: Board | None, playable_only_empty: bool = True) -> BoardView:
    if board is None or not getattr(board, "entities", None):
        return BoardView(endpoints=[], cells=[])
    by_id = {e.id: e for e in board.entities}
    endpoints = [
        EndpointView(
            ref=ep.ref,
            entity_id=ep.entity_id,
            side=ep.side.value,
            entity_text=by_id[ep.entity_id].text,
            kind=by_id[ep.entity_id].kind.value,
            is_dct=by_id[ep.entity_id].is_dct,
        )
        for ep in board.endpoints
    ]
    cells = []
    for i, j in board.cells():
        provenance = board.provenance(i, j)
        label = board.label_at(i, j)
        cells.append(
            CellView(
                source=board.ref_at(i),
                target=board.ref_at(j),
                relation=label.value if label is not None else None,
                provenance=provenance.value,
                playable=provenance is Provenance.EMPTY,
            )
        )
    return BoardView(endpoints=endpoints, cells=cells)


def entity_views(entities) -> list[EntityView]:
    return [
        EntityView(
            id=e.id,
            text=e.text,
            start=e.start,
            end=e.end,
            kind=e.kind.value,
            is_dct=e.is_dct,
        )
        for e in entities
    ]


def comparison_views(cells: list[CellComparison] | None):
    if cells is None:
        return None
    return [
        ComparisonCellView(
            source=c.source,
            target=c.target,
            predicted=c.predicted.value,
            gold=c.gold.value if c.gold is not None else None,
            provenance=c.provenance.value,
            mismatch=c.mismatch,
        )
        for c in cells
    ]


def episode_state(episode_id: str, episode: Episode) -> EpisodeStateResponse:
    from ..engine import comparison as episode_comparison

    return EpisodeStateResponse(
        episode_id=episode_id,
        game_id=episode.game.game_id,
        level=episode.game.level,
        text=episode.game.text,
        entities=entity_views(episode.game.entities),
        board=board_view(episode.board),
        score=episode.score,
        status=episode.status.value,
        done=episode.done,
        comparison=comparison_views(
            episode_comparison(episode) if episode.done else None
        ),
    )


def step_response(episode: Episode, outcome: StepOutcome) -> StepResponse:
    return StepResponse(
        reward=outcome.reward,
        terminal_reward=outcome.terminal_reward,
        done=outcome.done,
        status=outcome.status.value,
        score=episode.score,
        inferred=[
            RelationRequest(source=s, target=t, relation=r.value)
            for s, t, r in outcome.inferred
        ],
        board=board_view(episode.board),
        comparison=comparison_views(outcome.comparison),
    )


def session_state(session: Session) -> SessionStateResponse:
    return SessionStateResponse(
        session_id=session.session_id,
        text=session.text,
        dct=session.dct,
        entities=entity_views(session.entities()),
        board=board_view(session.board if session.entities() else None),
        coherent=session.coherent,
    )
