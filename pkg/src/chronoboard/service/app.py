"""FastAPI application wiring the store to the JSON endpoints."""

from __future__ import annotations

from contextlib import asynccontextmanager

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..annotation import PairSuggestion
from ..board import Kind
from ..engine import step as engine_step
from ..errors import (
    BoardComplete,
    CellNotPlayable,
    ChronoboardError,
    EpisodeFinished,
    EpisodeInProgress,
    UnknownId,
)
from ..relations import PointRelation
from .config import ServiceConfig
from .schemas import (
    AnnotateResponse,
    ConflictView,
    EntityCreateRequest,
    EntityKindRequest,
    EpisodeStateResponse,
    HealthResponse,
    LevelCount,
    LevelsResponse,
    NewGameRequest,
    NextPairResponse,
    RelationRequest,
    SessionStateResponse,
    StepRequest,
    StepResponse,
    episode_state,
    session_state,
    step_response,
)
from .store import SessionStore

_CONFLICT_ERRORS = (CellNotPlayable, EpisodeFinished, EpisodeInProgress, BoardComplete)


def _parse_relation(raw: str) -> PointRelation:
    try:
        return PointRelation(raw)
    except ValueError:
        raise RequestValidationError(
            [{"loc": ("body", "relation"), "msg": f"unknown relation {raw!r}"}]
        ) from None


def create_app(store: SessionStore, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        if config.snapshot_path:
            store.write_snapshot(config.snapshot_path)

    app = FastAPI(title="chronoboard", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=config.cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ChronoboardError)
    async def domain_error_handler(_: Request, exc: ChronoboardError):
        if isinstance(exc, UnknownId):
            status = 404
        elif isinstance(exc, _CONFLICT_ERRORS):
            status = 409
        else:
            status = 422
        return JSONResponse(
            status_code=status, content={"error": exc.code, "message": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": "ValidationError", "message": str(exc.errors())},
        )

    # --- game mode -----------------------------------------------------------

    @app.get("/api/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse()

    @app.get("/api/levels", response_model=LevelsResponse)
    def levels() -> LevelsResponse:
        return LevelsResponse(
            levels=[
                LevelCount(level=level, games=count)
                for level, count in store.level_counts()
            ]
        )

    @app.post("/api/games", response_model=EpisodeStateResponse)
    def new_game(request: NewGameRequest) -> EpisodeStateResponse:
        episode_id, episode = store.new_episode(request.level)
        return episode_state(episode_id, episode)

    @app.get("/api/games/{episode_id}", response_model=EpisodeStateResponse)
    def game_state(episode_id: str) -> EpisodeStateResponse:
        episode = store.episode(episode_id)
        with store.lock(episode_id):
            return episode_state(episode_id, episode)

    @app.post("/api/games/{episode_id}/step", response_model=StepResponse)
    def game_step(episode_id: str, request: StepRequest) -> StepResponse:
        episode = store.episode(episode_id)
        relation = _parse_relation(request.relation)
        with store.lock(episode_id):
            outcome = engine_step(episode, request.source, request.target, relation)
            return step_response(episode, outcome)

    # --- annotation mode --------------------------------------------------------

    @app.post("/api/annotations", response_model=SessionStateResponse)
    async def new_annotation(request: Request) -> SessionStateResponse:
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("application/json"):
            payload = await request.json()
        else:
            payload = (await request.body()).decode("utf-8")
        session = store.new_annotation(payload)
        return session_state(session)

    @app.get("/api/annotations/{session_id}", response_model=SessionStateResponse)
    def annotation_state(session_id: str) -> SessionStateResponse:
        session = store.annotation(session_id)
        with store.lock(session_id):
            return session_state(session)

    @app.post("/api/annotations/{session_id}/entities", response_model=SessionStateResponse)
    def add_entity(session_id: str, request: EntityCreateRequest) -> SessionStateResponse:
        session = store.annotation(session_id)
        with store.lock(session_id):
            session.add_entity(request.start, request.end)
            return session_state(session)

    @app.delete(
        "/api/annotations/{session_id}/entities/{entity_id}",
        response_model=SessionStateResponse,
    )
    def remove_entity(session_id: str, entity_id: str) -> SessionStateResponse:
        session = store.annotation(session_id)
        with store.lock(session_id):
            session.remove_entity(entity_id)
            return session_state(session)

    @app.patch(
        "/api/annotations/{session_id}/entities/{entity_id}",
        response_model=SessionStateResponse,
    )
    def set_entity_kind(
        session_id: str, entity_id: str, request: EntityKindRequest
    ) -> SessionStateResponse:
        session = store.annotation(session_id)
        try:
            kind = Kind(request.kind)
        except ValueError:
            raise RequestValidationError(
                [{"loc": ("body", "kind"), "msg": f"unknown kind {request.kind!r}"}]
            ) from None
        with store.lock(session_id):
            session.set_kind(entity_id, kind)
            return session_state(session)

    @app.post(
        "/api/annotations/{session_id}/relations", response_model=AnnotateResponse
    )
    def annotate(session_id: str, request: RelationRequest) -> AnnotateResponse:
        session = store.annotation(session_id)
        relation = _parse_relation(request.relation)
        with store.lock(session_id):
            outcome = session.annotate(request.source, request.target, relation)
            conflict = None
            if outcome.conflict_cell is not None:
                conflict = ConflictView(
                    source=outcome.conflict_cell[0],
                    target=outcome.conflict_cell[1],
                    existing=outcome.existing.value,
                    attempted=outcome.attempted.value,
                )
            return AnnotateResponse(
                coherent=outcome.coherent,
                inferred=[
                    RelationRequest(source=s, target=t, relation=r.value)
                    for s, t, r in outcome.inferred
                ],
                conflict=conflict,
                session=session_state(session),
            )

    @app.post(
        "/api/annotations/{session_id}/detect-entities",
        response_model=SessionStateResponse,
    )
    def detect_entities(session_id: str) -> SessionStateResponse:
        session = store.annotation(session_id)
        with store.lock(session_id):
            session.detect_entities()
            return session_state(session)

    @app.get(
        "/api/annotations/{session_id}/next-pair", response_model=NextPairResponse
    )
    def next_pair(
        session_id: str, mode: str = Query(default="random", pattern="^(random|guided)$")
    ) -> NextPairResponse:
        session = store.annotation(session_id)
        with store.lock(session_id):
            suggestion: PairSuggestion = session.next_pair(mode)
        return NextPairResponse(
            source=suggestion.source,
            target=suggestion.target,
            mode=suggestion.mode,
            confidence=suggestion.confidence,
        )

    @app.get("/api/annotations/{session_id}/export")
    def export_annotation(session_id: str) -> JSONResponse:
        session = store.annotation(session_id)
        with store.lock(session_id):
            return JSONResponse(content=session.export())

    return app
