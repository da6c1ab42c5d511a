"""In-memory session store with per-session serialization."""

from __future__ import annotations

import json
import random
import threading
from pathlib import Path

from ..annotation import Session, create_session
from ..corpus import Game, games_by_level
from ..engine import Episode, ScoringPolicy, export_log, reset
from ..errors import InvalidLevel, UnknownId


class SessionStore:
    """Episodes and annotation sessions keyed by generated ids.

    Creation is serialized by a store lock; each session carries its own lock
    so concurrent requests against one session never interleave, while
    distinct sessions proceed in parallel.
    """

    def __init__(
        self,
        games: list[Game],
        seed: int | None = None,
        scoring: ScoringPolicy | None = None,
    ):
        self._games = games_by_level(games)
        self._rng = random.Random(seed)
        self._scoring = scoring or ScoringPolicy()
        self._episodes: dict[str, Episode] = {}
        self._annotations: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._create_lock = threading.Lock()
        self._episode_seq = 0
        self._session_seq = 0

    # --- corpus ---------------------------------------------------------------

    def level_counts(self) -> list[tuple[int, int]]:
        return [(level, len(games)) for level, games in sorted(self._games.items())]

    def sample_game(self, level: int) -> Game:
        games = self._games.get(level)
        if not games:
            raise InvalidLevel(f"no games available at level {level}")
        return self._rng.choice(games)

    # --- episodes ---------------------------------------------------------------

    def new_episode(self, level: int) -> tuple[str, Episode]:
        with self._create_lock:
            game = self.sample_game(level)
            self._episode_seq += 1
            episode_id = f"ep-{self._episode_seq:06d}"
            episode = reset(game, self._scoring)
            self._episodes[episode_id] = episode
            self._locks[episode_id] = threading.Lock()
        return episode_id, episode

    def episode(self, episode_id: str) -> Episode:
        try:
            return self._episodes[episode_id]
        except KeyError:
            raise UnknownId(f"unknown episode {episode_id!r}") from None

    # --- annotation sessions ------------------------------------------------------

    def new_annotation(self, payload: dict | str) -> Session:
        with self._create_lock:
            self._session_seq += 1
            session_id = f"an-{self._session_seq:06d}"
            session = create_session(
                payload, session_id=session_id, seed=self._rng.randrange(2**32)
            )
            self._annotations[session_id] = session
            self._locks[session_id] = threading.Lock()
        return session

    def annotation(self, session_id: str) -> Session:
        try:
            return self._annotations[session_id]
        except KeyError:
            raise UnknownId(f"unknown session {session_id!r}") from None

    def lock(self, session_id: str) -> threading.Lock:
        try:
            return self._locks[session_id]
        except KeyError:
            raise UnknownId(f"unknown id {session_id!r}") from None

    # --- snapshot -------------------------------------------------------------------

    def snapshot(self) -> dict:
        return {
            "episodes": {
                episode_id: export_log(episode)
                for episode_id, episode in self._episodes.items()
            },
            "annotations": {
                session_id: session.export()
                for session_id, session in self._annotations.items()
            },
        }

    def write_snapshot(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.snapshot(), ensure_ascii=False, indent=2),
            encoding="utf-8",
        )
