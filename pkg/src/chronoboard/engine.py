"""Episodic play over a game: reset, step, scoring, and endgame comparison.

The play board starts with only the interval axioms; the player labels one
endpoint pair per step while closure fills what follows.  Step rewards
compare the chosen relation with the closed gold annotation; a terminal
bonus is granted for a coherent completion, a penalty for contradicting the
inferred timeline.  Many episodes may run concurrently as long as each is
driven by a single caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .board import Board, Provenance, build_board
from .corpus import Game
from .errors import CellNotPlayable, EpisodeFinished, EpisodeInProgress, InvalidPair
from .relations import PointRelation, invert


@dataclass(frozen=True)
class ScoringPolicy:
    step_match: float = 1.0
    step_no_gold: float = 0.5
    step_mismatch: float = -1.0
    terminal_coherent: float = 10.0
    terminal_incoherent: float = -10.0

    @classmethod
    def from_dict(cls, data: dict) -> "ScoringPolicy":
        return cls(**{k: float(v) for k, v in data.items()})


class EpisodeStatus(str, Enum):
    IN_PROGRESS = "in_progress"
    WON_COHERENT = "won_coherent"
    LOST_INCOHERENT = "lost_incoherent"


@dataclass
class StepRecord:
    source: str
    target: str
    relation: PointRelation
    reward: float
    inferred: list[tuple[str, str, PointRelation]]


@dataclass
class CellComparison:
    source: str
    target: str
    predicted: PointRelation
    gold: PointRelation | None
    provenance: Provenance
    mismatch: bool


@dataclass
class StepOutcome:
    reward: float
    terminal_reward: float
    done: bool
    status: EpisodeStatus
    inferred: list[tuple[str, str, PointRelation]]
    comparison: list[CellComparison] | None = None


class Episode:
    """One playthrough of a game; mutate only through :func:`step`."""

    def __init__(self, game: Game, policy: ScoringPolicy):
        self.game = game
        self.policy = policy
        self.board: Board = build_board(game.entities)
        self.score: float = 0.0
        self.steps: list[StepRecord] = []
        self.status = EpisodeStatus.IN_PROGRESS
        self._gold = game.gold_map()
        if self.board.filled():
            self.status = EpisodeStatus.WON_COHERENT
            self.score += policy.terminal_coherent

    @property
    def done(self) -> bool:
        return self.status is not EpisodeStatus.IN_PROGRESS

    def gold_label(self, i: int, j: int) -> PointRelation | None:
        """Gold label for the canonical cell (i < j), if annotated."""
        source, target = self.board.ref_at(i), self.board.ref_at(j)
        return self._gold.get((source, target))


def reset(game: Game, policy: ScoringPolicy | None = None) -> Episode:
    """Fresh episode: axioms seeded and closed, empty score.

    A board without a single playable cell completes immediately as a
    coherent (if trivial) timeline.
    """
    return Episode(game, policy or ScoringPolicy())


def step(
    episode: Episode,
    source: str,
    target: str,
    relation: PointRelation,
) -> StepOutcome:
    """Apply one labelled choice and score it.

    Empty cells take the choice and propagate.  A definite choice that
    disagrees with a closure-inferred label contradicts the timeline and
    terminates the episode; axiom, user, and placeholder cells are not
    playable (one choice per cell).
    """
    if episode.done:
        raise EpisodeFinished("episode is already finished")
    board = episode.board
    i, j = board.cell_for(source, target)
    canonical_relation = relation
    if board.index_of(source) > board.index_of(target):
        canonical_relation = invert(relation)
    source, target = board.ref_at(i), board.ref_at(j)

    provenance = board.provenance(i, j)
    if provenance is Provenance.INFERRED:
        existing = board.label_at(i, j)
        if not (canonical_relation.is_definite and canonical_relation is not existing):
            raise CellNotPlayable(f"cell ({source}, {target}) is already filled")
    elif provenance is not Provenance.EMPTY:
        raise CellNotPlayable(f"cell ({source}, {target}) is not playable")

    policy = episode.policy
    gold = episode.gold_label(i, j)
    if gold is None:
        reward = policy.step_no_gold
    elif canonical_relation is gold:
        reward = policy.step_match
    else:
        reward = policy.step_mismatch

    result = board.assert_user(source, target, canonical_relation)
    terminal = 0.0
    inferred: list[tuple[str, str, PointRelation]] = []
    if not result.consistent:
        episode.status = EpisodeStatus.LOST_INCOHERENT
        terminal = policy.terminal_incoherent
    else:
        inferred = [
            (board.ref_at(p), board.ref_at(q), r)
            for (p, q), r in result.newly_inferred
        ]
        if board.filled():
            episode.status = EpisodeStatus.WON_COHERENT
            terminal = policy.terminal_coherent

    episode.score += reward + terminal
    episode.steps.append(
        StepRecord(source, target, canonical_relation, reward, inferred)
    )
    done = episode.done
    return StepOutcome(
        reward=reward,
        terminal_reward=terminal,
        done=done,
        status=episode.status,
        inferred=inferred,
        comparison=comparison(episode) if done else None,
    )


def comparison(episode: Episode) -> list[CellComparison]:
    """Endgame report: predicted vs gold per visible non-axiom cell.

    A definite prediction against absent gold is not a mismatch (it scored
    the no-gold reward); an unlabelled or vague cell against definite gold is.
    """
    if not episode.done:
        raise EpisodeInProgress("comparison is available once the episode ends")
    board = episode.board
    cells: list[CellComparison] = []
    for i, j in board.cells():
        provenance = board.provenance(i, j)
        if provenance is Provenance.AXIOM:
            continue
        label = board.label_at(i, j)
        predicted = label if label is not None else PointRelation.VAGUE
        gold = episode.gold_label(i, j)
        if predicted.is_definite:
            mismatch = gold is not None and gold is not predicted
        else:
            mismatch = gold is not None
        cells.append(
            CellComparison(
                source=board.ref_at(i),
                target=board.ref_at(j),
                predicted=predicted,
                gold=gold,
                provenance=provenance,
                mismatch=mismatch,
            )
        )
    return cells


def export_log(episode: Episode) -> dict:
    """Episode log: steps with rewards and propagated labels, final score, status."""
    return {
        "game_id": episode.game.game_id,
        "steps": [
            {
                "source": record.source,
                "target": record.target,
                "relation": record.relation.value,
                "reward": record.reward,
                "inferred": [
                    {"source": s, "target": t, "relation": r.value}
                    for s, t, r in record.inferred
                ],
            }
            for record in episode.steps
        ],
        "final_score": episode.score,
        "status": episode.status.value,
    }
