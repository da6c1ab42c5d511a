"""Episode lifecycle: rewards, termination, determinism, and comparison."""

from __future__ import annotations

import itertools
import random

import pytest

from chronoboard.board import Provenance
from chronoboard.corpus import Game
from chronoboard.engine import (
    EpisodeStatus,
    ScoringPolicy,
    comparison,
    export_log,
    reset,
    step,
)
from chronoboard.errors import (
    CellNotPlayable,
    EpisodeFinished,
    EpisodeInProgress,
    InvalidPair,
)
from chronoboard.relations import (
    DEFINITE_RELATIONS,
    PointGraph,
    PointRelation,
    oracle_minimal_labels,
)

from .helpers import make_game, make_instant, make_interval

B = PointRelation.BEFORE
A = PointRelation.AFTER
E = PointRelation.EQUAL
V = PointRelation.VAGUE


@pytest.fixture
def before_game():
    return make_game(["a", "b"], [("a", "b", "BEFORE")])


@pytest.fixture
def chain_game():
    return make_game(["a", "b", "c"], [("a", "b", "BEFORE")])


# --- reset -------------------------------------------------------------------

def test_reset_two_interval_game(before_game):
    ep = reset(before_game)
    assert ep.board.size == 4
    assert len(ep.board.cells()) == 6
    axioms = [c for c in ep.board.cells() if ep.board.provenance(*c) is Provenance.AXIOM]
    assert len(axioms) == 2
    assert len(ep.board.playable_cells()) == 4
    assert ep.status is EpisodeStatus.IN_PROGRESS
    assert ep.score == 0.0


def test_reset_interval_plus_instant_board():
    game = Game(
        game_id="g",
        doc_id="d",
        level=2,
        text="w0 w1",
        entities=[make_interval("a", 0, 2), make_instant("p", 4, 5)],
        gold=[("a.end", "p.point", B)],
    )
    ep = reset(game)
    assert ep.board.size == 3
    assert len(ep.board.cells()) == 3
    assert len(ep.board.playable_cells()) == 2


def test_reset_degenerate_single_instant_game():
    game = Game(
        game_id="g",
        doc_id="d",
        level=2,
        text="w0",
        entities=[make_instant("p", 0, 1)],
        gold=[],
    )
    ep = reset(game)
    assert ep.status is EpisodeStatus.WON_COHERENT
    assert ep.score == 10.0
    assert ep.done


# --- step rewards ------------------------------------------------------------

def test_matching_choice_scores_plus_one(chain_game):
    ep = reset(chain_game)
    outcome = step(ep, "a.start", "b.start", B)
    assert outcome.reward == 1.0
    assert not outcome.done


def test_no_gold_cell_scores_half(chain_game):
    ep = reset(chain_game)
    outcome = step(ep, "b.end", "c.start", V)
    assert outcome.reward == 0.5


def test_mismatch_scores_minus_one(chain_game):
    ep = reset(chain_game)
    outcome = step(ep, "a.start", "b.start", A)
    assert outcome.reward == -1.0


def test_vague_against_definite_gold_is_a_mismatch(chain_game):
    ep = reset(chain_game)
    outcome = step(ep, "a.start", "b.start", V)
    assert outcome.reward == -1.0


# --- scripted episodes ---------------------------------------------------------

def test_all_correct_single_step_completion(before_game):
    # the first assertion lets closure infer the remaining three cells
    g = PointGraph(4)
    g.set_label(0, 1, B)
    g.set_label(2, 3, B)
    g.set_label(1, 2, B)  # a.end < b.start
    consistent, labels = oracle_minimal_labels(g)
    assert consistent
    assert all(r.is_definite for r in labels.values())

    ep = reset(before_game)
    outcome = step(ep, "a.end", "b.start", B)
    assert outcome.reward == 1.0
    assert outcome.terminal_reward == 10.0
    assert outcome.done
    assert outcome.status is EpisodeStatus.WON_COHERENT
    assert len(outcome.inferred) == 3
    assert ep.score == 11.0
    assert len(ep.steps) == 1


def test_one_mismatch_coherent_completion(before_game):
    ep = reset(before_game)
    outcome = step(ep, "a.start", "b.end", A)
    assert outcome.reward == -1.0
    assert outcome.terminal_reward == 10.0
    assert outcome.status is EpisodeStatus.WON_COHERENT
    assert ep.score == 9.0
    mismatches = [c for c in outcome.comparison if c.mismatch]
    assert len(mismatches) == 4  # every gold cell disagrees


def test_contradiction_episode(before_game):
    ep = reset(before_game)
    first = step(ep, "a.start", "b.start", B)
    assert first.reward == 1.0
    inferred_cell = ep.board.cell_for("a.start", "b.end")
    assert ep.board.provenance(*inferred_cell) is Provenance.INFERRED
    outcome = step(ep, "a.start", "b.end", A)
    assert outcome.reward == -1.0
    assert outcome.terminal_reward == -10.0
    assert outcome.status is EpisodeStatus.LOST_INCOHERENT
    assert outcome.done
    assert ep.score == -10.0
    # the last action conflicts with the closure of its prefix
    g = PointGraph(4)
    g.set_label(0, 1, B)
    g.set_label(2, 3, B)
    g.set_label(0, 2, B)  # prefix: a.start < b.start
    g.set_label(0, 3, A)  # last action: a.start > b.end
    consistent, _ = oracle_minimal_labels(g)
    assert not consistent


def test_four_step_completion(before_game):
    ep = reset(before_game)
    rewards = []
    for source, target in [
        ("a.start", "b.end"),
        ("a.start", "b.start"),
        ("a.end", "b.end"),
        ("a.end", "b.start"),
    ]:
        rewards.append(step(ep, source, target, B))
    assert [o.reward for o in rewards] == [1.0, 1.0, 1.0, 1.0]
    assert [o.done for o in rewards] == [False, False, False, True]
    assert all(not o.inferred for o in rewards)
    assert ep.score == 14.0


# --- playability -----------------------------------------------------------------

def test_axiom_cell_not_playable(before_game):
    ep = reset(before_game)
    with pytest.raises(CellNotPlayable):
        step(ep, "a.start", "a.end", B)


def test_user_cell_not_replayable(before_game):
    ep = reset(before_game)
    step(ep, "a.start", "b.end", B)
    with pytest.raises(CellNotPlayable):
        step(ep, "a.start", "b.end", B)


def test_vague_placeholder_not_replayable(before_game):
    ep = reset(before_game)
    step(ep, "a.start", "b.end", V)
    with pytest.raises(CellNotPlayable):
        step(ep, "a.start", "b.end", B)


def test_inferred_cell_with_same_label_not_playable(before_game):
    ep = reset(before_game)
    step(ep, "a.start", "b.start", B)  # infers a.start < b.end
    with pytest.raises(CellNotPlayable):
        step(ep, "a.start", "b.end", B)
    with pytest.raises(CellNotPlayable):
        step(ep, "a.start", "b.end", V)


def test_step_after_finish_raises(before_game):
    ep = reset(before_game)
    step(ep, "a.end", "b.start", B)
    with pytest.raises(EpisodeFinished):
        step(ep, "a.start", "b.start", B)


def test_unknown_pair_raises(before_game):
    ep = reset(before_game)
    with pytest.raises(InvalidPair):
        step(ep, "a.start", "zz.end", B)
    with pytest.raises(InvalidPair):
        step(ep, "a.start", "a.start", B)


def test_reversed_orientation_is_normalized(before_game):
    ep = reset(before_game)
    outcome = step(ep, "b.start", "a.end", A)  # b.start > a.end, i.e. a.end < b.start
    assert outcome.reward == 1.0
    assert ep.steps[0].source == "a.end"
    assert ep.steps[0].relation is B


# --- vague placeholders and completion ---------------------------------------------

def test_vague_counts_as_filled_for_completion(chain_game):
    ep = reset(chain_game)
    playable = list(ep.board.playable_cells())
    last = None
    for i, j in playable[:-1]:
        step(ep, ep.board.ref_at(i), ep.board.ref_at(j), V)
    i, j = playable[-1]
    last = step(ep, ep.board.ref_at(i), ep.board.ref_at(j), V)
    assert last.done
    assert last.status is EpisodeStatus.WON_COHERENT


def test_inference_overwrites_vague_placeholder_without_reward_change(before_game):
    ep = reset(before_game)
    first = step(ep, "a.start", "b.end", V)  # gold '<' so this scores -1
    assert first.reward == -1.0
    score_after_first = ep.score
    outcome = step(ep, "a.end", "b.start", B)
    cell = ep.board.cell_for("a.start", "b.end")
    assert ep.board.label_at(*cell) is B
    assert ep.board.provenance(*cell) is Provenance.INFERRED
    assert ("a.start", "b.end", B) in outcome.inferred
    # the earlier placeholder reward is not retroactively adjusted
    assert ep.score == score_after_first + outcome.reward + outcome.terminal_reward


def test_playable_count_strictly_decreases(chain_game):
    rng = random.Random(3)
    for _ in range(20):
        ep = reset(chain_game)
        while not ep.done:
            before = len(ep.board.playable_cells())
            cells = ep.board.playable_cells()
            i, j = rng.choice(cells)
            step(
                ep,
                ep.board.ref_at(i),
                ep.board.ref_at(j),
                rng.choice((B, A, E, V)),
            )
            after = len(ep.board.playable_cells())
            assert after <= before - 1


# --- reward envelope and determinism --------------------------------------------

def test_rewards_stay_in_policy_envelope(chain_game):
    rng = random.Random(5)
    for _ in range(50):
        ep = reset(chain_game)
        while not ep.done:
            cells = ep.board.playable_cells()
            i, j = rng.choice(cells)
            outcome = step(
                ep,
                ep.board.ref_at(i),
                ep.board.ref_at(j),
                rng.choice((B, A, E, V)),
            )
            assert outcome.reward in (1.0, 0.5, -1.0)
            if outcome.done:
                assert outcome.terminal_reward in (10.0, -10.0)
        cells_total = len([
            c for c in ep.board.cells()
            if ep.board.provenance(*c) is not Provenance.AXIOM
        ])
        assert -cells_total - 10 <= ep.score <= cells_total + 10


def test_replay_determinism(before_game):
    actions = [
        ("a.start", "b.end", B),
        ("a.start", "b.start", B),
        ("a.end", "b.end", B),
        ("a.end", "b.start", B),
    ]

    def run():
        ep = reset(before_game)
        trace = []
        for source, target, relation in actions:
            outcome = step(ep, source, target, relation)
            trace.append(
                (outcome.reward, outcome.terminal_reward, tuple(outcome.inferred))
            )
        return trace, ep.score

    assert run() == run()


def test_definite_choices_on_empty_cells_never_contradict(before_game):
    # closure completeness makes empty cells unconstrained; exhaustive check
    cells = [("a.start", "b.start"), ("a.start", "b.end"),
             ("a.end", "b.start"), ("a.end", "b.end")]
    for order in itertools.permutations(range(4)):
        for labels in itertools.product(DEFINITE_RELATIONS, repeat=4):
            ep = reset(before_game)
            for idx in order:
                if ep.done:
                    break
                source, target = cells[idx]
                cell = ep.board.cell_for(source, target)
                if ep.board.provenance(*cell) is not Provenance.EMPTY:
                    continue
                outcome = step(ep, source, target, labels[idx])
                assert outcome.status is not EpisodeStatus.LOST_INCOHERENT


# --- comparison --------------------------------------------------------------

def test_comparison_requires_done(before_game):
    ep = reset(before_game)
    with pytest.raises(EpisodeInProgress):
        comparison(ep)


def test_comparison_cases(chain_game):
    ep = reset(chain_game)
    step(ep, "a.start", "b.start", B)   # match
    step(ep, "b.end", "c.start", B)     # no gold, definite prediction
    while not ep.done:
        cells = ep.board.playable_cells()
        i, j = cells[0]
        step(ep, ep.board.ref_at(i), ep.board.ref_at(j), V)
    report = {(c.source, c.target): c for c in comparison(ep)}

    match = report[("a.start", "b.start")]
    assert match.predicted is B and match.gold is B and not match.mismatch

    extra = report[("b.end", "c.start")]
    assert extra.predicted is B and extra.gold is None and not extra.mismatch

    # a cell left vague against definite gold is a mismatch, unless closure
    # filled it meanwhile
    vague_cells = [
        c for c in report.values()
        if not c.predicted.is_definite and c.gold is not None
    ]
    assert all(c.mismatch for c in vague_cells)


def test_comparison_mismatch_on_wrong_prediction(before_game):
    ep = reset(before_game)
    outcome = step(ep, "a.start", "b.end", A)
    report = {(c.source, c.target): c for c in outcome.comparison}
    wrong = report[("a.start", "b.end")]
    assert wrong.predicted is A and wrong.gold is B and wrong.mismatch


# --- export -----------------------------------------------------------------

def test_export_log_shape(before_game):
    ep = reset(before_game)
    step(ep, "a.end", "b.start", B)
    log = export_log(ep)
    assert log["game_id"] == before_game.game_id
    assert log["final_score"] == 11.0
    assert log["status"] == "won_coherent"
    assert len(log["steps"]) == 1
    record = log["steps"][0]
    assert record["source"] == "a.end"
    assert record["relation"] == "<"
    assert len(record["inferred"]) == 3


def test_policy_override_changes_totals(before_game):
    policy = ScoringPolicy(step_match=2.0, terminal_coherent=20.0)
    ep = reset(before_game, policy)
    step(ep, "a.end", "b.start", B)
    assert ep.score == 22.0
