"""HTTP API behavior: endpoints, error mapping, and store semantics."""

from __future__ import annotations

import threading

import pytest
from fastapi.testclient import TestClient

from chronoboard.corpus import build_games
from chronoboard.engine import reset, step
from chronoboard.errors import CellNotPlayable
from chronoboard.relations import PointRelation
from chronoboard.service import ServiceConfig, SessionStore, create_app
from chronoboard.service.config import load_config


@pytest.fixture
def fixture_games(fixture_windows):
    games = []
    for level in range(2, 6):
        games.extend(build_games(fixture_windows, level))
    return games


@pytest.fixture
def client(fixture_games):
    store = SessionStore(fixture_games, seed=7)
    app = create_app(store, ServiceConfig(cors_origins=["*"]))
    with TestClient(app) as c:
        yield c


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_levels_reports_counts(client, fixture_games):
    response = client.get("/api/levels")
    assert response.status_code == 200
    counts = {item["level"]: item["games"] for item in response.json()["levels"]}
    assert counts == {2: 6, 3: 9, 4: 5, 5: 1}


def test_new_game_returns_board(client):
    response = client.post("/api/games", json={"level": 3})
    assert response.status_code == 200
    body = response.json()
    assert body["level"] == 3
    assert body["status"] == "in_progress"
    assert body["score"] == 0.0
    assert body["board"]["endpoints"]
    assert any(cell["playable"] for cell in body["board"]["cells"])
    axioms = [c for c in body["board"]["cells"] if c["provenance"] == "axiom"]
    assert all(c["relation"] == "<" for c in axioms)


def test_new_game_unknown_level_is_validation_error(client):
    response = client.post("/api/games", json={"level": 9})
    assert response.status_code == 422
    assert response.json()["error"] == "InvalidLevel"


def test_game_lifecycle_to_completion(client):
    body = client.post("/api/games", json={"level": 2}).json()
    episode_id = body["episode_id"]
    score = 0.0
    done = False
    while not done:
        state = client.get(f"/api/games/{episode_id}").json()
        playable = [c for c in state["board"]["cells"] if c["playable"]]
        assert playable
        cell = playable[0]
        response = client.post(
            f"/api/games/{episode_id}/step",
            json={"source": cell["source"], "target": cell["target"], "relation": "-"},
        )
        assert response.status_code == 200
        outcome = response.json()
        done = outcome["done"]
        score = outcome["score"]
    assert outcome["comparison"] is not None
    assert outcome["status"] in ("won_coherent", "lost_incoherent")
    assert score == pytest.approx(outcome["score"])
    final = client.get(f"/api/games/{episode_id}").json()
    assert final["done"] is True
    assert final["comparison"] is not None


def test_step_on_finished_episode_conflicts(client):
    body = client.post("/api/games", json={"level": 2}).json()
    episode_id = body["episode_id"]
    cells = [c for c in body["board"]["cells"] if c["playable"]]
    done = False
    for cell in cells:
        if done:
            break
        outcome = client.post(
            f"/api/games/{episode_id}/step",
            json={"source": cell["source"], "target": cell["target"], "relation": "-"},
        ).json()
        done = outcome["done"]
    response = client.post(
        f"/api/games/{episode_id}/step",
        json={"source": cells[0]["source"], "target": cells[0]["target"], "relation": "<"},
    )
    assert response.status_code == 409
    assert response.json()["error"] == "EpisodeFinished"


def test_step_on_filled_cell_conflicts(client):
    body = client.post("/api/games", json={"level": 3}).json()
    episode_id = body["episode_id"]
    cell = next(c for c in body["board"]["cells"] if c["playable"])
    first = client.post(
        f"/api/games/{episode_id}/step",
        json={"source": cell["source"], "target": cell["target"], "relation": "-"},
    )
    assert first.status_code == 200
    second = client.post(
        f"/api/games/{episode_id}/step",
        json={"source": cell["source"], "target": cell["target"], "relation": "-"},
    )
    assert second.status_code == 409
    assert second.json()["error"] == "CellNotPlayable"


def test_unknown_ids_are_404(client):
    assert client.get("/api/games/ep-999999").status_code == 404
    assert client.get("/api/annotations/an-999999").status_code == 404
    body = client.get("/api/games/ep-999999").json()
    assert body["error"] == "UnknownId"


def test_bad_relation_is_validation_error(client):
    body = client.post("/api/games", json={"level": 2}).json()
    cell = next(c for c in body["board"]["cells"] if c["playable"])
    response = client.post(
        f"/api/games/{body['episode_id']}/step",
        json={"source": cell["source"], "target": cell["target"], "relation": "<<"},
    )
    assert response.status_code == 422


def test_annotation_lifecycle(client):
    created = client.post(
        "/api/annotations", json={"dct": "2024-01-01", "text": "aa bb cc"}
    )
    assert created.status_code == 200
    state = created.json()
    session_id = state["session_id"]
    assert state["text"].startswith("Document creation time: 2024-01-01 ")
    assert state["entities"][0]["is_dct"] is True

    added = client.post(
        f"/api/annotations/{session_id}/entities", json={"start": 35, "end": 37}
    )
    assert added.status_code == 200
    assert len(added.json()["entities"]) == 2
    added = client.post(
        f"/api/annotations/{session_id}/entities", json={"start": 38, "end": 40}
    )
    assert len(added.json()["entities"]) == 3

    related = client.post(
        f"/api/annotations/{session_id}/relations",
        json={"source": "dct.end", "target": "e1.start", "relation": "<"},
    )
    assert related.status_code == 200
    assert related.json()["coherent"] is True
    assert related.json()["session"]["coherent"] is True

    patched = client.patch(
        f"/api/annotations/{session_id}/entities/e1", json={"kind": "instant"}
    )
    assert patched.status_code == 200
    refs = [ep["ref"] for ep in patched.json()["board"]["endpoints"]]
    assert "e1.point" in refs

    suggestion = client.get(
        f"/api/annotations/{session_id}/next-pair", params={"mode": "guided"}
    )
    assert suggestion.status_code == 200
    assert suggestion.json()["mode"] == "guided"

    export = client.get(f"/api/annotations/{session_id}/export")
    assert export.status_code == 200
    assert export.json()["format_version"] == 1

    removed = client.delete(f"/api/annotations/{session_id}/entities/e1")
    assert removed.status_code == 200
    assert len(removed.json()["entities"]) == 2


def test_plain_text_annotation_body(client):
    response = client.post(
        "/api/annotations",
        content="Plain text to annotate.",
        headers={"content-type": "text/plain"},
    )
    assert response.status_code == 200
    assert response.json()["text"] == "Plain text to annotate."


def test_empty_text_is_422(client):
    response = client.post("/api/annotations", json={"text": ""})
    assert response.status_code == 422
    assert response.json()["error"] == "EmptyText"


def test_annotation_incoherence_flag(client):
    state = client.post("/api/annotations", json={"text": "aa bb cc"}).json()
    session_id = state["session_id"]
    for start, end in ((0, 2), (3, 5), (6, 8)):
        client.post(
            f"/api/annotations/{session_id}/entities", json={"start": start, "end": end}
        )
    client.post(
        f"/api/annotations/{session_id}/relations",
        json={"source": "e1.end", "target": "e2.start", "relation": "<"},
    )
    client.post(
        f"/api/annotations/{session_id}/relations",
        json={"source": "e2.end", "target": "e3.start", "relation": "<"},
    )
    response = client.post(
        f"/api/annotations/{session_id}/relations",
        json={"source": "e1.end", "target": "e3.start", "relation": ">"},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["coherent"] is False
    assert body["conflict"]["existing"] == "<"
    assert body["conflict"]["attempted"] == ">"
    assert body["session"]["coherent"] is False


def test_export_reimport_round_trip(client):
    state = client.post("/api/annotations", json={"text": "aa bb"}).json()
    session_id = state["session_id"]
    client.post(f"/api/annotations/{session_id}/entities", json={"start": 0, "end": 2})
    client.post(f"/api/annotations/{session_id}/entities", json={"start": 3, "end": 5})
    client.post(
        f"/api/annotations/{session_id}/relations",
        json={"source": "e1.end", "target": "e2.start", "relation": "<"},
    )
    export = client.get(f"/api/annotations/{session_id}/export").json()
    reimported = client.post("/api/annotations", json=export)
    assert reimported.status_code == 200
    new_id = reimported.json()["session_id"]
    second = client.get(f"/api/annotations/{new_id}/export").json()
    assert second == export


def test_next_pair_on_complete_board_conflicts(client):
    state = client.post("/api/annotations", json={"text": "aa"}).json()
    session_id = state["session_id"]
    client.post(f"/api/annotations/{session_id}/entities", json={"start": 0, "end": 2})
    response = client.get(f"/api/annotations/{session_id}/next-pair")
    assert response.status_code == 409
    assert response.json()["error"] == "BoardComplete"


def test_detect_entities_endpoint(client):
    state = client.post(
        "/api/annotations", json={"text": "He ran on 2013-03-22."}
    ).json()
    session_id = state["session_id"]
    response = client.post(f"/api/annotations/{session_id}/detect-entities")
    assert response.status_code == 200
    texts = [e["text"] for e in response.json()["entities"]]
    assert "2013-03-22" in texts


def test_cors_headers_present(client):
    response = client.get("/api/health", headers={"origin": "http://localhost:5173"})
    assert response.headers.get("access-control-allow-origin") in ("*", "http://localhost:5173")


def test_seeded_stores_sample_identically(fixture_games):
    first = SessionStore(fixture_games, seed=99)
    second = SessionStore(fixture_games, seed=99)
    for level in (2, 3, 4):
        assert first.sample_game(level).game_id == second.sample_game(level).game_id


def test_api_matches_direct_engine_calls(fixture_games):
    # the API is a thin adapter: identical action sequences agree call by call
    store = SessionStore(fixture_games, seed=13)
    app = create_app(store, ServiceConfig())
    with TestClient(app) as api:
        body = api.post("/api/games", json={"level": 2}).json()
        game_id = body["game_id"]
        game = next(g for g in fixture_games if g.game_id == game_id)
        episode = reset(game)
        cells = [c for c in body["board"]["cells"] if c["playable"]]
        for cell in cells:
            if episode.done:
                break
            request = {
                "source": cell["source"], "target": cell["target"], "relation": "<",
            }
            response = api.post(f"/api/games/{body['episode_id']}/step", json=request)
            try:
                outcome = step(
                    episode, cell["source"], cell["target"], PointRelation.BEFORE
                )
            except CellNotPlayable:
                assert response.status_code == 409
                assert response.json()["error"] == "CellNotPlayable"
                continue
            assert response.status_code == 200
            data = response.json()
            assert data["reward"] == outcome.reward
            assert data["done"] == outcome.done
            assert data["score"] == episode.score
            assert len(data["inferred"]) == len(outcome.inferred)


def test_concurrent_steps_on_one_episode_serialize(client):
    body = client.post("/api/games", json={"level": 3}).json()
    episode_id = body["episode_id"]
    cells = [c for c in body["board"]["cells"] if c["playable"]]
    results = []

    def hit(cell):
        response = client.post(
            f"/api/games/{episode_id}/step",
            json={"source": cell["source"], "target": cell["target"], "relation": "-"},
        )
        results.append(response.status_code)

    threads = [threading.Thread(target=hit, args=(cells[0],)) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(results) == [200, 409]


def test_config_env_overrides(tmp_path, monkeypatch):
    config_file = tmp_path / "config.json"
    config_file.write_text(
        '{"port": 9000, "seed": 1, "scoring": {"step_match": 2.0}}', encoding="utf-8"
    )
    monkeypatch.setenv("TG_SEED", "42")
    monkeypatch.setenv("TG_SNAPSHOT_PATH", str(tmp_path / "snap.json"))
    config = load_config(config_file)
    assert config.port == 9000
    assert config.seed == 42  # env wins
    assert config.snapshot_path == str(tmp_path / "snap.json")
    assert config.scoring.step_match == 2.0


def test_snapshot_written_on_shutdown(fixture_games, tmp_path):
    snap = tmp_path / "snapshot.json"
    store = SessionStore(fixture_games, seed=1)
    config = ServiceConfig(snapshot_path=str(snap))
    app = create_app(store, config)
    with TestClient(app) as api:
        api.post("/api/annotations", json={"text": "aa bb"})
    assert snap.exists()
    assert "annotations" in snap.read_text(encoding="utf-8")
