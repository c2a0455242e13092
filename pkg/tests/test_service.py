"""HTTP surface: endpoint contracts, error mapping, multipart frames, WS stream."""

import json

import jsonschema
import numpy as np
import pytest
from fastapi.testclient import TestClient
from starlette.websockets import WebSocketDisconnect

from archiguesser.service import (
    RESPONSE_SCHEMAS,
    ServiceConfig,
    create_app,
    frame_to_guess,
    load_service_config,
)
from archiguesser.errors import ParseError, ValidationError
from archiguesser.vision import encode_image_bytes

from .conftest import synthesize_frame

PLAYERS = [
    {"player_id": "p1", "display_name": "Ada"},
    {"player_id": "p2", "display_name": "Grace"},
]

A_GUESS = {"style_ids": ["gothic"], "coord": {"lat": 48.0, "lon": 2.0}, "year": 1200}
B_GUESS = {"style_ids": ["baroque"], "coord": {"lat": 41.9, "lon": 12.5}, "year": 1650}


def check(doc, schema_name):
    jsonschema.validate(doc, RESPONSE_SCHEMAS[schema_name])
    return doc


def service_config(base_dir) -> ServiceConfig:
    return ServiceConfig(
        assets_dir=str(base_dir / "assets"),
        log_path=str(base_dir / "events.jsonl"),
        deterministic=True,
    )


@pytest.fixture(scope="module")
def api(tmp_path_factory):
    base = tmp_path_factory.mktemp("service")
    app = create_app(service_config(base))
    with TestClient(app) as client:
        yield client


def new_session(api, mode="Image", players=PLAYERS, seed=1):
    response = api.post(
        "/api/sessions", json={"mode": mode, "players": players, "seed": seed}
    )
    assert response.status_code == 201
    return check(response.json(), "session")["session_id"]


def started_round(api, sid):
    """Start a round and pull its asset so guesses are accepted."""
    response = api.post(f"/api/sessions/{sid}/rounds")
    assert response.status_code == 201
    doc = check(response.json(), "round")
    asset = api.get(f"/api/assets/{doc['asset_key']}")
    assert asset.status_code == 200
    return doc, asset


def error_of(response) -> str:
    return response.json()["detail"]["error"]


# -- sessions -------------------------------------------------------------


def test_create_session_and_detail(api):
    sid = new_session(api, seed=42)
    detail = api.get(f"/api/sessions/{sid}")
    assert detail.status_code == 200
    doc = check(detail.json(), "session_detail")
    assert doc["mode"] == "Image"
    assert doc["seed"] == 42
    assert doc["rounds"] == []


def test_create_session_rejects_bad_requests(api):
    assert api.post("/api/sessions", json={"mode": "Karaoke", "players": PLAYERS}).status_code == 400
    assert api.post("/api/sessions", json={"mode": "Image", "players": []}).status_code == 400
    assert api.post("/api/sessions", json={"players": PLAYERS}).status_code == 422
    duplicate = [PLAYERS[0], PLAYERS[0]]
    response = api.post("/api/sessions", json={"mode": "Image", "players": duplicate})
    assert response.status_code == 422
    assert error_of(response) == "ValidationError"


def test_unknown_session_maps_to_404(api):
    response = api.get("/api/sessions/s99999")
    assert response.status_code == 404
    assert error_of(response) == "NotFoundError"
    assert api.post("/api/sessions/s99999/rounds").status_code == 404


# -- round lifecycle -------------------------------------------------------------


def test_full_round_over_http(api):
    sid = new_session(api, seed=7)
    round_doc, asset = started_round(api, sid)
    assert round_doc["index"] == 0
    assert round_doc["phase"] == "AssetReady"
    assert round_doc["media_type"] == "image/png"
    assert asset.headers["content-type"] == "image/png"
    assert asset.content[:8] == b"\x89PNG\r\n\x1a\n"

    detail = api.get(f"/api/sessions/{sid}").json()
    assert detail["rounds"][0]["phase"] == "Presented"
    assert detail["rounds"][0]["deadline"] is not None

    for player, guess in (("p1", A_GUESS), ("p2", B_GUESS)):
        response = api.post(
            f"/api/sessions/{sid}/rounds/0/guess",
            json={"player_id": player, **guess},
        )
        assert response.status_code == 200
        doc = check(response.json(), "guess_response")
        assert doc["player_id"] == player
        assert doc["guess"]["style_ids"] == guess["style_ids"]

    detail = api.get(f"/api/sessions/{sid}").json()
    assert detail["rounds"][0]["phase"] == "Scored"
    assert detail["rounds"][0]["guessed_players"] == ["p1", "p2"]

    reveal = api.get(f"/api/sessions/{sid}/rounds/0/reveal")
    assert reveal.status_code == 200
    doc = check(reveal.json(), "reveal")
    assert set(doc["scores"]) == {"p1", "p2"}
    assert doc["landmark"] is None and doc["fusion_style"] is None

    board = api.get("/api/leaderboard")
    assert board.status_code == 200
    entries = check(board.json(), "leaderboard")["entries"]
    assert {"p1", "p2"} <= {e["player_id"] for e in entries}


def test_poem_round_serves_wav(api):
    sid = new_session(api, mode="Poem", seed=3)
    round_doc, asset = started_round(api, sid)
    assert round_doc["media_type"] == "audio/wav"
    assert asset.content[:4] == b"RIFF"
    api.post(f"/api/sessions/{sid}/rounds/0/guess", json={"player_id": "p1", **A_GUESS})
    api.post(f"/api/sessions/{sid}/rounds/0/guess", json={"player_id": "p2", **B_GUESS})
    doc = api.get(f"/api/sessions/{sid}/rounds/0/reveal").json()
    assert doc["poem_text"] is not None
    assert len(doc["poem_text"].splitlines()) >= 8


def test_guess_error_mapping(api):
    sid = new_session(api, seed=9)
    url = f"/api/sessions/{sid}/rounds/0/guess"

    start = api.post(f"/api/sessions/{sid}/rounds").json()
    early = api.post(url, json={"player_id": "p1", **A_GUESS})
    assert early.status_code == 409 and error_of(early) == "PhaseError"

    api.get(f"/api/assets/{start['asset_key']}")
    missing_round = api.post(
        f"/api/sessions/{sid}/rounds/5/guess", json={"player_id": "p1", **A_GUESS}
    )
    assert missing_round.status_code == 404 and error_of(missing_round) == "NotFoundError"

    stranger = api.post(url, json={"player_id": "p9", **A_GUESS})
    assert stranger.status_code == 404 and error_of(stranger) == "UnknownPlayerError"

    year_zero = api.post(url, json={"player_id": "p1", **dict(A_GUESS, year=0)})
    assert year_zero.status_code == 422 and error_of(year_zero) == "ValidationError"

    two_styles = api.post(
        url, json={"player_id": "p1", **dict(A_GUESS, style_ids=["gothic", "baroque"])}
    )
    assert two_styles.status_code == 422 and error_of(two_styles) == "ModeMismatchError"

    assert api.post(url, json={"player_id": "p1", **A_GUESS}).status_code == 200
    duplicate = api.post(url, json={"player_id": "p1", **B_GUESS})
    assert duplicate.status_code == 409 and error_of(duplicate) == "DuplicateGuessError"


def test_reveal_and_round_sequencing_errors(api):
    sid = new_session(api, seed=10)
    too_soon = api.get(f"/api/sessions/{sid}/rounds/0/reveal")
    assert too_soon.status_code == 404

    api.post(f"/api/sessions/{sid}/rounds")
    not_scored = api.get(f"/api/sessions/{sid}/rounds/0/reveal")
    assert not_scored.status_code == 409 and error_of(not_scored) == "PhaseError"

    second = api.post(f"/api/sessions/{sid}/rounds")
    assert second.status_code == 409 and error_of(second) == "PhaseError"


def test_unknown_asset_404(api):
    response = api.get(f"/api/assets/{'f' * 64}")
    assert response.status_code == 404
    assert error_of(response) == "NotFoundError"


def test_leaderboard_rejects_bad_top(api):
    assert api.get("/api/leaderboard?top=0").status_code == 422
    assert api.get("/api/leaderboard?top=1").status_code == 200


def test_styles_listing(api, catalog):
    doc = check(api.get("/api/styles").json(), "styles")
    listed = doc["styles"]
    assert len(listed) == len(catalog.styles)
    assert [s["style_id"] for s in listed] == sorted(s.id for s in catalog.styles)
    by_id = {s.id: s for s in catalog.styles}
    for entry in listed:
        style = by_id[entry["style_id"]]
        assert entry["name"] == style.name
        assert entry["region_id"] == style.region_id
        assert entry["period"] == {"start": style.period.start, "end": style.period.end}
        # the listing must not leak reveal-time material
        assert "summary" not in entry and "architects" not in entry


# -- multipart frames -------------------------------------------------------------


def frame_bytes(dictionary, board_spec, tokens, slider_year, media_type="image/png"):
    frame = synthesize_frame(
        dictionary, board_spec, tokens=tokens, slider_year=slider_year, units=40.0
    )
    return encode_image_bytes(frame, media_type)


def test_multipart_guess_matches_json_guess(api, dictionary, board_spec, catalog):
    png = frame_bytes(dictionary, board_spec, [(7, 250.0, 250.0)], 1200)
    expected = frame_to_guess(png, dictionary, board_spec, catalog)

    sid = new_session(api, seed=11)
    started_round(api, sid)
    url = f"/api/sessions/{sid}/rounds/0/guess"
    from_frame = api.post(
        url,
        files={"frame": ("frame.png", png, "image/png")},
        data={"player_id": "p1"},
    )
    assert from_frame.status_code == 200
    from_json = api.post(
        url,
        json={
            "player_id": "p2",
            "style_ids": list(expected.style_ids),
            "coord": {"lat": expected.coord.lat, "lon": expected.coord.lon},
            "year": expected.year,
        },
    )
    assert from_json.status_code == 200
    frame_doc = check(from_frame.json(), "guess_response")
    json_doc = check(from_json.json(), "guess_response")
    assert frame_doc["guess"] == json_doc["guess"]
    assert frame_doc["score"] == json_doc["score"]


def test_multipart_pgm_accepted(api, dictionary, board_spec):
    pgm = frame_bytes(
        dictionary, board_spec, [(7, 250.0, 250.0)], 1200,
        media_type="image/x-portable-graymap",
    )
    sid = new_session(api, seed=12)
    started_round(api, sid)
    response = api.post(
        f"/api/sessions/{sid}/rounds/0/guess",
        files={"frame": ("frame.pgm", pgm, "image/x-portable-graymap")},
        data={"player_id": "p1"},
    )
    assert response.status_code == 200


def test_multipart_two_tokens_in_sights(api, dictionary, board_spec, catalog):
    png = frame_bytes(dictionary, board_spec, [(9, 300.0, 200.0), (6, 600.0, 350.0)], 800)
    sid = new_session(api, mode="Sights", seed=13)
    started_round(api, sid)
    response = api.post(
        f"/api/sessions/{sid}/rounds/0/guess",
        files={"frame": ("frame.png", png, "image/png")},
        data={"player_id": "p1"},
    )
    assert response.status_code == 200
    doc = response.json()
    # Marker-id order decides the [original, fused] slots; 6 < 9.
    assert doc["guess"]["style_ids"] == [
        catalog.style_for_marker(6).id,
        catalog.style_for_marker(9).id,
    ]


def test_multipart_frame_errors(api, dictionary, board_spec):
    sid = new_session(api, seed=14)
    started_round(api, sid)
    url = f"/api/sessions/{sid}/rounds/0/guess"

    def post_frame(data, media_type="image/png"):
        return api.post(
            url,
            files={"frame": ("frame.bin", data, media_type)},
            data={"player_id": "p1"},
        )

    png_ok = frame_bytes(dictionary, board_spec, [(7, 250.0, 250.0)], 1200)
    assert post_frame(png_ok, media_type="image/jpeg").status_code == 415

    blank = encode_image_bytes(np.full((480, 640), 255, np.uint8))
    response = post_frame(blank)
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["error"] == "MissingCornersError"
    assert detail["missing"] == [0, 1, 2, 3]

    no_token = frame_bytes(dictionary, board_spec, [], 1200)
    response = post_frame(no_token)
    assert response.status_code == 422 and error_of(response) == "ValidationError"

    no_slider = frame_bytes(dictionary, board_spec, [(7, 250.0, 250.0)], None)
    response = post_frame(no_slider)
    assert response.status_code == 422 and error_of(response) == "ValidationError"

    garbage = post_frame(b"not an image at all")
    assert garbage.status_code == 422 and error_of(garbage) == "ImageFormatError"

    missing_player = api.post(url, files={"frame": ("f.png", png_ok, "image/png")})
    assert missing_player.status_code == 422


# -- websocket events -------------------------------------------------------------


def play_full_round(api, sid):
    started_round(api, sid)
    index = api.get(f"/api/sessions/{sid}").json()["rounds"][-1]["index"]
    api.post(f"/api/sessions/{sid}/rounds/{index}/guess", json={"player_id": "p1", **A_GUESS})
    api.post(f"/api/sessions/{sid}/rounds/{index}/guess", json={"player_id": "p2", **B_GUESS})
    api.get(f"/api/sessions/{sid}/rounds/{index}/reveal")


def test_ws_replays_round_events_in_order(api):
    sid = new_session(api, seed=15)
    play_full_round(api, sid)
    with api.websocket_connect(f"/api/sessions/{sid}/events") as ws:
        messages = [ws.receive_json() for _ in range(6)]
    for message in messages:
        check(message, "ws_event")
    assert [m["kind"] for m in messages] == [
        "round_started",
        "asset_ready",
        "guess_received",
        "guess_received",
        "round_scored",
        "revealed",
    ]
    assert [m["cursor"] for m in messages] == list(range(1, 7))
    assert messages[0]["payload"] == {"round": 0, "mode": "Image"}


def test_ws_cursor_resumes_after_reconnect(api):
    sid = new_session(api, seed=16)
    play_full_round(api, sid)
    with api.websocket_connect(f"/api/sessions/{sid}/events?cursor=4") as ws:
        tail = [ws.receive_json() for _ in range(2)]
    assert [m["kind"] for m in tail] == ["round_scored", "revealed"]
    assert [m["cursor"] for m in tail] == [5, 6]


def test_ws_follows_live_appends(api):
    sid = new_session(api, seed=17)
    with api.websocket_connect(f"/api/sessions/{sid}/events") as ws:
        api.post(f"/api/sessions/{sid}/rounds")
        first = ws.receive_json()
        second = ws.receive_json()
    assert first["kind"] == "round_started"
    assert second["kind"] == "asset_ready"


def test_ws_unknown_session_refused(api):
    with pytest.raises(WebSocketDisconnect) as excinfo:
        with api.websocket_connect("/api/sessions/nope/events"):
            pass
    assert excinfo.value.code == 1008


# -- persistence across restarts ------------------------------------------------


def test_leaderboard_survives_restart(tmp_path, catalog):
    config = service_config(tmp_path)
    with TestClient(create_app(config)) as client:
        sid = new_session(client, seed=20)
        play_full_round(client, sid)
        before = client.get("/api/leaderboard").json()["entries"]
    assert before
    with TestClient(create_app(config)) as client:
        after = client.get("/api/leaderboard").json()["entries"]
    assert after == before
    lines = (tmp_path / "events.jsonl").read_text(encoding="utf-8").splitlines()
    assert [json.loads(l)["kind"] for l in lines][-1] == "revealed"


# -- configuration layering -------------------------------------------------------------


def test_config_defaults():
    config = load_service_config(env={})
    assert config == ServiceConfig()


def test_config_file_env_cli_precedence(tmp_path):
    file_path = tmp_path / "svc.json"
    file_path.write_text(
        json.dumps({"port": 9000, "gen_backend": "live", "max_rounds": 5}),
        encoding="utf-8",
    )
    config = load_service_config(file_path, env={})
    assert (config.port, config.gen_backend, config.max_rounds) == (9000, "live", 5)

    env = {"ARCHIGUESSER_PORT": "9100", "ARCHIGUESSER_DETERMINISTIC": "yes"}
    config = load_service_config(file_path, env=env)
    assert config.port == 9100, "env beats file"
    assert config.deterministic is True
    assert config.gen_backend == "live", "file still fills what env leaves unset"

    config = load_service_config(file_path, env=env, cli={"port": 9200, "host": None})
    assert config.port == 9200, "cli beats env"
    assert config.host == ServiceConfig.host, "None means flag not given"


def test_config_rejects_bad_values(tmp_path):
    with pytest.raises(ParseError):
        load_service_config(env={"ARCHIGUESSER_PORT": "not-a-number"})
    with pytest.raises(ParseError):
        load_service_config(env={"ARCHIGUESSER_DETERMINISTIC": "perhaps"})
    with pytest.raises(ValidationError):
        load_service_config(env={}, cli={"warp_factor": 9})
    with pytest.raises(ValidationError):
        load_service_config(env={"ARCHIGUESSER_PORT": "70000"})
    bad_file = tmp_path / "bad.json"
    bad_file.write_text("{", encoding="utf-8")
    with pytest.raises(ParseError):
        load_service_config(bad_file, env={})
    with pytest.raises(ParseError):
        load_service_config(tmp_path / "absent.json", env={})
