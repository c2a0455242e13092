"""HTTP + WebSocket surface over the game engine.

One FastAPI app per ServiceConfig. All game mutations delegate to GameEngine
(which serializes per session); asset GETs read the content-addressed store
lock-free and flip matching rounds to Presented. The WS endpoint replays a
session's event stream from a client cursor, then follows it live.
"""

from __future__ import annotations

import asyncio
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response, WebSocket
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.concurrency import run_in_threadpool
from starlette.websockets import WebSocketDisconnect

from ..catalog import Catalog, GeoCoord, default_catalog_path, load_catalog
from ..engine import (
    EngineConfig,
    EventLog,
    GameEngine,
    RoundState,
    TickClock,
    WS_EVENT_KINDS,
    rebuild_leaderboard,
)
from ..errors import (
    ArchiGuesserError,
    BackendError,
    CacheError,
    DegenerateError,
    DuplicateGuessError,
    GenerationError,
    ImageFormatError,
    MissingCornersError,
    ModeMismatchError,
    NotFoundError,
    ParseError,
    PhaseError,
    UnknownPlayerError,
    ValidationError,
)
from ..genai import AssetStore, GenerationService, get_backend
from ..scoring import GameMode, Guess
from ..vision import (
    BoardSpec,
    MarkerDictionary,
    decode_image_bytes,
    default_board_spec,
    generate_dictionary,
    load_board_spec,
    read_board,
)
from .config import ServiceConfig, load_service_config
from .schemas import CreateSessionIn, GuessIn

FRAME_MEDIA_TYPES = ("image/png", "image/x-portable-graymap")

_STATUS_BY_ERROR = (
    (MissingCornersError, 422),
    (NotFoundError, 404),
    (UnknownPlayerError, 404),
    (PhaseError, 409),
    (DuplicateGuessError, 409),
    (ModeMismatchError, 422),
    (ImageFormatError, 422),
    (DegenerateError, 422),
    (ParseError, 422),
    (ValidationError, 422),
    (GenerationError, 502),
    (BackendError, 502),
    (CacheError, 500),
)


def _status_for(exc: ArchiGuesserError) -> int:
    for kind, status in _STATUS_BY_ERROR:
        if isinstance(exc, kind):
            return status
    return 500


def _round_doc(session_mode: GameMode, r: RoundState) -> dict:
    return {
        "index": r.index,
        "phase": r.phase.value,
        "mode": session_mode.value,
        "asset_key": r.asset_key,
        "media_type": r.asset_media_type,
        "presented_at": r.presented_at,
        "deadline": r.deadline,
        "guessed_players": sorted(r.guesses),
    }


def _style_doc(style) -> dict:
    return {
        "style_id": style.id,
        "name": style.name,
        "region_id": style.region_id,
        "period": {"start": style.period.start, "end": style.period.end},
        "origin": {"lat": style.origin.lat, "lon": style.origin.lon},
        "characteristics": list(style.characteristics),
        "architects": list(style.architects),
        "summary": style.summary,
    }


def _score_doc(score) -> dict:
    return {
        "style_points": score.style_points,
        "geo_points": score.geo_points,
        "time_points": score.time_points,
        "total": score.total,
        "distance_km": score.distance_km,
        "year_delta": score.year_delta,
    }


def frame_to_guess(
    data: bytes, dictionary: MarkerDictionary, board_spec: BoardSpec, catalog: Catalog
) -> Guess:
    """Camera frame -> Guess: token markers to style ids, slider to year.

    Tokens are read in marker-id order; with two tokens the lower id fills
    the original slot and the higher the fused slot, and the guess coordinate
    is the lower-id token's position.
    """
    gray = decode_image_bytes(data)
    reading = read_board(gray, dictionary, board_spec, catalog)
    if not reading.tokens:
        raise ValidationError("no style token visible on the board")
    if len(reading.tokens) > 2:
        raise ValidationError(
            f"{len(reading.tokens)} style tokens visible; a guess uses at most 2"
        )
    if reading.slider_year is None:
        raise ValidationError("time slider marker not visible on the board")
    tokens = sorted(reading.tokens, key=lambda t: t[0])
    style_ids = tuple(catalog.style_for_marker(mid).id for mid, _ in tokens)
    coord = tokens[0][1]
    return Guess(style_ids=style_ids, coord=coord, year=reading.slider_year)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config if config is not None else load_service_config()
    clock = TickClock() if config.deterministic else time.time

    catalog = load_catalog(config.catalog_path or default_catalog_path())
    store = AssetStore(config.assets_dir, clock=clock)
    generation = GenerationService(store, get_backend(config.gen_backend))
    Path(config.log_path).parent.mkdir(parents=True, exist_ok=True)
    log = EventLog(config.log_path)
    engine = GameEngine(
        catalog,
        generation,
        log,
        leaderboard=rebuild_leaderboard(log),
        clock=clock,
        config=EngineConfig(max_rounds=config.max_rounds,
                            deadline_seconds=config.deadline_seconds),
        deterministic=config.deterministic,
    )
    dictionary = generate_dictionary(64, 5, 7, seed=42)
    board_spec = (
        load_board_spec(config.board_spec_path) if config.board_spec_path
        else default_board_spec()
    )

    app = FastAPI(title="archiguesser", docs_url=None, redoc_url=None)
    app.state.engine = engine
    app.state.catalog = catalog
    app.state.config = config
    app.state.dictionary = dictionary
    app.state.board_spec = board_spec

    @app.exception_handler(ArchiGuesserError)
    async def domain_error(request: Request, exc: ArchiGuesserError):
        detail: dict = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, MissingCornersError):
            detail["missing"] = exc.missing
        return JSONResponse(status_code=_status_for(exc), content={"detail": detail})

    # -- catalog lookups ----------------------------------------------------

    @app.get("/api/styles")
    def list_styles():
        # Identity fields only: summaries and architects stay reveal-time.
        return {
            "styles": [
                {
                    "style_id": s.id,
                    "name": s.name,
                    "region_id": s.region_id,
                    "period": {"start": s.period.start, "end": s.period.end},
                }
                for s in sorted(catalog.styles, key=lambda s: s.id)
            ]
        }

    # -- sessions ---------------------------------------------------------

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionIn):
        if body.mode not in tuple(m.value for m in GameMode):
            raise HTTPException(400, f"unknown mode {body.mode!r}")
        if not body.players:
            raise HTTPException(400, "a session needs at least one player")
        session = engine.create_session(
            body.mode,
            [(p.player_id, p.display_name) for p in body.players],
            seed=body.seed,
        )
        return {
            "session_id": session.id,
            "mode": session.mode.value,
            "seed": session.rng_seed,
            "players": [
                {"player_id": p.player_id, "display_name": p.display_name}
                for p in session.players
            ],
        }

    @app.get("/api/sessions/{session_id}")
    def session_detail(session_id: str):
        session = engine.get_session(session_id)
        with session.lock:
            rounds = [_round_doc(session.mode, r) for r in session.rounds]
        return {
            "session_id": session.id,
            "mode": session.mode.value,
            "seed": session.rng_seed,
            "players": [
                {"player_id": p.player_id, "display_name": p.display_name}
                for p in session.players
            ],
            "rounds": rounds,
        }

    # -- rounds ------------------------------------------------------------

    @app.post("/api/sessions/{session_id}/rounds", status_code=201)
    def start_round(session_id: str):
        session = engine.get_session(session_id)
        round_state = engine.start_round(session)
        return _round_doc(session.mode, round_state)

    @app.get("/api/assets/{key}")
    def get_asset(key: str):
        asset = generation.fetch_asset(key)
        engine.note_asset_fetched(key)
        return Response(content=asset.data, media_type=asset.media_type)

    # -- guesses -------------------------------------------------------------

    async def _guess_from_multipart(request: Request) -> tuple[str, Guess]:
        form = await request.form()
        frame = form.get("frame")
        player_id = form.get("player_id")
        if frame is None or not hasattr(frame, "read"):
            raise ValidationError("multipart guess needs a file field named 'frame'")
        if not player_id:
            raise ValidationError("multipart guess needs a 'player_id' field")
        declared = (frame.content_type or "").split(";")[0].strip().lower()
        if declared and declared not in FRAME_MEDIA_TYPES:
            raise HTTPException(
                415, f"frame must be one of {FRAME_MEDIA_TYPES}, got {declared!r}"
            )
        data = await frame.read()
        guess = await run_in_threadpool(
            frame_to_guess, data, dictionary, board_spec, catalog
        )
        return str(player_id), guess

    @app.post("/api/sessions/{session_id}/rounds/{round_index}/guess")
    async def submit_guess(session_id: str, round_index: int, request: Request):
        session = engine.get_session(session_id)
        content_type = request.headers.get("content-type", "")
        if content_type.split(";")[0].strip().lower() == "multipart/form-data":
            player_id, guess = await _guess_from_multipart(request)
        else:
            body = GuessIn.model_validate(await request.json())
            player_id = body.player_id
            guess = Guess(
                style_ids=tuple(body.style_ids),
                coord=GeoCoord(body.coord.lat, body.coord.lon),
                year=body.year,
            )
        score = await run_in_threadpool(
            engine.submit_guess, session, round_index, player_id, guess
        )
        return {
            "player_id": player_id,
            "guess": {
                "style_ids": list(guess.style_ids),
                "coord": {"lat": guess.coord.lat, "lon": guess.coord.lon},
                "year": guess.year,
            },
            "score": _score_doc(score),
        }

    # -- reveal / leaderboard ---------------------------------------------------

    @app.get("/api/sessions/{session_id}/rounds/{round_index}/reveal")
    def reveal(session_id: str, round_index: int):
        session = engine.get_session(session_id)
        payload = engine.reveal(session, round_index)
        landmark = None
        if payload.landmark is not None:
            landmark = {
                "landmark_id": payload.landmark.id,
                "name": payload.landmark.name,
                "coord": {"lat": payload.landmark.coord.lat,
                          "lon": payload.landmark.coord.lon},
            }
        return {
            "round": payload.round_index,
            "style": _style_doc(payload.style),
            "truth_coord": {"lat": payload.truth_coord.lat, "lon": payload.truth_coord.lon},
            "truth_period": {"start": payload.truth_period.start,
                             "end": payload.truth_period.end},
            "scores": {
                pid: {
                    "display_name": session.player(pid).display_name,
                    **_score_doc(score),
                }
                for pid, score in sorted(payload.scores.items())
            },
            "landmark": landmark,
            "fusion_style": _style_doc(payload.fusion_style) if payload.fusion_style else None,
            "poem_text": payload.poem_text,
        }

    @app.get("/api/leaderboard")
    def leaderboard(top: int | None = None):
        if top is not None and top < 1:
            raise HTTPException(422, "top must be >= 1")
        entries = engine.leaderboard_top(top)
        return {
            "entries": [
                {
                    "player_id": e.player_id,
                    "display_name": e.display_name,
                    "total_points": e.total_points,
                    "rounds_played": e.rounds_played,
                    "last_update": e.last_update,
                }
                for e in entries
            ]
        }

    # -- events over websocket ---------------------------------------------------

    @app.websocket("/api/sessions/{session_id}/events")
    async def events(ws: WebSocket, session_id: str, cursor: int = 0):
        try:
            engine.get_session(session_id)
        except NotFoundError:
            # Policy violation close; the session id is not ours.
            await ws.close(code=1008)
            return
        await ws.accept()
        loop = asyncio.get_running_loop()
        wake = asyncio.Event()

        def on_append(event):
            if event.session_id == session_id and event.kind in WS_EVENT_KINDS:
                loop.call_soon_threadsafe(wake.set)

        log.add_listener(on_append)
        delivered = max(0, cursor)
        try:
            receiver = asyncio.ensure_future(ws.receive())
            while True:
                stream = [
                    e for e in log.session_events(session_id)
                    if e.kind in WS_EVENT_KINDS
                ]
                while delivered < len(stream):
                    event = stream[delivered]
                    delivered += 1
                    await ws.send_json(
                        {
                            "cursor": delivered,
                            "ts": event.ts,
                            "kind": event.kind,
                            "payload": event.payload,
                        }
                    )
                wake.clear()
                waiter = asyncio.ensure_future(wake.wait())
                done, _ = await asyncio.wait(
                    {waiter, receiver}, return_when=asyncio.FIRST_COMPLETED
                )
                if receiver in done:
                    message = receiver.result()
                    if message.get("type") == "websocket.disconnect":
                        waiter.cancel()
                        break
                    # Clients have nothing meaningful to send; ignore and rearm.
                    receiver = asyncio.ensure_future(ws.receive())
                if waiter not in done:
                    waiter.cancel()
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            log.remove_listener(on_append)

    ui_dir = config.ui_dir
    if ui_dir is None:
        bundled = Path(__file__).resolve().parents[3] / "frontend" / "dist"
        ui_dir = str(bundled) if bundled.is_dir() else None
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:
    """Run uvicorn until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
