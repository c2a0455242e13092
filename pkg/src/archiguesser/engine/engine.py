"""Session and round lifecycle: style draw, asset orchestration, reveal.

Rounds move strictly Created -> AssetReady -> Presented -> Scored ->
Revealed. The style draw avoids repeats within a session until the catalog
is exhausted, then the pool resets. All mutation happens under one lock per
session; with a seeded rng, a deterministic clock, and the mock generation
backend, a full session transcript is byte-reproducible.

The clock is injectable. Setting ARCHIGUESSER_DETERMINISTIC=1 (or passing
deterministic=True) swaps in a tick counter so timestamps, seeds, and
deadlines are reproducible without network time.
"""

from __future__ import annotations

import enum
import os
import random
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..catalog import Catalog, GeoCoord, Landmark, StyleRecord, YearInterval
from ..errors import (
    BackendError,
    DuplicateGuessError,
    GenerationError,
    NotFoundError,
    PhaseError,
    UnknownPlayerError,
    ValidationError,
)
from ..genai import GenerationService, GenKind, GenRequest
from ..prompts import (
    build_image_prompt,
    build_poem_prompt,
    build_sights_request,
    validate_poem,
)
from ..scoring import GameMode, Guess, RoundSpec, Score, score_guess
from .events import EventLog
from .leaderboard import LeaderboardEntry, LeaderboardStore

POEM_ATTEMPTS = 3

Clock = Callable[[], float]


class TickClock:
    """Monotone counter clock: first call returns start, then +step each call."""

    def __init__(self, start: float = 1.0, step: float = 1.0):
        self._next = start
        self._step = step
        self._lock = threading.Lock()

    def __call__(self) -> float:
        with self._lock:
            now = self._next
            self._next += self._step
            return now


class RoundPhase(str, enum.Enum):
    Created = "Created"
    AssetReady = "AssetReady"
    Presented = "Presented"
    Scored = "Scored"
    Revealed = "Revealed"


_PHASE_RANK = {p: i for i, p in enumerate(RoundPhase)}


@dataclass(frozen=True)
class EngineConfig:
    max_rounds: int = 10
    deadline_seconds: float = 120.0

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValidationError("max_rounds must be >= 1")
        if self.deadline_seconds <= 0:
            raise ValidationError("deadline_seconds must be positive")


@dataclass(frozen=True)
class Player:
    player_id: str
    display_name: str

    def __post_init__(self):
        if not self.player_id:
            raise ValidationError("player_id must be non-empty")
        if not self.display_name:
            raise ValidationError(f"player {self.player_id!r} needs a display name")


@dataclass
class RoundState:
    index: int
    spec: RoundSpec
    phase: RoundPhase = RoundPhase.Created
    asset_key: str | None = None
    asset_media_type: str | None = None
    poem_text: str | None = None
    guesses: dict[str, tuple[Guess, Score]] = field(default_factory=dict)
    presented_at: float | None = None
    deadline: float | None = None

    def advance(self, to: RoundPhase) -> None:
        if _PHASE_RANK[to] != _PHASE_RANK[self.phase] + 1:
            raise PhaseError(f"round {self.index}: cannot move {self.phase.value} -> {to.value}")
        self.phase = to


@dataclass
class GameSession:
    id: str
    mode: GameMode
    players: tuple[Player, ...]
    rng_seed: int
    rng: random.Random = field(repr=False)
    used_style_ids: set[str] = field(default_factory=set)
    rounds: list[RoundState] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def player(self, player_id: str) -> Player:
        for p in self.players:
            if p.player_id == player_id:
                return p
        raise UnknownPlayerError(f"player {player_id!r} is not in session {self.id}")


@dataclass(frozen=True)
class RevealPayload:
    round_index: int
    style: StyleRecord
    truth_coord: GeoCoord
    truth_period: YearInterval
    scores: dict[str, Score]
    landmark: Landmark | None = None
    fusion_style: StyleRecord | None = None
    poem_text: str | None = None


class GameEngine:
    """Owns sessions, the generation service, the event log, the leaderboard."""

    def __init__(
        self,
        catalog: Catalog,
        generation: GenerationService,
        log: EventLog,
        leaderboard: LeaderboardStore | None = None,
        clock: Clock | None = None,
        config: EngineConfig | None = None,
        deterministic: bool | None = None,
    ):
        if deterministic is None:
            deterministic = os.environ.get("ARCHIGUESSER_DETERMINISTIC", "") not in ("", "0")
        self.catalog = catalog
        self.generation = generation
        self.log = log
        self.leaderboard = leaderboard if leaderboard is not None else LeaderboardStore()
        self.clock: Clock = clock if clock is not None else (TickClock() if deterministic else time.time)
        self.config = config if config is not None else EngineConfig()
        self._seed_source = random.Random(0) if deterministic else random.Random()
        self._sessions: dict[str, GameSession] = {}
        self._counter = 0
        self._lock = threading.Lock()

    # -- sessions -------------------------------------------------------------

    def create_session(
        self,
        mode: GameMode | str,
        players: Sequence[tuple[str, str]],
        seed: int | None = None,
    ) -> GameSession:
        mode = GameMode(mode)
        if not players:
            raise ValidationError("a session needs at least one player")
        roster = tuple(Player(pid, name) for pid, name in players)
        if len({p.player_id for p in roster}) != len(roster):
            raise ValidationError("player ids must be unique")
        if mode is GameMode.Sights and not self.catalog.landmarks:
            raise ValidationError("Sights mode needs a catalog with landmarks")
        if seed is None:
            seed = self._seed_source.randrange(2**31)
        with self._lock:
            self._counter += 1
            session = GameSession(
                id=f"s{self._counter}",
                mode=mode,
                players=roster,
                rng_seed=seed,
                rng=random.Random(seed),
            )
            self._sessions[session.id] = session
        self.log.append(
            self.clock(),
            session.id,
            "session_created",
            {
                "mode": mode.value,
                "players": [
                    {"player_id": p.player_id, "display_name": p.display_name}
                    for p in roster
                ],
                "seed": seed,
                "max_rounds": self.config.max_rounds,
                "deadline_seconds": self.config.deadline_seconds,
            },
        )
        return session

    def get_session(self, session_id: str) -> GameSession:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise NotFoundError(f"no session {session_id!r}") from None

    # -- style draw -------------------------------------------------------------

    def _draw_style(self, session: GameSession, exclude: str | None = None) -> StyleRecord:
        all_ids = sorted(s.id for s in self.catalog.styles)
        pool = [i for i in all_ids if i not in session.used_style_ids and i != exclude]
        if not pool:
            session.used_style_ids.clear()
            pool = [i for i in all_ids if i != exclude]
        if not pool:
            raise ValidationError("catalog has no eligible style to draw")
        style_id = session.rng.choice(pool)
        session.used_style_ids.add(style_id)
        return self.catalog.style_by_id(style_id)

    def _build_spec(self, session: GameSession) -> tuple[RoundSpec, StyleRecord, Landmark | None]:
        if session.mode is GameMode.Sights:
            # The no-repeat pool feeds the fusion target; the landmark brings
            # its own native style as the round's truth.
            landmarks = sorted(self.catalog.landmarks, key=lambda l: l.id)
            landmark = session.rng.choice(landmarks)
            native = self.catalog.style_by_id(landmark.native_style_id)
            fusion = self._draw_style(session, exclude=native.id)
            spec = RoundSpec(
                mode=session.mode,
                truth_style_id=native.id,
                truth_coord=landmark.coord,
                truth_period=native.period,
                landmark_id=landmark.id,
                fusion_style_id=fusion.id,
            )
            return spec, fusion, landmark
        style = self._draw_style(session)
        spec = RoundSpec(
            mode=session.mode,
            truth_style_id=style.id,
            truth_coord=style.origin,
            truth_period=style.period,
        )
        return spec, style, None

    # -- asset generation ---------------------------------------------------------

    def _generate_asset(self, session: GameSession, spec: RoundSpec,
                        drawn: StyleRecord, landmark: Landmark | None) -> tuple[str, str, str | None]:
        if session.mode is GameMode.Image:
            request = GenRequest(GenKind.image, build_image_prompt(drawn))
            asset = self.generation.generate(request)
            return asset.key, asset.media_type, None
        if session.mode is GameMode.Sights:
            request = build_sights_request(landmark, drawn)
            asset = self.generation.generate(request)
            return asset.key, asset.media_type, None
        truth = self.catalog.style_by_id(spec.truth_style_id)
        prompt = build_poem_prompt(truth)
        last = None
        for attempt in range(1, POEM_ATTEMPTS + 1):
            request = GenRequest(GenKind.text, prompt, params={"attempt": str(attempt)})
            poem_asset = self.generation.generate(request)
            poem = poem_asset.data.decode("utf-8")
            if validate_poem(poem, truth):
                speech = self.generation.generate(GenRequest(GenKind.speech, poem))
                return speech.key, speech.media_type, poem
            last = poem
        raise GenerationError(
            f"poem named the style on all {POEM_ATTEMPTS} attempts "
            f"(last attempt {len(last or '')} chars)"
        )

    # -- round lifecycle ------------------------------------------------------------

    def start_round(self, session: GameSession) -> RoundState:
        with session.lock:
            if len(session.rounds) >= self.config.max_rounds:
                raise PhaseError(
                    f"session {session.id} already played {self.config.max_rounds} rounds"
                )
            if session.rounds and session.rounds[-1].phase is not RoundPhase.Revealed:
                raise PhaseError(
                    f"round {session.rounds[-1].index} is {session.rounds[-1].phase.value}, "
                    "not Revealed; finish it first"
                )
            spec, drawn, landmark = self._build_spec(session)
            round_state = RoundState(index=len(session.rounds), spec=spec)
            session.rounds.append(round_state)
            self.log.append(
                self.clock(), session.id, "round_started",
                {"round": round_state.index, "mode": session.mode.value},
            )
            try:
                key, media_type, poem = self._generate_asset(session, spec, drawn, landmark)
            except (BackendError, GenerationError) as exc:
                session.rounds.pop()
                session.used_style_ids.discard(drawn.id)
                self.log.append(
                    self.clock(), session.id, "round_aborted",
                    {"round": round_state.index, "error": str(exc)},
                )
                if isinstance(exc, GenerationError):
                    raise
                raise GenerationError(f"asset generation failed: {exc}") from exc
            round_state.asset_key = key
            round_state.asset_media_type = media_type
            round_state.poem_text = poem
            round_state.advance(RoundPhase.AssetReady)
            self.log.append(
                self.clock(), session.id, "asset_ready",
                {"round": round_state.index, "asset_key": key, "media_type": media_type},
            )
            return round_state

    def _round(self, session: GameSession, round_index: int) -> RoundState:
        if not 0 <= round_index < len(session.rounds):
            raise NotFoundError(f"session {session.id} has no round {round_index}")
        return session.rounds[round_index]

    def mark_presented(self, session: GameSession, round_index: int) -> RoundState:
        """First presentation starts the guess deadline; repeats are no-ops."""
        with session.lock:
            round_state = self._round(session, round_index)
            if round_state.phase is not RoundPhase.AssetReady:
                return round_state
            now = self.clock()
            round_state.presented_at = now
            round_state.deadline = now + self.config.deadline_seconds
            round_state.advance(RoundPhase.Presented)
            self.log.append(
                self.clock(), session.id, "presented",
                {"round": round_index, "presented_at": now, "deadline": round_state.deadline},
            )
            return round_state

    def note_asset_fetched(self, asset_key: str) -> None:
        """Asset downloads drive AssetReady -> Presented for matching rounds."""
        with self._lock:
            sessions = list(self._sessions.values())
        for session in sessions:
            with session.lock:
                indexes = [
                    r.index for r in session.rounds
                    if r.asset_key == asset_key and r.phase is RoundPhase.AssetReady
                ]
            for index in indexes:
                self.mark_presented(session, index)

    def _score_round(self, session: GameSession, round_state: RoundState) -> None:
        round_state.advance(RoundPhase.Scored)
        self.log.append(
            self.clock(), session.id, "round_scored",
            {
                "round": round_state.index,
                "scores": {
                    pid: score.total for pid, (_, score) in sorted(round_state.guesses.items())
                },
            },
        )

    def _expire_if_due(self, session: GameSession, round_state: RoundState) -> None:
        # Deadlines are enforced lazily at the next touch; no timer thread.
        if (
            round_state.phase is RoundPhase.Presented
            and round_state.deadline is not None
            and self.clock() > round_state.deadline
        ):
            self._score_round(session, round_state)

    def submit_guess(
        self, session: GameSession, round_index: int, player_id: str, guess: Guess
    ) -> Score:
        with session.lock:
            round_state = self._round(session, round_index)
            player = session.player(player_id)
            self._expire_if_due(session, round_state)
            if round_state.phase is not RoundPhase.Presented:
                raise PhaseError(
                    f"round {round_index} is {round_state.phase.value}; guesses need Presented"
                )
            if player_id in round_state.guesses:
                raise DuplicateGuessError(
                    f"player {player_id!r} already guessed in round {round_index}"
                )
            score = score_guess(guess, round_state.spec, self.catalog)
            round_state.guesses[player_id] = (guess, score)
            self.log.append(
                self.clock(), session.id, "guess_received",
                {
                    "round": round_index,
                    "player_id": player_id,
                    "display_name": player.display_name,
                    "guess": {
                        "style_ids": list(guess.style_ids),
                        "coord": {"lat": guess.coord.lat, "lon": guess.coord.lon},
                        "year": guess.year,
                    },
                    "score": _score_dict(score),
                },
            )
            if len(round_state.guesses) == len(session.players):
                self._score_round(session, round_state)
            return score

    def reveal(self, session: GameSession, round_index: int) -> RevealPayload:
        with session.lock:
            round_state = self._round(session, round_index)
            self._expire_if_due(session, round_state)
            if round_state.phase is RoundPhase.Revealed:
                raise PhaseError(f"round {round_index} is already revealed")
            if round_state.phase is not RoundPhase.Scored:
                raise PhaseError(
                    f"round {round_index} is {round_state.phase.value}; reveal needs Scored"
                )
            spec = round_state.spec
            style = self.catalog.style_by_id(spec.truth_style_id)
            landmark = (
                self.catalog.landmark_by_id(spec.landmark_id) if spec.landmark_id else None
            )
            fusion = (
                self.catalog.style_by_id(spec.fusion_style_id) if spec.fusion_style_id else None
            )
            scores = {pid: score for pid, (_, score) in round_state.guesses.items()}
            round_state.advance(RoundPhase.Revealed)
            now = self.clock()
            self.log.append(
                now, session.id, "revealed",
                {
                    "round": round_index,
                    "truth": {
                        "style_id": style.id,
                        "name": style.name,
                        "region_id": style.region_id,
                        "period": {"start": style.period.start, "end": style.period.end},
                        "origin": {"lat": style.origin.lat, "lon": style.origin.lon},
                        "characteristics": list(style.characteristics),
                        "architects": list(style.architects),
                        "summary": style.summary,
                    },
                    "truth_coord": {"lat": spec.truth_coord.lat, "lon": spec.truth_coord.lon},
                    "landmark_id": spec.landmark_id,
                    "fusion_style_id": spec.fusion_style_id,
                    "scores": {
                        pid: {"display_name": session.player(pid).display_name,
                              **_score_dict(score)}
                        for pid, score in sorted(scores.items())
                    },
                },
            )
            for pid, score in sorted(scores.items()):
                self.leaderboard.apply(
                    pid, session.player(pid).display_name, score.total, now
                )
            return RevealPayload(
                round_index=round_index,
                style=style,
                truth_coord=spec.truth_coord,
                truth_period=spec.truth_period,
                scores=scores,
                landmark=landmark,
                fusion_style=fusion,
                poem_text=round_state.poem_text,
            )

    def leaderboard_top(self, n: int | None = None) -> list[LeaderboardEntry]:
        return self.leaderboard.top(n)


def _score_dict(score: Score) -> dict:
    return {
        "style_points": score.style_points,
        "geo_points": score.geo_points,
        "time_points": score.time_points,
        "total": score.total,
        "distance_km": score.distance_km,
        "year_delta": score.year_delta,
    }
