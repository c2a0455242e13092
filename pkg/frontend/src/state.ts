// Client-side session state, driven by REST responses and the WS stream.
// One store, one render pass per change; views subscribe and re-render.

import type {
  GuessResponse,
  LeaderboardEntry,
  Mode,
  RevealDoc,
  ScoreDoc,
  SessionDoc,
  StreamEvent,
  StyleDoc,
  StyleRef,
} from "./types.js";
import type { GeoCoord } from "./board.js";

export type View = "lobby" | "round" | "reveal";

export interface RoundView {
  index: number;
  mode: Mode;
  assetKey: string | null;
  mediaType: string | null;
}

/** What the reveal view renders. Built either from the GET reveal document
    or from the `revealed` WS payload (which carries the same truth). */
export interface RevealInfo {
  round: number;
  style: StyleDoc;
  truthCoord: GeoCoord;
  truthPeriod: { start: number; end: number } | null;
  scores: Record<string, ScoreDoc & { display_name: string }>;
  landmarkName: string | null;
  fusionStyle: StyleDoc | null;
  poemText: string | null;
}

export interface AppState {
  view: View;
  session: SessionDoc | null;
  playerId: string | null;
  styles: StyleRef[];
  round: RoundView | null;
  guessed: string[];
  scored: boolean;
  myResult: GuessResponse | null;
  reveal: RevealInfo | null;
  leaderboard: LeaderboardEntry[];
  notice: string | null;
}

export function initialState(): AppState {
  return {
    view: "lobby",
    session: null,
    playerId: null,
    styles: [],
    round: null,
    guessed: [],
    scored: false,
    myResult: null,
    reveal: null,
    leaderboard: [],
    notice: null,
  };
}

export function revealFromDoc(doc: RevealDoc): RevealInfo {
  return {
    round: doc.round,
    style: doc.style,
    truthCoord: doc.truth_coord,
    truthPeriod: doc.truth_period,
    scores: doc.scores,
    landmarkName: doc.landmark ? doc.landmark.name : null,
    fusionStyle: doc.fusion_style,
    poemText: doc.poem_text,
  };
}

type Listener = (state: AppState) => void;

export class GameStore {
  state = initialState();
  private listeners: Listener[] = [];

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** State transitions for the five public event kinds. Unknown kinds and
      events for other rounds are ignored; REST responses may already have
      applied the same change, so every branch is idempotent. */
  applyEvent(event: StreamEvent): void {
    const payload = event.payload;
    const round = typeof payload.round === "number" ? payload.round : null;
    switch (event.kind) {
      case "round_started": {
        // the REST response that started this round may have landed first;
        // keep its asset fields instead of blanking them
        const prior = this.state.round;
        const sameRound = prior !== null && prior.index === round;
        this.update({
          view: "round",
          round: {
            index: round ?? 0,
            mode: (payload.mode as Mode) ?? this.state.session?.mode ?? "Image",
            assetKey: sameRound ? prior.assetKey : null,
            mediaType: sameRound ? prior.mediaType : null,
          },
          guessed: sameRound ? this.state.guessed : [],
          scored: sameRound ? this.state.scored : false,
          myResult: sameRound ? this.state.myResult : null,
          reveal: null,
        });
        break;
      }
      case "asset_ready": {
        const current = this.state.round;
        if (!current || current.index !== round) return;
        this.update({
          round: {
            ...current,
            assetKey: (payload.asset_key as string) ?? null,
            mediaType: (payload.media_type as string) ?? null,
          },
        });
        break;
      }
      case "guess_received": {
        if (this.state.round?.index !== round) return;
        const playerId = payload.player_id as string;
        if (this.state.guessed.includes(playerId)) return;
        this.update({ guessed: [...this.state.guessed, playerId] });
        break;
      }
      case "round_scored":
        if (this.state.round?.index !== round) return;
        this.update({ scored: true });
        break;
      case "revealed": {
        if (round === null) return;
        // prefer the richer GET document if this client already fetched it
        if (this.state.reveal?.round === round) {
          this.update({ view: "reveal" });
          return;
        }
        this.update({ view: "reveal", reveal: revealFromEvent(round, payload) });
        break;
      }
    }
  }
}

function revealFromEvent(round: number, payload: Record<string, unknown>): RevealInfo {
  return {
    round,
    style: payload.truth as StyleDoc,
    truthCoord: payload.truth_coord as GeoCoord,
    truthPeriod: null,
    scores: (payload.scores ?? {}) as RevealInfo["scores"],
    landmarkName: (payload.landmark_id as string | null) ?? null,
    fusionStyle: null,
    poemText: null,
  };
}
