// Wire shapes of the REST/WS API (see docs/api.md in the repository root).

import type { GeoCoord } from "./board.js";

export type Mode = "Image" | "Sights" | "Poem";

export interface PlayerRef {
  player_id: string;
  display_name: string;
}

export interface SessionDoc {
  session_id: string;
  mode: Mode;
  seed: number | null;
  players: PlayerRef[];
}

export interface SessionDetail extends SessionDoc {
  rounds: RoundDoc[];
}

export type Phase = "Created" | "AssetReady" | "Presented" | "Scored" | "Revealed";

export interface RoundDoc {
  index: number;
  phase: Phase;
  mode: Mode;
  asset_key: string | null;
  media_type: string | null;
  presented_at: number | null;
  deadline: number | null;
  guessed_players: string[];
}

export interface Period {
  start: number;
  end: number;
}

export interface StyleRef {
  style_id: string;
  name: string;
  region_id: string;
  period: Period;
}

export interface StyleDoc extends StyleRef {
  origin: GeoCoord;
  characteristics: string[];
  architects: string[];
  summary: string;
}

export interface GuessBody {
  player_id: string;
  style_ids: string[];
  coord: GeoCoord;
  year: number;
}

export interface ScoreDoc {
  style_points: number;
  geo_points: number;
  time_points: number;
  total: number;
  distance_km: number;
  year_delta: number;
}

export interface GuessResponse {
  player_id: string;
  guess: Omit<GuessBody, "player_id">;
  score: ScoreDoc;
}

export interface RevealDoc {
  round: number;
  style: StyleDoc;
  truth_coord: GeoCoord;
  truth_period: Period;
  scores: Record<string, ScoreDoc & { display_name: string }>;
  landmark: { landmark_id: string; name: string; coord: GeoCoord } | null;
  fusion_style: StyleDoc | null;
  poem_text: string | null;
}

export interface LeaderboardEntry {
  player_id: string;
  display_name: string;
  total_points: number;
  rounds_played: number;
  last_update: number;
}

export type EventKind =
  | "round_started"
  | "asset_ready"
  | "guess_received"
  | "round_scored"
  | "revealed";

export interface StreamEvent {
  cursor: number;
  ts: number;
  kind: EventKind;
  payload: Record<string, unknown>;
}
