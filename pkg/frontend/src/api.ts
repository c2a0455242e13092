// Thin typed wrappers over the REST endpoints. Errors surface as ApiError
// carrying the HTTP status and the server's error class name.

import { apiBase } from "./config.js";
import type {
  GuessBody,
  GuessResponse,
  LeaderboardEntry,
  Mode,
  PlayerRef,
  RevealDoc,
  RoundDoc,
  SessionDetail,
  SessionDoc,
  StyleRef,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function toError(res: Response): Promise<ApiError> {
  let code = "HTTPError";
  let message = `${res.status} ${res.statusText}`;
  try {
    const body = await res.json();
    if (typeof body?.detail === "string") {
      message = body.detail;
    } else if (body?.detail) {
      code = body.detail.error ?? code;
      message = body.detail.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(res.status, code, message);
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(apiBase() + path, init);
  if (!res.ok) throw await toError(res);
  return res.json() as Promise<T>;
}

function post<T>(path: string, body: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
}

export const api = {
  listStyles(): Promise<StyleRef[]> {
    return request<{ styles: StyleRef[] }>("/api/styles").then((d) => d.styles);
  },

  createSession(mode: Mode, players: PlayerRef[], seed?: number): Promise<SessionDoc> {
    const body: Record<string, unknown> = { mode, players };
    if (seed !== undefined) body.seed = seed;
    return post("/api/sessions", body);
  },

  getSession(sessionId: string): Promise<SessionDetail> {
    return request(`/api/sessions/${encodeURIComponent(sessionId)}`);
  },

  startRound(sessionId: string): Promise<RoundDoc> {
    return post(`/api/sessions/${encodeURIComponent(sessionId)}/rounds`, {});
  },

  assetUrl(key: string): string {
    return `${apiBase()}/api/assets/${encodeURIComponent(key)}`;
  },

  submitGuess(sessionId: string, round: number, body: GuessBody): Promise<GuessResponse> {
    return post(`/api/sessions/${encodeURIComponent(sessionId)}/rounds/${round}/guess`, body);
  },

  getReveal(sessionId: string, round: number): Promise<RevealDoc> {
    return request(`/api/sessions/${encodeURIComponent(sessionId)}/rounds/${round}/reveal`);
  },

  getLeaderboard(top?: number): Promise<LeaderboardEntry[]> {
    const q = top === undefined ? "" : `?top=${top}`;
    return request<{ entries: LeaderboardEntry[] }>(`/api/leaderboard${q}`).then(
      (d) => d.entries,
    );
  },
};
