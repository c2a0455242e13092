// Lobby: create a session (mode, roster, optional seed) or join an existing
// one by id, then pick which player at the table you are.

import { api, ApiError } from "../api.js";
import { el, clear } from "../dom.js";
import type { Mode, PlayerRef, SessionDoc } from "../types.js";

const MODES: Mode[] = ["Image", "Sights", "Poem"];

export interface LobbyResult {
  session: SessionDoc;
  playerId: string;
}

export function renderLobby(
  container: HTMLElement,
  onReady: (result: LobbyResult) => void,
  notice: string | null,
): void {
  clear(container);

  const status = el("p", { class: "notice", text: notice ?? "" });

  // -- create ----------------------------------------------------------
  const modeSelect = el("select", { class: "mode-select" });
  for (const mode of MODES) modeSelect.append(el("option", { value: mode, text: mode }));
  const rosterInput = el("textarea", {
    class: "roster",
    rows: "3",
    placeholder: "one player per line: id or id: display name",
  });
  rosterInput.value = "p1: Ada\np2: Grace";
  const seedInput = el("input", { type: "text", placeholder: "seed (optional)" });
  const createButton = el("button", { text: "Create session" });

  createButton.addEventListener("click", async () => {
    const players = parseRoster(rosterInput.value);
    if (players.length === 0) {
      status.textContent = "add at least one player";
      return;
    }
    const seedText = seedInput.value.trim();
    const seed = seedText === "" ? undefined : Number(seedText);
    if (seed !== undefined && !Number.isInteger(seed)) {
      status.textContent = "seed must be an integer";
      return;
    }
    try {
      const session = await api.createSession(
        modeSelect.value as Mode,
        players,
        seed,
      );
      pickPlayer(session, session.players, onReady, status);
    } catch (err) {
      status.textContent = describe(err);
    }
  });

  // -- join ------------------------------------------------------------
  const joinInput = el("input", { type: "text", placeholder: "session id" });
  const joinButton = el("button", { text: "Join" });
  joinButton.addEventListener("click", async () => {
    const id = joinInput.value.trim();
    if (!id) return;
    try {
      const session = await api.getSession(id);
      pickPlayer(session, session.players, onReady, status);
    } catch (err) {
      status.textContent = describe(err);
    }
  });

  container.append(
    el("h1", { text: "ArchiGuesser" }),
    el(
      "p",
      { class: "tagline" },
      "Guess the architectural style, where it belongs, and when it flourished.",
    ),
    status,
    el(
      "section",
      { class: "lobby-panel" },
      el("h2", { text: "New session" }),
      el("label", { text: "Mode " }, modeSelect),
      rosterInput,
      seedInput,
      createButton,
    ),
    el(
      "section",
      { class: "lobby-panel" },
      el("h2", { text: "Join session" }),
      joinInput,
      joinButton,
    ),
  );

  function pickPlayer(
    session: SessionDoc,
    players: PlayerRef[],
    ready: (result: LobbyResult) => void,
    where: HTMLElement,
  ): void {
    clear(where);
    where.append(`session ${session.session_id} — who are you? `);
    for (const player of players) {
      const button = el("button", { class: "player-pick", text: player.display_name });
      button.addEventListener("click", () =>
        ready({ session, playerId: player.player_id }),
      );
      where.append(button);
    }
  }
}

function parseRoster(text: string): PlayerRef[] {
  const players: PlayerRef[] = [];
  for (const line of text.split("\n")) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    const colon = trimmed.indexOf(":");
    if (colon === -1) {
      players.push({ player_id: trimmed, display_name: trimmed });
    } else {
      const id = trimmed.slice(0, colon).trim();
      const name = trimmed.slice(colon + 1).trim() || id;
      players.push({ player_id: id, display_name: name });
    }
  }
  return players;
}

export function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  if (err instanceof Error) return err.message;
  return String(err);
}
