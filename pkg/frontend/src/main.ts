// Bootstrap: one store, one render pass per state change, one WS stream per
// session. REST drives the actions; the stream keeps every client in step.

import { api } from "./api.js";
import { el } from "./dom.js";
import { GameStore, revealFromDoc } from "./state.js";
import { EventStream } from "./stream.js";
import { describe, renderLobby, type LobbyResult } from "./views/lobby.js";
import { renderLeaderboard } from "./views/leaderboard.js";
import { renderReveal } from "./views/reveal.js";
import { renderRound } from "./views/round.js";

const store = new GameStore();
let stream: EventStream | null = null;

const main = el("main", { class: "stage" });
const side = el("aside", { class: "side" });
document.body.append(el("div", { class: "app" }, main, side));

store.subscribe((state) => {
  renderLeaderboard(side, state.leaderboard);
  if (state.view === "lobby") {
    renderLobby(main, joinSession, state.notice);
  } else if (state.view === "round") {
    renderRound(main, state, {
      onSubmitted: (result) => store.update({ myResult: result, notice: null }),
      onReveal: doReveal,
    });
  } else {
    renderReveal(main, state, startRound);
  }
});

async function boot(): Promise<void> {
  store.update({}); // first paint
  try {
    const [styles, leaderboard] = await Promise.all([
      api.listStyles(),
      api.getLeaderboard(),
    ]);
    store.update({ styles, leaderboard });
  } catch (err) {
    store.update({ notice: describe(err) });
  }
}

function joinSession({ session, playerId }: LobbyResult): void {
  stream?.close();
  store.update({ session, playerId, notice: null });
  stream = new EventStream(session.session_id, (event) => {
    store.applyEvent(event);
    if (event.kind === "revealed") refreshLeaderboard();
  });
  stream.connect();
  void enterSession(session.session_id);
}

/** Fresh session: start round 0. Joined mid-game: adopt the open round (the
    stream's replay will walk us through everything we missed anyway). */
async function enterSession(sessionId: string): Promise<void> {
  try {
    const detail = await api.getSession(sessionId);
    if (detail.rounds.length === 0) {
      await startRound();
      return;
    }
    const open = detail.rounds.find((r) => r.phase !== "Revealed");
    if (open) {
      store.update({
        view: "round",
        round: {
          index: open.index,
          mode: open.mode,
          assetKey: open.asset_key,
          mediaType: open.media_type,
        },
        guessed: open.guessed_players,
        scored: open.phase === "Scored",
      });
    }
  } catch (err) {
    store.update({ notice: describe(err) });
  }
}

async function startRound(): Promise<void> {
  const session = store.state.session;
  if (!session) return;
  try {
    const round = await api.startRound(session.session_id);
    store.update({
      view: "round",
      round: {
        index: round.index,
        mode: round.mode,
        assetKey: round.asset_key,
        mediaType: round.media_type,
      },
      guessed: [],
      scored: false,
      myResult: null,
      reveal: null,
      notice: null,
    });
  } catch (err) {
    store.update({ notice: describe(err) });
  }
}

async function doReveal(): Promise<void> {
  const session = store.state.session;
  const round = store.state.round;
  if (!session || !round) return;
  try {
    const doc = await api.getReveal(session.session_id, round.index);
    store.update({ view: "reveal", reveal: revealFromDoc(doc), notice: null });
  } catch (err) {
    // another client revealed first; the WS event carries the truth
    store.update({ notice: describe(err) });
  }
}

async function refreshLeaderboard(): Promise<void> {
  try {
    store.update({ leaderboard: await api.getLeaderboard() });
  } catch {
    // keep the stale board; the next reveal refreshes it
  }
}

void boot();
