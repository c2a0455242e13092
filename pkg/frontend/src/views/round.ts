// Round view: the generated clue (image or spoken poem), the world map, the
// token tray with the mode's slots, the year slider, and submit.
//
// The whole view re-renders on every store change (an opponent guessing,
// the round getting scored), so the player's in-progress inputs live in a
// per-round draft that survives re-renders.

import { api } from "../api.js";
import type { GeoCoord } from "../board.js";
import { el, clear } from "../dom.js";
import { buildGuess, GuessError, TokenSlots, type SlotName } from "../guess.js";
import type { AppState } from "../state.js";
import type { GuessResponse, StyleRef } from "../types.js";
import { describe } from "./lobby.js";
import { WorldMap } from "./map.js";
import { YearSlider } from "./slider.js";

export interface RoundCallbacks {
  onSubmitted: (result: GuessResponse) => void;
  onReveal: () => void;
}

interface Draft {
  coord: GeoCoord | null;
  year: number | null;
  placed: [SlotName, string][];
  selected: string | null;
}

const drafts = new Map<string, Draft>();

function draftFor(key: string): Draft {
  let draft = drafts.get(key);
  if (!draft) {
    draft = { coord: null, year: null, placed: [], selected: null };
    drafts.set(key, draft);
  }
  return draft;
}

export function renderRound(
  container: HTMLElement,
  state: AppState,
  callbacks: RoundCallbacks,
): void {
  clear(container);
  const round = state.round;
  const session = state.session;
  if (!round || !session) return;

  const draft = draftFor(`${session.session_id}:${round.index}`);
  const status = el("p", { class: "notice", text: state.notice ?? "" });
  const header = el(
    "header",
    { class: "round-header" },
    el("h2", { text: `Round ${round.index + 1} — ${round.mode}` }),
    el("span", {
      class: "guessed",
      text: state.guessed.length
        ? `guessed: ${state.guessed.join(", ")}`
        : "no guesses yet",
    }),
  );

  // -- clue --------------------------------------------------------------
  const clue = el("div", { class: "clue" });
  if (!round.assetKey) {
    clue.append(el("p", { text: "generating the clue…" }));
  } else if (round.mediaType?.startsWith("audio/")) {
    clue.append(
      el("p", { text: "Listen: a poem about this round's style." }),
      el("audio", { controls: "", src: api.assetUrl(round.assetKey) }),
    );
  } else {
    clue.append(el("img", { class: "clue-image", src: api.assetUrl(round.assetKey) }));
  }

  // -- guess inputs --------------------------------------------------------
  const slots = new TokenSlots(round.mode);
  for (const [slot, styleId] of draft.placed) slots.place(slot, styleId);
  const map = new WorldMap(true);
  if (draft.coord) map.showPick(draft.coord);
  map.onPick = (picked) => {
    draft.coord = picked;
  };
  const slider = new YearSlider();
  if (draft.year !== null) slider.setYear(draft.year);
  slider.onChange = (year) => {
    draft.year = year;
  };

  const tray = el("div", { class: "tray" });
  const slotRow = el("div", { class: "slots" });
  const slotBoxes = new Map<SlotName, HTMLElement>();

  for (const name of slots.names) {
    const box = el(
      "div",
      { class: "slot", "data-slot": name },
      el("span", { class: "slot-label", text: name }),
      el("span", { class: "slot-value", text: "empty" }),
    );
    box.addEventListener("dragover", (ev) => ev.preventDefault());
    box.addEventListener("drop", (ev) => {
      ev.preventDefault();
      const styleId = ev.dataTransfer?.getData("text/plain");
      if (styleId) placeToken(name, styleId);
    });
    box.addEventListener("click", () => {
      if (draft.selected) placeToken(name, draft.selected);
      else {
        slots.clear(name);
        syncDraft();
        refreshSlots();
      }
    });
    slotBoxes.set(name, box);
    slotRow.append(box);
  }

  const tokenButtons = new Map<string, HTMLElement>();
  for (const style of state.styles) {
    const token = el("button", {
      class: "token",
      draggable: "true",
      title: style.region_id,
      text: style.name,
    });
    token.addEventListener("dragstart", (ev) => {
      ev.dataTransfer?.setData("text/plain", style.style_id);
    });
    token.addEventListener("click", () => {
      draft.selected = draft.selected === style.style_id ? null : style.style_id;
      refreshSelection();
    });
    tokenButtons.set(style.style_id, token);
    tray.append(token);
  }
  refreshSlots();
  refreshSelection();

  function placeToken(slot: SlotName, styleId: string): void {
    try {
      slots.place(slot, styleId);
    } catch (err) {
      status.textContent = err instanceof GuessError ? err.message : describe(err);
      return;
    }
    draft.selected = null;
    syncDraft();
    refreshSelection();
    refreshSlots();
  }

  function syncDraft(): void {
    draft.placed = slots.names.flatMap((name) => {
      const id = slots.get(name);
      return id ? [[name, id] as [SlotName, string]] : [];
    });
  }

  function styleName(styleId: string): string {
    return state.styles.find((s: StyleRef) => s.style_id === styleId)?.name ?? styleId;
  }

  function refreshSlots(): void {
    for (const [name, box] of slotBoxes) {
      const value = box.querySelector(".slot-value") as HTMLElement;
      const placed = slots.get(name);
      value.textContent = placed ? styleName(placed) : "empty";
      box.classList.toggle("slot-filled", placed !== null);
    }
    for (const [styleId, token] of tokenButtons) {
      token.classList.toggle("token-placed", slots.styleIds().includes(styleId));
    }
  }

  function refreshSelection(): void {
    for (const [styleId, token] of tokenButtons) {
      token.classList.toggle("token-selected", styleId === draft.selected);
    }
  }

  // -- submit --------------------------------------------------------------
  const alreadyGuessed = state.playerId !== null && state.guessed.includes(state.playerId);
  const submit = el("button", {
    class: "submit",
    text: alreadyGuessed ? "guess submitted" : "Submit guess",
  });
  if (alreadyGuessed) submit.setAttribute("disabled", "");

  submit.addEventListener("click", async () => {
    try {
      const body = buildGuess(round.mode, {
        playerId: state.playerId ?? "",
        styleIds: slots.styleIds(),
        coord: draft.coord,
        year: slider.year,
      });
      submit.setAttribute("disabled", "");
      const result = await api.submitGuess(session.session_id, round.index, body);
      callbacks.onSubmitted(result);
    } catch (err) {
      submit.removeAttribute("disabled");
      status.textContent = err instanceof GuessError ? err.message : describe(err);
    }
  });

  const reveal = el("button", { class: "reveal", text: "Reveal" });
  if (!state.scored) reveal.setAttribute("disabled", "");
  reveal.addEventListener("click", callbacks.onReveal);

  const mine = state.myResult;
  const myScore = mine
    ? el("p", {
        class: "my-score",
        text: `your round: ${mine.score.total.toFixed(1)} pts (${mine.score.distance_km.toFixed(0)} km off, ${Math.abs(mine.score.year_delta)} yrs off)`,
      })
    : null;

  container.append(
    header,
    status,
    clue,
    map.root,
    slotRow,
    tray,
    slider.root,
    el("div", { class: "actions" }, submit, reveal),
  );
  if (myScore) container.append(myScore);
}
