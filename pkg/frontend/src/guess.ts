// Guess assembly and the client-side rules that mirror server validation:
// one style token everywhere, a second slot only in Sights, never year 0.

import type { GeoCoord } from "./board.js";
import type { GuessBody, Mode } from "./types.js";

export class GuessError extends Error {}

export type SlotName = "style" | "original" | "fused";

/** Sights guesses are positional: [original, fused]. Every other mode has a
    single unlabeled slot. */
export function slotsFor(mode: Mode): SlotName[] {
  return mode === "Sights" ? ["original", "fused"] : ["style"];
}

/** The placeable token slots for one round. A style token is singular:
    placing it in a second slot moves it there. */
export class TokenSlots {
  readonly names: SlotName[];
  private placed = new Map<SlotName, string>();

  constructor(readonly mode: Mode) {
    this.names = slotsFor(mode);
  }

  place(slot: SlotName, styleId: string): void {
    if (!this.names.includes(slot)) {
      throw new GuessError(`no ${slot} slot in ${this.mode} mode`);
    }
    for (const [name, id] of this.placed) {
      if (id === styleId && name !== slot) this.placed.delete(name);
    }
    this.placed.set(slot, styleId);
  }

  clear(slot: SlotName): void {
    this.placed.delete(slot);
  }

  get(slot: SlotName): string | null {
    return this.placed.get(slot) ?? null;
  }

  /** Placed style ids in slot order (original before fused). */
  styleIds(): string[] {
    const out: string[] = [];
    for (const name of this.names) {
      const id = this.placed.get(name);
      if (id !== undefined) out.push(id);
    }
    return out;
  }
}

export interface Draft {
  playerId: string;
  styleIds: string[];
  coord: GeoCoord | null;
  year: number | null;
}

/** Validate a draft into a POST body, refusing anything the server would
    422. Two styles outside Sights is the ModeMismatchError guard. */
export function buildGuess(mode: Mode, draft: Draft): GuessBody {
  if (!draft.playerId) throw new GuessError("pick a player first");
  if (draft.coord === null) throw new GuessError("place a location on the map");
  if (draft.year === null) throw new GuessError("set the year slider");
  if (draft.year === 0) throw new GuessError("there is no year 0");
  const styles = draft.styleIds;
  if (styles.length === 0) throw new GuessError("place a style token");
  if (new Set(styles).size !== styles.length) {
    throw new GuessError("the same style token cannot fill two slots");
  }
  if (styles.length > 2 || (styles.length === 2 && mode !== "Sights")) {
    throw new GuessError("two style tokens are only valid in Sights mode");
  }
  return {
    player_id: draft.playerId,
    style_ids: styles,
    coord: draft.coord,
    year: draft.year,
  };
}
