// The client-side validation that mirrors server rules, above all the
// guard that two style tokens never leave the client outside Sights mode.

import { describe, expect, it } from "vitest";
import { buildGuess, GuessError, slotsFor, TokenSlots } from "../src/guess.js";

const COORD = { lat: 48.8, lon: 2.3 };

function draft(overrides: Partial<Parameters<typeof buildGuess>[1]> = {}) {
  return {
    playerId: "p1",
    styleIds: ["gothic"],
    coord: COORD,
    year: 1250,
    ...overrides,
  };
}

describe("slotsFor", () => {
  it("gives Sights the original/fused pair and everyone else one slot", () => {
    expect(slotsFor("Sights")).toEqual(["original", "fused"]);
    expect(slotsFor("Image")).toEqual(["style"]);
    expect(slotsFor("Poem")).toEqual(["style"]);
  });
});

describe("TokenSlots", () => {
  it("cannot even hold a second token outside Sights", () => {
    const slots = new TokenSlots("Image");
    slots.place("style", "gothic");
    expect(() => slots.place("original", "baroque")).toThrow(GuessError);
    expect(() => slots.place("fused", "baroque")).toThrow(GuessError);
    expect(slots.styleIds()).toEqual(["gothic"]);
  });

  it("orders Sights styles original before fused regardless of placement order", () => {
    const slots = new TokenSlots("Sights");
    slots.place("fused", "baroque");
    slots.place("original", "gothic");
    expect(slots.styleIds()).toEqual(["gothic", "baroque"]);
  });

  it("moves a token between slots instead of duplicating it", () => {
    const slots = new TokenSlots("Sights");
    slots.place("original", "gothic");
    slots.place("fused", "gothic");
    expect(slots.get("original")).toBeNull();
    expect(slots.styleIds()).toEqual(["gothic"]);
  });

  it("replaces and clears", () => {
    const slots = new TokenSlots("Image");
    slots.place("style", "gothic");
    slots.place("style", "baroque");
    expect(slots.styleIds()).toEqual(["baroque"]);
    slots.clear("style");
    expect(slots.styleIds()).toEqual([]);
  });
});

describe("buildGuess", () => {
  it("builds the JSON body the guess endpoint expects", () => {
    expect(buildGuess("Image", draft())).toEqual({
      player_id: "p1",
      style_ids: ["gothic"],
      coord: COORD,
      year: 1250,
    });
  });

  it("refuses two styles outside Sights mode", () => {
    const two = draft({ styleIds: ["gothic", "baroque"] });
    expect(() => buildGuess("Image", two)).toThrow(/only valid in Sights/);
    expect(() => buildGuess("Poem", two)).toThrow(GuessError);
  });

  it("accepts one or two styles in Sights mode", () => {
    expect(buildGuess("Sights", draft()).style_ids).toEqual(["gothic"]);
    const two = draft({ styleIds: ["gothic", "baroque"] });
    expect(buildGuess("Sights", two).style_ids).toEqual(["gothic", "baroque"]);
  });

  it("never allows more than two styles", () => {
    const three = draft({ styleIds: ["a", "b", "c"] });
    expect(() => buildGuess("Sights", three)).toThrow(GuessError);
  });

  it("rejects duplicate styles", () => {
    const doubled = draft({ styleIds: ["gothic", "gothic"] });
    expect(() => buildGuess("Sights", doubled)).toThrow(/two slots/);
  });

  it("requires a token, a location, and a year", () => {
    expect(() => buildGuess("Image", draft({ styleIds: [] }))).toThrow(/token/);
    expect(() => buildGuess("Image", draft({ coord: null }))).toThrow(/location/);
    expect(() => buildGuess("Image", draft({ year: null }))).toThrow(/year/);
    expect(() => buildGuess("Image", draft({ playerId: "" }))).toThrow(/player/);
  });

  it("refuses year 0, which does not exist", () => {
    expect(() => buildGuess("Image", draft({ year: 0 }))).toThrow(/year 0/);
  });
});
