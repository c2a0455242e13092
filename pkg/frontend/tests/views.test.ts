// @vitest-environment happy-dom
//
// Drives the real view code through DOM events: a map click lands on the
// golden coordinate, the slider midpoint posts year -738, Sights (and only
// Sights) offers the original/fused slot pair, and the reveal shows the
// truth with all three score components.

import { afterEach, describe, expect, it, vi } from "vitest";
import { el } from "../src/dom.js";
import type { AppState, RevealInfo } from "../src/state.js";
import { initialState } from "../src/state.js";
import type { Mode, StyleDoc } from "../src/types.js";
import { renderLeaderboard } from "../src/views/leaderboard.js";
import { renderReveal } from "../src/views/reveal.js";
import { renderRound } from "../src/views/round.js";

const STYLES = [
  { style_id: "baroque", name: "Baroque", region_id: "western-europe", period: { start: 1600, end: 1750 } },
  { style_id: "gothic", name: "Gothic", region_id: "western-europe", period: { start: 1140, end: 1520 } },
];

let sessionCounter = 0;

function roundState(mode: Mode): AppState {
  // fresh session id per test so the per-round draft cache cannot leak
  sessionCounter += 1;
  return {
    ...initialState(),
    view: "round",
    session: {
      session_id: `s-${sessionCounter}`,
      mode,
      seed: 1,
      players: [
        { player_id: "p1", display_name: "Ada" },
        { player_id: "p2", display_name: "Grace" },
      ],
    },
    playerId: "p1",
    styles: STYLES,
    round: { index: 0, mode, assetKey: "asset-key", mediaType: mode === "Poem" ? "audio/wav" : "image/png" },
  };
}

interface Captured {
  url: string;
  body: Record<string, unknown>;
}

function stubFetch(captured: Captured[]): void {
  vi.stubGlobal("fetch", async (url: string, init?: { body?: string }) => {
    captured.push({ url, body: JSON.parse(init?.body ?? "{}") });
    return {
      ok: true,
      json: async () => ({
        player_id: "p1",
        guess: {},
        score: { style_points: 2500, geo_points: 5000, time_points: 2500, total: 10000, distance_km: 0, year_delta: 0 },
      }),
    };
  });
}

function fixRect(element: HTMLElement, width: number, height: number): void {
  element.getBoundingClientRect = () =>
    ({ left: 0, top: 0, right: width, bottom: height, width, height, x: 0, y: 0 }) as DOMRect;
  (element as unknown as { setPointerCapture: (id: number) => void }).setPointerCapture = () => {};
}

function pointerDown(element: HTMLElement, clientX: number, clientY: number): void {
  element.dispatchEvent(new MouseEvent("pointerdown", { clientX, clientY, bubbles: true }));
}

function clickByText(container: HTMLElement, selector: string, text: string): HTMLElement {
  const match = [...container.querySelectorAll<HTMLElement>(selector)].find(
    (node) => node.textContent === text || node.textContent?.startsWith(text),
  );
  expect(match, `${selector} with text ${text}`).toBeDefined();
  match!.click();
  return match!;
}

function mount(): HTMLElement {
  const container = el("div");
  document.body.append(container);
  return container;
}

async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.innerHTML = "";
});

describe("round view", () => {
  it("posts the golden center coordinate and -738 from the slider midpoint", async () => {
    const captured: Captured[] = [];
    stubFetch(captured);
    const container = mount();
    const state = roundState("Image");
    let submitted = false;
    renderRound(container, state, {
      onSubmitted: () => {
        submitted = true;
      },
      onReveal: () => {},
    });

    // exactly one slot outside Sights: the two-token guard is structural
    expect(container.querySelectorAll(".slot")).toHaveLength(1);

    clickByText(container, ".token", "Gothic");
    (container.querySelector(".slot") as HTMLElement).click();
    expect(container.querySelector(".slot-value")?.textContent).toBe("Gothic");

    const map = container.querySelector(".map") as HTMLElement;
    fixRect(map, 720, 360);
    pointerDown(map, 360, 180); // dead center of the board

    const track = container.querySelector(".slider-track") as HTMLElement;
    fixRect(track, 600, 10);
    pointerDown(track, 300, 5); // midpoint
    expect(container.querySelector(".slider-label")?.textContent).toBe("738 BCE");

    clickByText(container, "button", "Submit guess");
    await flush();

    expect(submitted).toBe(true);
    expect(captured).toHaveLength(1);
    expect(captured[0].url).toBe(`/api/sessions/${state.session!.session_id}/rounds/0/guess`);
    expect(captured[0].body).toEqual({
      player_id: "p1",
      style_ids: ["gothic"],
      coord: { lat: 0, lon: 0 },
      year: -738,
    });
  });

  it("maps a map corner click to the golden corner coordinate", () => {
    stubFetch([]);
    const container = mount();
    renderRound(container, roundState("Image"), { onSubmitted: () => {}, onReveal: () => {} });
    const map = container.querySelector(".map") as HTMLElement;
    fixRect(map, 720, 360);
    pointerDown(map, 0, 0);
    expect(container.querySelector(".map-readout")?.textContent).toBe("90.0°N 180.0°W");
  });

  it("offers original and fused slots in Sights and posts both styles in slot order", async () => {
    const captured: Captured[] = [];
    stubFetch(captured);
    const container = mount();
    renderRound(container, roundState("Sights"), { onSubmitted: () => {}, onReveal: () => {} });

    const labels = [...container.querySelectorAll(".slot-label")].map((n) => n.textContent);
    expect(labels).toEqual(["original", "fused"]);

    // fused first, original second: the body must still be original-first
    clickByText(container, ".token", "Baroque");
    (container.querySelector('[data-slot="fused"]') as HTMLElement).click();
    clickByText(container, ".token", "Gothic");
    (container.querySelector('[data-slot="original"]') as HTMLElement).click();

    const map = container.querySelector(".map") as HTMLElement;
    fixRect(map, 720, 360);
    pointerDown(map, 540, 90); // 0.75, 0.25 -> lat 45, lon 90
    const track = container.querySelector(".slider-track") as HTMLElement;
    fixRect(track, 600, 10);
    pointerDown(track, 600, 5); // right endpoint

    clickByText(container, "button", "Submit guess");
    await flush();

    expect(captured[0].body).toEqual({
      player_id: "p1",
      style_ids: ["gothic", "baroque"],
      coord: { lat: 45, lon: 90 },
      year: 2025,
    });
  });

  it("keeps a rejected draft editable and surfaces the guard message", async () => {
    stubFetch([]);
    const container = mount();
    renderRound(container, roundState("Image"), { onSubmitted: () => {}, onReveal: () => {} });
    clickByText(container, "button", "Submit guess");
    await flush();
    expect(container.querySelector(".notice")?.textContent).toMatch(/location/);
    const submit = clickByText(container, "button", "Submit guess");
    expect(submit.hasAttribute("disabled")).toBe(false);
  });

  it("plays poem rounds through an audio element", () => {
    stubFetch([]);
    const container = mount();
    renderRound(container, roundState("Poem"), { onSubmitted: () => {}, onReveal: () => {} });
    const audio = container.querySelector("audio");
    expect(audio).not.toBeNull();
    expect(audio?.getAttribute("src")).toBe("/api/assets/asset-key");
    expect(container.querySelector("img")).toBeNull();
  });
});

const TRUTH: StyleDoc = {
  style_id: "gothic",
  name: "Gothic",
  region_id: "western-europe",
  period: { start: 1140, end: 1520 },
  origin: { lat: 48.9, lon: 2.35 },
  characteristics: ["pointed arches", "flying buttresses"],
  architects: ["Abbot Suger"],
  summary: "Vertical stone skeletons and stained glass.",
};

describe("reveal view", () => {
  it("shows the truth marker, the style facts, and all three score components", () => {
    const reveal: RevealInfo = {
      round: 0,
      style: TRUTH,
      truthCoord: { lat: 48.9, lon: 2.35 },
      truthPeriod: { start: 1140, end: 1520 },
      scores: {
        p1: { display_name: "Ada", style_points: 2500, geo_points: 4770.1, time_points: 2500, total: 9770.1, distance_km: 94.6, year_delta: 0 },
      },
      landmarkName: null,
      fusionStyle: null,
      poemText: null,
    };
    const container = mount();
    renderReveal(container, { ...initialState(), view: "reveal", reveal }, () => {});

    expect(container.querySelector(".marker-truth")).not.toBeNull();
    expect(container.textContent).toContain("it was Gothic");
    expect(container.textContent).toContain("pointed arches");
    expect(container.textContent).toContain("Abbot Suger");
    expect(container.textContent).toContain("Vertical stone skeletons");

    const cells = [...container.querySelectorAll("td")].map((n) => n.textContent);
    expect(cells).toEqual(["Ada", "2500", "4770.1", "2500.0", "9770.1"]);
  });

  it("labels Sights reveals with landmark and fusion style", () => {
    const reveal: RevealInfo = {
      round: 1,
      style: TRUTH,
      truthCoord: { lat: 48.9, lon: 2.35 },
      truthPeriod: null,
      scores: {},
      landmarkName: "Notre-Dame",
      fusionStyle: { ...TRUTH, style_id: "baroque", name: "Baroque" },
      poemText: null,
    };
    const container = mount();
    renderReveal(container, { ...initialState(), view: "reveal", reveal }, () => {});
    expect(container.textContent).toContain("Landmark: Notre-Dame");
    expect(container.textContent).toContain("Fused with: Baroque");
  });
});

describe("leaderboard view", () => {
  it("renders entries in server order and updates on re-render", () => {
    const container = mount();
    renderLeaderboard(container, [
      { player_id: "p1", display_name: "Ada", total_points: 19000, rounds_played: 2, last_update: 10 },
      { player_id: "p2", display_name: "Grace", total_points: 12000, rounds_played: 2, last_update: 9 },
    ]);
    let names = [...container.querySelectorAll(".board-name")].map((n) => n.textContent);
    expect(names).toEqual(["Ada", "Grace"]);

    renderLeaderboard(container, [
      { player_id: "p2", display_name: "Grace", total_points: 25000, rounds_played: 3, last_update: 12 },
      { player_id: "p1", display_name: "Ada", total_points: 19000, rounds_played: 3, last_update: 11 },
    ]);
    names = [...container.querySelectorAll(".board-name")].map((n) => n.textContent);
    expect(names).toEqual(["Grace", "Ada"]);
    expect(container.textContent).toContain("25000 pts / 3");
  });
});
