// Reveal view: the truth on the map, what the style actually is, and how
// everyone scored, broken into the style/geo/time components.

import { formatYear } from "../board.js";
import { el, clear } from "../dom.js";
import type { AppState, RevealInfo } from "../state.js";
import { WorldMap } from "./map.js";

export function renderReveal(
  container: HTMLElement,
  state: AppState,
  onNextRound: () => void,
): void {
  clear(container);
  const reveal = state.reveal;
  if (!reveal) return;

  const map = new WorldMap(false);
  map.setMarker("truth", reveal.truthCoord, "marker-truth");

  container.append(
    el("h2", { text: `Round ${reveal.round + 1} — it was ${reveal.style.name}` }),
    el("p", { class: "notice", text: state.notice ?? "" }),
    map.root,
    truthCard(reveal),
    scoreTable(reveal),
    nextButton(onNextRound),
  );
}

function truthCard(reveal: RevealInfo): HTMLElement {
  const style = reveal.style;
  const period = style.period;
  const facts = el(
    "div",
    { class: "truth-facts" },
    el("p", {
      text: `${style.name} — ${style.region_id}, ${formatYear(period.start)} to ${formatYear(period.end)}`,
    }),
    el("p", {
      class: "truth-coord",
      text: `origin: ${reveal.truthCoord.lat.toFixed(2)}, ${reveal.truthCoord.lon.toFixed(2)}`,
    }),
    el("p", { class: "summary", text: style.summary }),
  );
  if (style.characteristics.length) {
    const list = el("ul", { class: "characteristics" });
    for (const item of style.characteristics) list.append(el("li", { text: item }));
    facts.append(el("h3", { text: "Look for" }), list);
  }
  if (style.architects.length) {
    facts.append(el("p", { text: `Architects: ${style.architects.join(", ")}` }));
  }
  if (reveal.landmarkName) {
    facts.append(el("p", { text: `Landmark: ${reveal.landmarkName}` }));
  }
  if (reveal.fusionStyle) {
    facts.append(el("p", { text: `Fused with: ${reveal.fusionStyle.name}` }));
  }
  if (reveal.poemText) {
    facts.append(el("h3", { text: "The poem" }), el("pre", { class: "poem", text: reveal.poemText }));
  }
  return el("section", { class: "truth" }, facts);
}

function scoreTable(reveal: RevealInfo): HTMLElement {
  const table = el("table", { class: "scores" });
  table.append(
    el(
      "tr",
      {},
      el("th", { text: "player" }),
      el("th", { text: "style" }),
      el("th", { text: "geo" }),
      el("th", { text: "time" }),
      el("th", { text: "total" }),
    ),
  );
  const rows = Object.entries(reveal.scores).sort(
    (a, b) => b[1].total - a[1].total,
  );
  for (const [, score] of rows) {
    table.append(
      el(
        "tr",
        {},
        el("td", { text: score.display_name }),
        el("td", { text: score.style_points.toFixed(0) }),
        el("td", { text: score.geo_points.toFixed(1) }),
        el("td", { text: score.time_points.toFixed(1) }),
        el("td", { class: "total", text: score.total.toFixed(1) }),
      ),
    );
  }
  return table;
}

function nextButton(onNextRound: () => void): HTMLElement {
  const button = el("button", { class: "next-round", text: "Next round" });
  button.addEventListener("click", onNextRound);
  return el("div", { class: "actions" }, button);
}
