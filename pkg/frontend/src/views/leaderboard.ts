// Sidebar leaderboard, re-rendered whenever the WS stream reports a reveal.

import { el, clear } from "../dom.js";
import type { LeaderboardEntry } from "../types.js";

export function renderLeaderboard(
  container: HTMLElement,
  entries: LeaderboardEntry[],
): void {
  clear(container);
  container.append(el("h3", { text: "Leaderboard" }));
  if (entries.length === 0) {
    container.append(el("p", { class: "empty", text: "no scores yet" }));
    return;
  }
  const list = el("ol", { class: "board" });
  for (const entry of entries) {
    list.append(
      el(
        "li",
        {},
        el("span", { class: "board-name", text: entry.display_name }),
        el("span", {
          class: "board-points",
          text: `${entry.total_points.toFixed(0)} pts / ${entry.rounds_played}`,
        }),
      ),
    );
  }
  container.append(list);
}
