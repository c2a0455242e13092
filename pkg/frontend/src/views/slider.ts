// Year slider. A custom track rather than <input type=range> so the pixel
// mapping is exactly the shared board math: pointer at the left edge is
// fraction 0 and year -3500, right edge is 1 and 2025, no year 0 anywhere.

import {
  formatYear,
  fractionToYear,
  yearToFraction,
  YEAR_MAX,
  YEAR_MIN,
} from "../board.js";
import { el } from "../dom.js";

export class YearSlider {
  readonly root: HTMLElement;
  year: number | null = null;
  onChange: ((year: number) => void) | null = null;
  private readonly track: HTMLElement;
  private readonly fill: HTMLElement;
  private readonly thumb: HTMLElement;
  private readonly label: HTMLElement;
  private dragging = false;

  constructor() {
    this.fill = el("div", { class: "slider-fill" });
    this.thumb = el("div", { class: "slider-thumb" });
    this.track = el("div", { class: "slider-track", tabindex: "0" }, this.fill, this.thumb);
    this.label = el("span", { class: "slider-label", text: "drag to set a year" });
    this.root = el(
      "div",
      { class: "slider" },
      el("span", { class: "slider-end", text: formatYear(YEAR_MIN) }),
      this.track,
      el("span", { class: "slider-end", text: formatYear(YEAR_MAX) }),
      this.label,
    );
    this.track.addEventListener("pointerdown", (ev) => {
      this.dragging = true;
      this.track.setPointerCapture(ev.pointerId);
      this.fromPointer(ev);
    });
    this.track.addEventListener("pointermove", (ev) => {
      if (this.dragging) this.fromPointer(ev);
    });
    this.track.addEventListener("pointerup", () => {
      this.dragging = false;
    });
    this.track.addEventListener("keydown", (ev) => this.fromKey(ev));
  }

  private fromPointer(ev: PointerEvent): void {
    const rect = this.track.getBoundingClientRect();
    const fraction = (ev.clientX - rect.left) / rect.width;
    this.setYear(fractionToYear(fraction));
  }

  private fromKey(ev: KeyboardEvent): void {
    const current = this.year ?? YEAR_MIN;
    let next: number | null = null;
    if (ev.key === "ArrowLeft") next = current - 1;
    else if (ev.key === "ArrowRight") next = current + 1;
    else if (ev.key === "Home") next = YEAR_MIN;
    else if (ev.key === "End") next = YEAR_MAX;
    if (next === null) return;
    ev.preventDefault();
    if (next === 0) next = ev.key === "ArrowLeft" ? -1 : 1;
    this.setYear(Math.min(Math.max(next, YEAR_MIN), YEAR_MAX));
  }

  setYear(year: number): void {
    this.year = year;
    const fraction = yearToFraction(year);
    this.fill.style.width = `${fraction * 100}%`;
    this.thumb.style.left = `${fraction * 100}%`;
    this.label.textContent = formatYear(year);
    this.onChange?.(year);
  }
}
