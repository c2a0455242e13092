// Equirectangular world map. Width:height is locked 2:1 to match the board,
// so element fractions convert straight through fractionToGeo. The canvas
// draws only a graticule; the coordinate readout is the source of truth.

import { formatCoord, fractionToGeo, geoToFraction, type GeoCoord } from "../board.js";
import { el } from "../dom.js";

export class WorldMap {
  readonly root: HTMLElement;
  onPick: ((coord: GeoCoord) => void) | null = null;
  private readonly canvas: HTMLCanvasElement;
  private readonly markers = new Map<string, HTMLElement>();
  private readonly readout: HTMLElement;

  constructor(interactive: boolean) {
    this.canvas = el("canvas", { class: "map-canvas" });
    this.readout = el("span", { class: "map-readout", text: "" });
    this.root = el("div", { class: "map" }, this.canvas, this.readout);
    this.canvas.width = 720;
    this.canvas.height = 360;
    this.drawGraticule();
    if (interactive) {
      this.root.classList.add("map-interactive");
      this.root.addEventListener("pointerdown", (ev) => this.pick(ev));
    }
  }

  private pick(ev: PointerEvent): void {
    const rect = this.root.getBoundingClientRect();
    const fx = (ev.clientX - rect.left) / rect.width;
    const fy = (ev.clientY - rect.top) / rect.height;
    const coord = fractionToGeo(fx, fy);
    this.showPick(coord);
    this.onPick?.(coord);
  }

  /** Restore a previous pick without firing onPick (re-render path). */
  showPick(coord: GeoCoord): void {
    this.setMarker("guess", coord, "marker-guess");
    this.readout.textContent = formatCoord(coord);
  }

  setMarker(name: string, coord: GeoCoord, className: string): void {
    let marker = this.markers.get(name);
    if (!marker) {
      marker = el("div", { class: `marker ${className}` });
      this.markers.set(name, marker);
      this.root.append(marker);
    }
    const { fx, fy } = geoToFraction(coord);
    marker.style.left = `${fx * 100}%`;
    marker.style.top = `${fy * 100}%`;
  }

  private drawGraticule(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.fillStyle = "#10304a";
    ctx.fillRect(0, 0, width, height);
    ctx.strokeStyle = "#2a5a7a";
    ctx.lineWidth = 1;
    for (let lon = -150; lon <= 150; lon += 30) {
      const x = ((lon + 180) / 360) * width;
      ctx.beginPath();
      ctx.moveTo(x, 0);
      ctx.lineTo(x, height);
      ctx.stroke();
    }
    for (let lat = -60; lat <= 60; lat += 30) {
      const y = ((90 - lat) / 180) * height;
      ctx.beginPath();
      ctx.moveTo(0, y);
      ctx.lineTo(width, y);
      ctx.stroke();
    }
    ctx.strokeStyle = "#3f7a9f";
    ctx.beginPath();
    ctx.moveTo(width / 2, 0);
    ctx.lineTo(width / 2, height);
    ctx.moveTo(0, height / 2);
    ctx.lineTo(width, height / 2);
    ctx.stroke();
  }
}
