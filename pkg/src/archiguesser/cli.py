"""Command line entry points.

`archiguesser serve` runs the HTTP service; the rest are operator tools for
the physical pieces of the game: dictionary generation, marker printing,
frame inspection, offline scoring, and catalog curation.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .catalog import GeoCoord, YearInterval, default_catalog_path, load_catalog
from .curation import curate, default_curation_config, load_curation_config, make_text_client
from .errors import ArchiGuesserError
from .scoring import GameMode, Guess, RoundSpec, score_guess
from .service import ServiceConfig, load_service_config, serve
from .vision import (
    default_board_spec,
    detect_markers,
    generate_dictionary,
    load_board_spec,
    load_dictionary,
    load_image,
    read_board,
    render_marker,
    save_dictionary,
    save_image,
)


@click.group()
def main() -> None:
    """Architectural style guessing game: service and board tooling."""


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@main.command("gen-dict")
@click.option("--count", default=64, show_default=True, help="Number of marker ids.")
@click.option("--grid", default=5, show_default=True, help="Payload grid size (cells per side).")
@click.option("--min-distance", default=7, show_default=True,
              help="Minimum pairwise Hamming distance over all rotations.")
@click.option("--seed", default=42, show_default=True, help="Search RNG seed.")
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Output dictionary JSON path.")
def gen_dict(count: int, grid: int, min_distance: int, seed: int, out: str) -> None:
    """Generate a marker dictionary and write it as JSON."""
    try:
        dictionary = generate_dictionary(count, grid, min_distance, seed=seed)
        save_dictionary(dictionary, out)
    except ArchiGuesserError as exc:
        _fail(exc)
    click.echo(f"wrote {count} markers (grid {grid}, min rotation distance {min_distance}) to {out}")


@main.command("render-marker")
@click.option("--id", "marker_id", type=int, required=True, help="Marker id to render.")
@click.option("--px", default=200, show_default=True, help="Output image side length.")
@click.option("--dict", "dict_path", type=click.Path(exists=True, dir_okay=False),
              help="Dictionary JSON; defaults to the built-in 64-marker dictionary.")
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Output image (.png or .pgm).")
def render_marker_cmd(marker_id: int, px: int, dict_path: str | None, out: str) -> None:
    """Render one marker to an image file for printing."""
    try:
        dictionary = load_dictionary(dict_path) if dict_path else generate_dictionary(64, 5, 7, seed=42)
        save_image(render_marker(dictionary, marker_id, px=px), out)
    except ArchiGuesserError as exc:
        _fail(exc)
    click.echo(f"wrote marker {marker_id} at {px}x{px} to {out}")


@main.command("detect")
@click.option("--image", "image_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Camera frame (.png or .pgm).")
@click.option("--dict", "dict_path", type=click.Path(exists=True, dir_okay=False),
              help="Dictionary JSON; defaults to the built-in dictionary.")
@click.option("--window", default=15, show_default=True, help="Adaptive threshold window.")
@click.option("--offset", default=7.0, show_default=True, help="Adaptive threshold offset.")
@click.option("--board/--no-board", default=False,
              help="Also interpret the frame as a game board (tokens, slider).")
@click.option("--board-spec", "board_spec_path", type=click.Path(exists=True, dir_okay=False),
              help="Board layout JSON; defaults to the built-in layout.")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False),
              help="Style catalog for token binding; defaults to the bundled catalog.")
def detect(image_path: str, dict_path: str | None, window: int, offset: float,
           board: bool, board_spec_path: str | None, catalog_path: str | None) -> None:
    """Detect markers in a frame; one JSON object per line."""
    try:
        dictionary = load_dictionary(dict_path) if dict_path else generate_dictionary(64, 5, 7, seed=42)
        frame = load_image(image_path)
        detections = detect_markers(frame, dictionary, window=window, offset=offset)
        for det in detections:
            click.echo(json.dumps({
                "marker_id": det.marker_id,
                "rotation": det.rotation,
                "corners": [[x, y] for x, y in det.corners],
                "decode_errors": det.decode_errors,
            }, sort_keys=True))
        if board:
            spec = load_board_spec(board_spec_path) if board_spec_path else default_board_spec()
            catalog = load_catalog(catalog_path or default_catalog_path())
            reading = read_board(frame, dictionary, spec, catalog)
            click.echo(json.dumps({
                "board": {
                    "tokens": [
                        {"marker_id": mid, "lat": c.lat, "lon": c.lon}
                        for mid, c in reading.tokens
                    ],
                    "slider_year": reading.slider_year,
                    "unmatched": list(reading.unmatched),
                },
            }, sort_keys=True))
    except ArchiGuesserError as exc:
        _fail(exc)


@main.command("score")
@click.option("--guess", "guess_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Guess JSON: {style_ids, coord{lat,lon}, year}.")
@click.option("--round", "round_path", type=click.Path(exists=True, dir_okay=False),
              required=True,
              help="Round JSON: {mode, truth_style_id, truth_coord{lat,lon}, "
                   "truth_period{start,end}[, fusion_style_id]}.")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False),
              help="Style catalog; defaults to the bundled catalog.")
def score(guess_path: str, round_path: str, catalog_path: str | None) -> None:
    """Score a guess against a round definition; prints the Score as JSON."""
    try:
        catalog = load_catalog(catalog_path or default_catalog_path())
        g = json.loads(Path(guess_path).read_text())
        r = json.loads(Path(round_path).read_text())
        guess = Guess(
            style_ids=tuple(g["style_ids"]),
            coord=GeoCoord(g["coord"]["lat"], g["coord"]["lon"]),
            year=g["year"],
        )
        spec = RoundSpec(
            mode=GameMode(r["mode"]),
            truth_style_id=r["truth_style_id"],
            truth_coord=GeoCoord(r["truth_coord"]["lat"], r["truth_coord"]["lon"]),
            truth_period=YearInterval(r["truth_period"]["start"], r["truth_period"]["end"]),
            fusion_style_id=r.get("fusion_style_id"),
        )
        result = score_guess(guess, spec, catalog)
    except (ArchiGuesserError, KeyError, TypeError, json.JSONDecodeError) as exc:
        _fail(exc)
        return
    click.echo(json.dumps({
        "style_points": result.style_points,
        "geo_points": result.geo_points,
        "time_points": result.time_points,
        "total": result.total,
        "distance_km": result.distance_km,
        "year_delta": result.year_delta,
    }, sort_keys=True))


@main.command("curate")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Curation config JSON; defaults to the bundled region list.")
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Output catalog JSON path.")
@click.option("--report", type=click.Path(dir_okay=False), required=True,
              help="Output curation report (markdown).")
def curate_cmd(config_path: str | None, out: str, report: str) -> None:
    """Build a style catalog by querying a text model repeatedly."""
    try:
        config = load_curation_config(config_path) if config_path else default_curation_config()
        client = make_text_client(config)
        result = curate(config, out, report, text_client=client)
    except ArchiGuesserError as exc:
        _fail(exc)
        return
    click.echo(f"curated {len(result.catalog.styles)} styles "
               f"({len(result.region_gaps)} region gaps) -> {out}")


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Service config JSON file.")
@click.option("--host", default=None, help="Bind address.")
@click.option("--port", type=int, default=None, help="Bind port.")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Style catalog path.")
@click.option("--assets-dir", default=None, help="Directory for generated assets.")
@click.option("--log-path", default=None, help="Event log JSONL path.")
@click.option("--gen-backend", default=None, help="Generative backend name (default: mock).")
@click.option("--deterministic/--no-deterministic", default=None,
              help="Tick clock and seeded RNG for reproducible transcripts.")
@click.option("--deadline-seconds", type=float, default=None, help="Guessing deadline per round.")
@click.option("--max-rounds", type=int, default=None, help="Rounds per session.")
@click.option("--board-spec", "board_spec_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Board layout JSON for frame guesses.")
@click.option("--ui-dir", default=None, help="Directory of static UI files to mount at /ui.")
def serve_cmd(config_path: str | None, **cli_values) -> None:
    """Run the HTTP + WebSocket service (CLI > env > file > defaults)."""
    overrides = {k: v for k, v in cli_values.items() if v is not None}
    try:
        config = load_service_config(file_path=config_path, cli=overrides)
    except ArchiGuesserError as exc:
        _fail(exc)
        return
    click.echo(f"serving on http://{config.host}:{config.port} "
               f"(backend={config.gen_backend}, deterministic={config.deterministic})")
    serve(config)


if __name__ == "__main__":
    main()
