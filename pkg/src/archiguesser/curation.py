"""Catalog curation pipeline: listing, consistency selection, summarization.

The pipeline turns repeated generative-text queries into a validated catalog:
top-10 style listings per region are collected several times, names that
recur across repetitions are kept (one-off hallucinations drop out), each
survivor is summarized to JSON, and control questions flag summaries whose
re-asked facts disagree. Flags go to the report; records are never
auto-corrected.

Everything here is deterministic given a deterministic client, so a full
mock run writes byte-identical files on every invocation. No live text
client is bundled; the ``TextClient`` protocol is the seam where one would
plug in.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

from .catalog import (
    Catalog,
    GeoCoord,
    Region,
    StyleRecord,
    YearInterval,
    default_catalog_path,
    load_catalog,
    save_catalog,
)
from .errors import ClientError, CurationError, SummaryError, ValidationError
from .textnorm import canonical_name

DEFAULT_REPETITIONS = 10
DEFAULT_KEEP = 30
SUMMARY_ATTEMPTS = 3
LISTING_RETRIES = 2
LISTING_SIZE = 10
FIRST_TOKEN_MARKER_ID = 5


class TextClient(Protocol):
    """Plain text completion: one prompt in, one answer out."""

    def complete(self, prompt: str) -> str: ...


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class RawListingRun:
    """One verbatim listing response for (region, repetition)."""

    region_id: str
    repetition_index: int
    style_names: tuple[str, ...]

    def __post_init__(self):
        if self.repetition_index < 0:
            raise ValidationError("repetition_index must be >= 0")


@dataclass(frozen=True)
class ConsistencyTally:
    """How often one canonical name recurred, and where."""

    canonical_name: str
    display_name: str
    count: int
    regions: frozenset[str]

    def __post_init__(self):
        if self.count < 1:
            raise ValidationError("tally count must be >= 1")


@dataclass(frozen=True)
class ControlCheck:
    style_id: str
    question: str
    expected: str
    observed: str
    passed: bool


@dataclass(frozen=True)
class CurationConfig:
    regions: tuple[Region, ...]
    repetitions: int = DEFAULT_REPETITIONS
    keep: int = DEFAULT_KEEP
    client: str = "mock"
    seed: int = 0

    def __post_init__(self):
        if not self.regions:
            raise ValidationError("config must name at least one region")
        if self.repetitions < 1:
            raise ValidationError("repetitions must be >= 1")
        if self.keep < 1:
            raise ValidationError("keep must be >= 1")
        if self.client not in ("mock", "live"):
            raise ValidationError(f"client must be mock or live, got {self.client!r}")


@dataclass(frozen=True)
class CurationResult:
    catalog: Catalog
    flagged_style_ids: tuple[str, ...]
    skipped_styles: tuple[str, ...]
    region_gaps: tuple[str, ...]


# ---------------------------------------------------------------------------
# Prompt shapes. The Task/Region/Style header lines are the contract between
# the pipeline and any deterministic client; the prose below them is for live
# models.


def listing_prompt(region: Region, repetition: int) -> str:
    return (
        f"Task: listing\nRegion: {region.id}\nRepetition: {repetition}\n\n"
        f"List the top {LISTING_SIZE} architectural styles for the "
        f'socio-cultural region "{region.display_name}". '
        "Answer with one style name per line, most significant first."
    )


_SCHEMA_HINT = (
    "Return only a JSON object with keys: name (string), region_id (string), "
    "period (object with integer start and end, signed years, no year 0), "
    "characteristics (1-10 strings), architects (0-10 strings), "
    "origin (object with lat and lon), summary (string)."
)


def summary_prompt(display_name: str, attempt: int, last_error: str | None = None) -> str:
    parts = [
        f"Task: summary\nStyle: {display_name}\nAttempt: {attempt}\n\n"
        f'Produce a concise JSON summary of the architectural style "{display_name}".',
        _SCHEMA_HINT,
    ]
    if last_error:
        parts.append(f"The previous answer was rejected: {last_error}")
    return " ".join(parts)


def century_question(record: StyleRecord) -> str:
    return (
        f"Task: century\nStyle: {record.name}\n\n"
        f"In which century does the {record.name} architectural style begin? "
        'Answer like "15th century CE" or "8th century BCE".'
    )


def region_question(record: StyleRecord) -> str:
    return (
        f"Task: region\nStyle: {record.name}\n\n"
        f"Which socio-cultural region does the {record.name} style belong to? "
        "Answer with the region name only."
    )


def architect_question(record: StyleRecord, architect: str) -> str:
    return (
        f"Task: architect\nStyle: {record.name}\nArchitect: {architect}\n\n"
        f"Which architectural style is {architect} best known for? "
        "Answer with the style name only."
    )


# ---------------------------------------------------------------------------
# Century arithmetic (signed years, no year 0)


def _ordinal(n: int) -> str:
    if 10 <= n % 100 <= 13:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


def century_label(year: int) -> str:
    """"19th century CE" / "8th century BCE" for a signed year."""
    if year == 0:
        raise ValidationError("year 0 does not exist")
    if year > 0:
        return f"{_ordinal((year + 99) // 100)} century CE"
    return f"{_ordinal((-year + 99) // 100)} century BCE"


_CENTURY_RE = re.compile(
    r"(\d+)\s*(?:st|nd|rd|th)?\s*century(?:\s+(bce|bc|ce|ad))?", re.IGNORECASE
)


def parse_century(text: str) -> str | None:
    """Extract a canonical century label from free text, or None."""
    m = _CENTURY_RE.search(text)
    if not m:
        return None
    n = int(m.group(1))
    if n < 1:
        return None
    era = (m.group(2) or "ce").lower()
    return f"{_ordinal(n)} century {'BCE' if era in ('bce', 'bc') else 'CE'}"


# ---------------------------------------------------------------------------
# Pipeline operations

_ENUM_PREFIX_RE = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s*")


def _parse_listing(text: str) -> tuple[str, ...]:
    names = []
    for line in text.splitlines():
        name = _ENUM_PREFIX_RE.sub("", line).strip()
        if name:
            names.append(name)
    return tuple(names)


def collect_listings(
    text_client: TextClient,
    regions: Sequence[Region],
    repetitions: int,
    retries: int = LISTING_RETRIES,
) -> list[RawListingRun]:
    """One RawListingRun per (region, repetition), responses kept verbatim."""
    if repetitions < 1:
        raise ValidationError(f"repetitions must be >= 1, got {repetitions}")
    runs: list[RawListingRun] = []
    for region in regions:
        for rep in range(repetitions):
            prompt = listing_prompt(region, rep)
            last: ClientError | None = None
            for _ in range(retries + 1):
                try:
                    response = text_client.complete(prompt)
                    break
                except ClientError as exc:
                    last = exc
            else:
                raise ClientError(
                    f"listing failed for region {region.id!r} repetition {rep}: {last}"
                ) from last
            runs.append(RawListingRun(region.id, rep, _parse_listing(response)))
    return runs


def select_consistent(runs: Sequence[RawListingRun], keep: int) -> list[ConsistencyTally]:
    """Rank canonical names by how many runs list them; keep the top `keep`.

    Pure and permutation-invariant: counts, regions, and surface-form
    frequencies depend only on the multiset of runs.
    """
    if keep < 1:
        raise ValidationError(f"keep must be >= 1, got {keep}")
    counts: dict[str, int] = {}
    regions: dict[str, set[str]] = {}
    surfaces: dict[str, dict[str, int]] = {}
    for run in runs:
        seen_in_run: set[str] = set()
        for raw in run.style_names:
            canon = canonical_name(raw)
            if not canon:
                continue
            forms = surfaces.setdefault(canon, {})
            forms[raw.strip()] = forms.get(raw.strip(), 0) + 1
            if canon in seen_in_run:
                continue
            seen_in_run.add(canon)
            counts[canon] = counts.get(canon, 0) + 1
            regions.setdefault(canon, set()).add(run.region_id)
    ranked = sorted(counts, key=lambda c: (-counts[c], c))
    tallies = []
    for canon in ranked[:keep]:
        display = min(surfaces[canon], key=lambda form: (-surfaces[canon][form], form))
        tallies.append(
            ConsistencyTally(
                canonical_name=canon,
                display_name=display,
                count=counts[canon],
                regions=frozenset(regions[canon]),
            )
        )
    return tallies


def _slug(canonical: str) -> str:
    return canonical.replace(" ", "-")


def _record_from_summary(doc: dict, tally: ConsistencyTally) -> StyleRecord:
    if not isinstance(doc, dict):
        raise ValidationError("summary must be a JSON object")
    name = str(doc["name"])
    if canonical_name(name) != tally.canonical_name:
        raise ValidationError(
            f"summary names {name!r}, expected {tally.display_name!r}"
        )
    period = doc["period"]
    return StyleRecord(
        id=_slug(tally.canonical_name),
        name=name,
        region_id=str(doc["region_id"]),
        period=YearInterval(int(period["start"]), int(period["end"])),
        characteristics=tuple(str(c) for c in doc["characteristics"]),
        architects=tuple(str(a) for a in doc.get("architects", [])),
        origin=GeoCoord(float(doc["origin"]["lat"]), float(doc["origin"]["lon"])),
        summary=str(doc.get("summary", "")),
    )


def summarize_style(
    text_client: TextClient, tally: ConsistencyTally, attempts: int = SUMMARY_ATTEMPTS
) -> StyleRecord:
    """JSON summary -> validated StyleRecord, retrying malformed answers."""
    last_error = None
    for attempt in range(1, attempts + 1):
        prompt = summary_prompt(tally.display_name, attempt, last_error)
        try:
            response = text_client.complete(prompt)
        except ClientError as exc:
            last_error = str(exc)
            continue
        try:
            return _record_from_summary(json.loads(response), tally)
        except (json.JSONDecodeError, ValidationError, KeyError, TypeError, ValueError) as exc:
            last_error = f"{type(exc).__name__}: {exc}"
    raise SummaryError(
        f"no valid summary for {tally.display_name!r} after {attempts} attempts: {last_error}"
    )


def _ask(text_client: TextClient, question: str) -> tuple[str, bool]:
    """Observed text plus whether the client answered at all."""
    try:
        return text_client.complete(question).strip(), True
    except ClientError:
        return "<client-error>", False


def run_control_checks(text_client: TextClient, record: StyleRecord) -> list[ControlCheck]:
    """Re-ask century, region, and architect; compare against the record.

    Failures only flag; the record is never mutated here. A style with no
    listed architects skips the architect check entirely.
    """
    checks = []

    q = century_question(record)
    expected = century_label(record.period.start)
    observed, ok = _ask(text_client, q)
    passed = ok and parse_century(observed) == expected
    checks.append(ControlCheck(record.id, q, expected, observed, passed))

    q = region_question(record)
    observed, ok = _ask(text_client, q)
    passed = ok and canonical_name(observed) == canonical_name(record.region_id)
    checks.append(ControlCheck(record.id, q, record.region_id, observed, passed))

    if record.architects:
        q = architect_question(record, record.architects[0])
        observed, ok = _ask(text_client, q)
        passed = ok and canonical_name(observed) == canonical_name(record.name)
        checks.append(ControlCheck(record.id, q, record.name, observed, passed))

    return checks


# ---------------------------------------------------------------------------
# Full pipeline


def make_text_client(config: CurationConfig) -> TextClient:
    if config.client == "mock":
        return FixtureTextClient(seed=config.seed)
    raise ValidationError(
        'no live text client is bundled; set client to "mock" or inject your own'
    )


def curate(
    config: CurationConfig,
    out_path: str | Path,
    report_path: str | Path,
    text_client: TextClient | None = None,
) -> CurationResult:
    """collect -> select -> summarize -> control-check -> write catalog + report.

    A region whose listings fail entirely is reported as a gap, not fatal;
    fatal errors are I/O failures and an empty surviving style set.
    """
    client = text_client if text_client is not None else make_text_client(config)

    runs: list[RawListingRun] = []
    gaps: list[str] = []
    for region in config.regions:
        try:
            runs.extend(collect_listings(client, [region], config.repetitions))
        except ClientError as exc:
            gaps.append(f"{region.id}: {exc}")

    tallies = select_consistent(runs, config.keep)

    records: list[StyleRecord] = []
    skipped: list[str] = []
    flagged: list[str] = []
    checks_by_style: dict[str, list[ControlCheck]] = {}
    known_regions = {r.id for r in config.regions}
    for tally in tallies:
        try:
            record = summarize_style(client, tally)
        except SummaryError as exc:
            skipped.append(f"{tally.display_name}: {exc}")
            continue
        if record.region_id not in known_regions:
            skipped.append(
                f"{tally.display_name}: summary names unknown region {record.region_id!r}"
            )
            continue
        checks = run_control_checks(client, record)
        checks_by_style[record.id] = checks
        if not all(c.passed for c in checks):
            flagged.append(record.id)
        records.append(record)

    if not records:
        raise CurationError("curation produced zero styles; nothing to write")

    tokens = tuple(
        (FIRST_TOKEN_MARKER_ID + i, record.id) for i, record in enumerate(records)
    )
    catalog = Catalog(
        regions=config.regions,
        styles=tuple(records),
        landmarks=(),
        tokens=tokens,
    )
    report = _render_report(config, runs, tallies, records, flagged, skipped, gaps, checks_by_style)
    try:
        save_catalog(catalog, out_path)
        Path(report_path).write_text(report, encoding="utf-8")
    except OSError as exc:
        raise CurationError(f"could not write curation output: {exc}") from exc
    return CurationResult(
        catalog=catalog,
        flagged_style_ids=tuple(flagged),
        skipped_styles=tuple(skipped),
        region_gaps=tuple(gaps),
    )


def _render_report(
    config: CurationConfig,
    runs: list[RawListingRun],
    tallies: list[ConsistencyTally],
    records: list[StyleRecord],
    flagged: list[str],
    skipped: list[str],
    gaps: list[str],
    checks_by_style: dict[str, list[ControlCheck]],
) -> str:
    # No timestamps: the report must be byte-identical across identical runs.
    lines = [
        "# Curation report",
        "",
        "## Configuration",
        f"- regions: {len(config.regions)} ({', '.join(r.id for r in config.regions)})",
        f"- repetitions: {config.repetitions}",
        f"- keep: {config.keep}",
        f"- client: {config.client} (seed {config.seed})",
        "",
        "## Collection",
        f"- listing runs: {len(runs)}",
    ]
    if gaps:
        lines.append("- region gaps:")
        lines.extend(f"  - {g}" for g in gaps)
    else:
        lines.append("- region gaps: none")
    lines += [
        "",
        "## Selection",
        f"- styles kept: {len(tallies)}",
        "",
        "| style | count | regions |",
        "| --- | --- | --- |",
    ]
    for t in tallies:
        lines.append(f"| {t.display_name} | {t.count} | {', '.join(sorted(t.regions))} |")
    lines += ["", "## Summaries"]
    if skipped:
        lines.append("- skipped (no valid summary):")
        lines.extend(f"  - {s}" for s in skipped)
    else:
        lines.append("- skipped: none")
    lines += ["", "## Control checks"]
    if flagged:
        lines.append("- needs_review: " + ", ".join(flagged))
        for style_id in flagged:
            lines.append(f"- {style_id}:")
            for c in checks_by_style[style_id]:
                if not c.passed:
                    first = c.question.splitlines()[0].removeprefix("Task: ")
                    lines.append(
                        f"  - {first}: expected {c.expected!r}, observed {c.observed!r}"
                    )
    else:
        lines.append("- needs_review: none")
    lines += [
        "",
        f"Wrote {len(records)} styles; token markers "
        f"{FIRST_TOKEN_MARKER_ID}..{FIRST_TOKEN_MARKER_ID + len(records) - 1}.",
        "",
    ]
    return "\n".join(lines)


def load_curation_config(path: str | Path) -> CurationConfig:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    regions = tuple(
        Region(str(r["id"]), str(r.get("display_name", r["id"]))) for r in doc["regions"]
    )
    return CurationConfig(
        regions=regions,
        repetitions=int(doc.get("repetitions", DEFAULT_REPETITIONS)),
        keep=int(doc.get("keep", DEFAULT_KEEP)),
        client=str(doc.get("client", "mock")),
        seed=int(doc.get("seed", 0)),
    )


def default_curation_config(**overrides) -> CurationConfig:
    """Config over the regions of the shipped catalog; handy for mock runs."""
    catalog = load_catalog(default_catalog_path())
    base = dict(regions=catalog.regions, repetitions=DEFAULT_REPETITIONS,
                keep=DEFAULT_KEEP, client="mock", seed=0)
    base.update(overrides)
    return CurationConfig(**base)


# ---------------------------------------------------------------------------
# Deterministic fixture client


_FAKE_ADJ = (
    "amberline", "austral", "basaltic", "boreal", "cantilevered", "cloistered",
    "crystalline", "deltaic", "estuarine", "fluvial", "glacial", "lacustrine",
    "littoral", "meridian", "monsoon", "nomadic", "obsidian", "porcelain",
    "riparian", "saline", "solar", "steppe", "vernal", "zenithal",
)
_FAKE_NOUN = (
    "classicism", "constructivism", "eclecticism", "expressionism", "formalism",
    "functionalism", "historicism", "minimalism", "modernism", "monumentalism",
    "organicism", "ornamentalism", "rationalism", "regionalism", "revivalism",
    "structuralism", "symbolism", "traditionalism", "urbanism", "verticalism",
)
_FAKE_SUFFIX = (
    "circle", "current", "league", "line", "movement",
    "school", "tendency", "tradition", "wave", "workshop",
)

_HEADER_RE = re.compile(r"^(Task|Region|Repetition|Style|Attempt|Architect): (.*)$", re.MULTILINE)


class FixtureTextClient:
    """Answers curation prompts from the shipped catalog, deterministically.

    Listings return the region's real styles padded to ten names with
    invented one-offs; the invented names are unique per (region, repetition)
    (up to 40 repetitions), so each accumulates a count of one and can never
    displace a real style during selection.
    Summaries and control answers echo the catalog record.

    Fault injection for tests: `fail_regions` raises ClientError on those
    listings; `malformed_attempts` maps a canonical style name to how many
    initial summary attempts return truncated JSON; `wrong_century` styles
    answer the century question one century late.
    """

    def __init__(
        self,
        catalog: Catalog | None = None,
        seed: int = 0,
        fail_regions: frozenset[str] | set[str] = frozenset(),
        malformed_attempts: dict[str, int] | None = None,
        wrong_century: frozenset[str] | set[str] = frozenset(),
    ):
        self._catalog = catalog if catalog is not None else load_catalog(default_catalog_path())
        self._seed = seed
        self._fail_regions = frozenset(fail_regions)
        self._malformed = dict(malformed_attempts or {})
        self._wrong_century = frozenset(wrong_century)
        self._region_order = {r.id: i for i, r in enumerate(self._catalog.regions)}
        self._by_region: dict[str, list[StyleRecord]] = {}
        for s in self._catalog.styles:
            self._by_region.setdefault(s.region_id, []).append(s)
        self._by_canonical = {canonical_name(s.name): s for s in self._catalog.styles}

    def complete(self, prompt: str) -> str:
        fields = dict(_HEADER_RE.findall(prompt))
        task = fields.get("Task")
        if task == "listing":
            return self._listing(fields["Region"], int(fields["Repetition"]))
        if task == "summary":
            return self._summary(fields["Style"], int(fields["Attempt"]))
        if task in ("century", "region", "architect"):
            return self._control(task, fields)
        raise ClientError(f"fixture client cannot answer prompt: {prompt.splitlines()[0]!r}")

    # -- listing ------------------------------------------------------------

    def _fake_name(self, index: int) -> str:
        i = (index + self._seed * 131) % (
            len(_FAKE_ADJ) * len(_FAKE_NOUN) * len(_FAKE_SUFFIX)
        )
        adj = _FAKE_ADJ[i % len(_FAKE_ADJ)]
        noun = _FAKE_NOUN[(i // len(_FAKE_ADJ)) % len(_FAKE_NOUN)]
        suffix = _FAKE_SUFFIX[(i // (len(_FAKE_ADJ) * len(_FAKE_NOUN))) % len(_FAKE_SUFFIX)]
        return f"{adj.title()} {noun.title()} {suffix.title()}"

    def _listing(self, region_id: str, repetition: int) -> str:
        if region_id in self._fail_regions:
            raise ClientError(f"injected failure for region {region_id!r}")
        names = [s.name for s in self._by_region.get(region_id, [])][:LISTING_SIZE]
        # Disjoint index blocks per (region, repetition) keep every invented
        # name a one-off as long as repetitions stay below 50.
        ordinal = self._region_order.get(region_id, len(self._region_order)) + repetition * (
            len(self._region_order) + 1
        )
        base = ordinal * LISTING_SIZE
        j = 0
        while len(names) < LISTING_SIZE:
            fake = self._fake_name(base + j)
            j += 1
            if canonical_name(fake) not in self._by_canonical:
                names.append(fake)
        return "\n".join(f"{i + 1}. {name}" for i, name in enumerate(names))

    # -- summary ------------------------------------------------------------

    def _summary(self, display_name: str, attempt: int) -> str:
        canon = canonical_name(display_name)
        record = self._by_canonical.get(canon)
        if record is None:
            raise ClientError(f"fixture knows no style named {display_name!r}")
        if attempt <= self._malformed.get(canon, 0):
            return '{"name": "' + record.name  # truncated on purpose
        return json.dumps(
            {
                "name": record.name,
                "region_id": record.region_id,
                "period": {"start": record.period.start, "end": record.period.end},
                "characteristics": list(record.characteristics),
                "architects": list(record.architects),
                "origin": {"lat": record.origin.lat, "lon": record.origin.lon},
                "summary": record.summary,
            },
            sort_keys=True,
        )

    # -- control questions ----------------------------------------------------

    def _control(self, task: str, fields: dict[str, str]) -> str:
        record = self._by_canonical.get(canonical_name(fields["Style"]))
        if record is None:
            raise ClientError(f"fixture knows no style named {fields['Style']!r}")
        if task == "century":
            year = record.period.start
            if canonical_name(record.name) in self._wrong_century:
                year = year + 100 if year > 0 else year - 100
            return f"It begins in the {century_label(year)}."
        if task == "region":
            return self._catalog.region_by_id(record.region_id).display_name
        return record.name
