"""Song data model, file ingestion, and deterministic lyric tokenization."""

from __future__ import annotations

import csv
import hashlib
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

COHORTS = ("popular", "other")

# strips any run of non-word characters (plus underscore) at a token edge;
# interior apostrophes and hyphens survive
_EDGE = re.compile(r"^[\W_]+|[\W_]+$")


class CorpusError(Exception):
    pass


class IngestError(CorpusError):
    """File-level ingestion failure (unreadable file, malformed header)."""


class RecordError(CorpusError):
    """Record-level validation failure; collected into the reject report."""


class EmptySelectionError(CorpusError):
    """A cohort/year filter matched no songs."""


@dataclass(frozen=True)
class SongRecord:
    id: str
    title: str
    artist: str
    year: int
    duration_seconds: Optional[float]
    cohort: str
    lyrics: str


@dataclass(frozen=True)
class TokenizedLyric:
    song_id: str
    lines: tuple[tuple[str, ...], ...]

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(t for line in self.lines for t in line)


@dataclass(frozen=True)
class IngestConfig:
    year_min: int = 1900
    year_max: int = 2100
    max_reject_fraction: float = 0.5


@dataclass(frozen=True)
class TokenizeConfig:
    drop_annotations: bool = True
    annotation_pattern: str = r"^\[[^\[\]]*\]$"

    def digest_fields(self) -> dict:
        return {"drop_annotations": self.drop_annotations, "annotation_pattern": self.annotation_pattern}


@dataclass(frozen=True)
class Reject:
    where: str  # record id if known, else "line:<n>"
    reason: str


@dataclass(frozen=True)
class Corpus:
    records: tuple[SongRecord, ...]
    tokenized: tuple[TokenizedLyric, ...]
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if len(self.records) != len(self.tokenized):
            raise CorpusError("records and tokenized collections are misaligned")
        for rec, tok in zip(self.records, self.tokenized):
            if rec.id != tok.song_id:
                raise CorpusError(f"tokenized lyric {tok.song_id!r} does not match record {rec.id!r}")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[tuple[SongRecord, TokenizedLyric]]:
        return iter(zip(self.records, self.tokenized))


@dataclass(frozen=True)
class IngestResult:
    corpus: Corpus
    rejects: tuple[Reject, ...]
    total_rows: int

    @property
    def quality_ok(self) -> bool:
        """False when the reject fraction exceeded the configured threshold."""
        if self.total_rows == 0:
            return False
        frac = len(self.rejects) / self.total_rows
        return frac <= self.corpus.provenance.get("max_reject_fraction", 0.5)


def tokenize(record: SongRecord, config: TokenizeConfig = TokenizeConfig()) -> TokenizedLyric:
    """Normalize and split lyrics into lines of lowercase word tokens.

    NFC-normalizes, lowercases, splits on newlines then whitespace, strips
    edge punctuation (interior apostrophes and hyphens kept), drops empty
    lines and, by default, section-annotation lines like "[Chorus]".
    """
    text = unicodedata.normalize("NFC", record.lyrics).lower()
    annotation = re.compile(config.annotation_pattern) if config.drop_annotations else None
    lines: list[tuple[str, ...]] = []
    for raw_line in text.split("\n"):
        stripped = raw_line.strip()
        if not stripped:
            continue
        if annotation is not None and annotation.match(stripped):
            continue
        toks = tuple(t for t in (_EDGE.sub("", w) for w in stripped.split()) if t)
        if toks:
            lines.append(toks)
    if not lines:
        raise RecordError(f"record {record.id!r}: lyrics tokenize to zero tokens")
    return TokenizedLyric(song_id=record.id, lines=tuple(lines))


def _validate_record(raw: dict, config: IngestConfig, where: str) -> SongRecord:
    for key in ("id", "title", "artist", "year", "cohort", "lyrics"):
        if key not in raw or raw[key] is None:
            raise RecordError(f"{where}: missing required field {key!r}")
    rid = str(raw["id"])
    try:
        year = int(raw["year"])
    except (TypeError, ValueError):
        raise RecordError(f"{where}: year {raw['year']!r} is not an integer")
    if not (config.year_min <= year <= config.year_max):
        raise RecordError(f"{where}: year {year} outside [{config.year_min}, {config.year_max}]")
    duration = raw.get("duration_seconds")
    if duration is not None and duration != "":
        try:
            duration = float(duration)
        except (TypeError, ValueError):
            raise RecordError(f"{where}: duration_seconds {raw['duration_seconds']!r} is not a number")
        if duration <= 0:
            raise RecordError(f"{where}: duration_seconds must be > 0")
    else:
        duration = None
    cohort = str(raw["cohort"])
    if cohort not in COHORTS:
        raise RecordError(f"{where}: cohort {cohort!r} not in {COHORTS}")
    lyrics = str(raw["lyrics"])
    if not lyrics.strip():
        raise RecordError(f"{where}: lyrics empty after trimming")
    return SongRecord(
        id=rid,
        title=str(raw["title"]),
        artist=str(raw["artist"]),
        year=year,
        duration_seconds=duration,
        cohort=cohort,
        lyrics=lyrics,
    )


def _iter_jsonl(path: str) -> Iterator[tuple[str, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                yield f"line:{line_no}", {"__parse_error__": str(exc)}
                continue
            if not isinstance(raw, dict):
                yield f"line:{line_no}", {"__parse_error__": "row is not a JSON object"}
                continue
            yield f"line:{line_no}", raw


_CSV_COLUMNS = {"id", "title", "artist", "year", "duration_seconds", "cohort", "lyrics"}


def _iter_csv(path: str) -> Iterator[tuple[str, dict]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not _CSV_COLUMNS.issubset(set(reader.fieldnames)):
            raise IngestError(f"{path}: malformed CSV header, need columns {sorted(_CSV_COLUMNS)}")
        for line_no, raw in enumerate(reader, start=2):
            if raw.get("lyrics"):
                # CSV carries newlines escaped as the two-character sequence \n
                raw = dict(raw, lyrics=raw["lyrics"].replace("\\n", "\n"))
            yield f"line:{line_no}", raw


def ingest(
    path: str,
    format: str = "jsonl",
    config: IngestConfig = IngestConfig(),
    tokenize_config: TokenizeConfig = TokenizeConfig(),
) -> IngestResult:
    """Read a song dataset from disk, validate, and tokenize every record.

    Invalid records are collected into the reject report, never silently
    dropped. Ingestion order is preserved.
    """
    if format == "jsonl":
        rows = _iter_jsonl(path)
    elif format == "csv":
        rows = _iter_csv(path)
    else:
        raise IngestError(f"unknown format {format!r}")

    records: list[SongRecord] = []
    tokenized: list[TokenizedLyric] = []
    rejects: list[Reject] = []
    seen_ids: set[str] = set()
    total = 0
    try:
        for where, raw in rows:
            total += 1
            if "__parse_error__" in raw:
                rejects.append(Reject(where, raw["__parse_error__"]))
                continue
            try:
                rec = _validate_record(raw, config, where)
                if rec.id in seen_ids:
                    raise RecordError(f"{where}: duplicate id {rec.id!r}")
                tok = tokenize(rec, tokenize_config)
            except RecordError as exc:
                rejects.append(Reject(str(raw.get("id", where)), str(exc)))
                continue
            seen_ids.add(rec.id)
            records.append(rec)
            tokenized.append(tok)
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc

    digest_src = json.dumps(
        {
            "year_min": config.year_min,
            "year_max": config.year_max,
            "max_reject_fraction": config.max_reject_fraction,
            **tokenize_config.digest_fields(),
        },
        sort_keys=True,
    )
    provenance = {
        "source": path,
        "format": format,
        "config_digest": hashlib.sha256(digest_src.encode()).hexdigest()[:16],
        "max_reject_fraction": config.max_reject_fraction,
    }
    corpus = Corpus(records=tuple(records), tokenized=tuple(tokenized), provenance=provenance)
    return IngestResult(corpus=corpus, rejects=tuple(rejects), total_rows=total)


def token_counts(
    corpus: Corpus,
    year: Optional[int] = None,
    cohort: Optional[str] = None,
    where: Optional[Callable[[SongRecord], bool]] = None,
) -> Counter:
    """Exact token multiset counts over the filtered songs."""
    counts: Counter = Counter()
    matched = False
    for rec, tok in corpus:
        if year is not None and rec.year != year:
            continue
        if cohort is not None and rec.cohort != cohort:
            continue
        if where is not None and not where(rec):
            continue
        matched = True
        for line in tok.lines:
            counts.update(line)
    if not matched:
        raise EmptySelectionError(f"no songs match year={year} cohort={cohort}")
    return counts


# ---------------------------------------------------------------------------
# cache serialization (versioned JSONL: one header line, then one song per line)

CACHE_VERSION = 1


def save_cache(result_or_corpus, path: str) -> None:
    corpus = result_or_corpus.corpus if isinstance(result_or_corpus, IngestResult) else result_or_corpus
    with open(path, "w", encoding="utf-8") as fh:
        header = {"cache_version": CACHE_VERSION, "provenance": corpus.provenance}
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for rec, tok in corpus:
            row = {
                "id": rec.id,
                "title": rec.title,
                "artist": rec.artist,
                "year": rec.year,
                "duration_seconds": rec.duration_seconds,
                "cohort": rec.cohort,
                "lyrics": rec.lyrics,
                "lines": [list(line) for line in tok.lines],
            }
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def load_cache(path: str) -> Corpus:
    records: list[SongRecord] = []
    tokenized: list[TokenizedLyric] = []
    with open(path, "r", encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"{path}: not a corpus cache: {exc}") from exc
        if header.get("cache_version") != CACHE_VERSION:
            raise IngestError(f"{path}: unsupported cache version {header.get('cache_version')!r}")
        for line in fh:
            row = json.loads(line)
            records.append(
                SongRecord(
                    id=row["id"],
                    title=row["title"],
                    artist=row["artist"],
                    year=row["year"],
                    duration_seconds=row["duration_seconds"],
                    cohort=row["cohort"],
                    lyrics=row["lyrics"],
                )
            )
            tokenized.append(
                TokenizedLyric(song_id=row["id"], lines=tuple(tuple(line) for line in row["lines"]))
            )
    return Corpus(records=tuple(records), tokenized=tuple(tokenized), provenance=header.get("provenance", {}))


def write_reject_report(rejects: Iterable[Reject], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rej in rejects:
            key = "line_no" if rej.where.startswith("line:") else "id"
            value = rej.where.split(":", 1)[1] if key == "line_no" else rej.where
            fh.write(json.dumps({key: value, "reason": rej.reason}, sort_keys=True) + "\n")
