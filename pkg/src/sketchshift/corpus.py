"""Corpus ingestion.

A corpus is a directory of ``<label>.ndjson`` files, one JSON object per
line with fields ``word`` (the category name) and ``drawing`` (a list of
strokes, each stroke two parallel integer arrays of x and y coordinates on
the 0..255 canvas). Malformed lines are skipped and counted; a file where
more than half the lines fail to parse is rejected outright since that
almost always means the wrong file was supplied.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyCorpus, FormatError
from .sketch import Sketch, normalize_label, sketch_from_drawing


@dataclass(frozen=True)
class CategoryEntry:
    label: str
    path: Path
    count: int


@dataclass(frozen=True)
class CorpusManifest:
    categories: tuple[CategoryEntry, ...]
    total_sketches: int

    def labels(self) -> list[str]:
        return [c.label for c in self.categories]

    def counts(self) -> dict[str, int]:
        return {c.label: c.count for c in self.categories}


@dataclass
class CategoryLoad:
    """Result of reading one category file, with per-line accounting."""

    sketches: list[Sketch]
    parsed: int
    skipped: int
    total_lines: int


def parse_record(text: str, label: str, source_id: str,
                 require_extent: bool = True) -> Sketch:
    """Parse one corpus line into a Sketch.

    Raises FormatError for anything that is not a usable record: bad JSON,
    missing fields, ragged stroke arrays, non-integer coordinates, and (for
    corpus ingestion) fewer than two points or zero-extent geometry. Query
    paths pass require_extent=False so degenerate drawings surface later as
    DegenerateSketch rather than as a file-format problem.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "word" not in obj or "drawing" not in obj:
        raise FormatError("record must be an object with 'word' and 'drawing'")
    if not isinstance(obj["word"], str) or not obj["word"].strip():
        raise FormatError("'word' must be a non-empty string")
    drawing = obj["drawing"]
    if not isinstance(drawing, list) or not drawing:
        raise FormatError("'drawing' must be a non-empty list of strokes")
    cleaned = []
    for stroke in drawing:
        if not isinstance(stroke, list) or len(stroke) != 2:
            raise FormatError("stroke must be a pair of coordinate arrays")
        xs, ys = stroke
        if not isinstance(xs, list) or not isinstance(ys, list):
            raise FormatError("stroke arrays must be lists")
        if len(xs) != len(ys) or not xs:
            raise FormatError("stroke arrays must be parallel and non-empty")
        for v in xs + ys:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise FormatError("coordinates must be numbers")
            if isinstance(v, float) and not v.is_integer():
                raise FormatError("coordinates must be integers")
        cleaned.append([[int(v) for v in xs], [int(v) for v in ys]])
    sketch = sketch_from_drawing(label, cleaned, source_id=source_id)
    if require_extent:
        if sketch.point_count() < 2:
            raise FormatError("sketch needs at least two points")
        pts = sketch.points()
        if all(p == pts[0] for p in pts):
            raise FormatError("sketch has zero extent")
    return sketch


def read_category(path, label: str, limit: int | None = None) -> CategoryLoad:
    """Read up to ``limit`` valid sketches from one category file.

    Skipped + parsed always equals the number of lines inspected. Raises
    FormatError when the file is empty or more than half the inspected
    lines are malformed.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such category file: {path}")
    label = normalize_label(label)
    sketches: list[Sketch] = []
    parsed = skipped = total = 0
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        for lineno, line in enumerate(fh):
            if limit is not None and parsed >= limit:
                break
            total += 1
            stripped = line.strip()
            if not stripped:
                skipped += 1
                continue
            try:
                sketches.append(parse_record(stripped, label, f"{label}:{lineno}"))
                parsed += 1
            except FormatError:
                skipped += 1
    if total == 0:
        raise FormatError(f"{path}: empty category file")
    if skipped * 2 > total:
        raise FormatError(
            f"{path}: {skipped} of {total} lines malformed; wrong file?"
        )
    return CategoryLoad(sketches=sketches, parsed=parsed, skipped=skipped, total_lines=total)


def load_category(path, label: str, limit: int | None = None) -> list[Sketch]:
    return read_category(path, label, limit).sketches


def scan_corpus(directory) -> CorpusManifest:
    """Build a manifest of category files, ordered by label.

    The per-category count is the number of non-empty lines; validity is
    checked later at load time.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"no such corpus directory: {directory}")
    entries = []
    for path in sorted(directory.glob("*.ndjson")):
        label = normalize_label(path.stem)
        count = 0
        with open(path, "r", encoding="utf-8", errors="replace") as fh:
            for line in fh:
                if line.strip():
                    count += 1
        if count > 0:
            entries.append(CategoryEntry(label=label, path=path, count=count))
    if not entries:
        raise EmptyCorpus(f"no category files in {directory}")
    entries.sort(key=lambda e: e.label)
    return CorpusManifest(
        categories=tuple(entries),
        total_sketches=sum(e.count for e in entries),
    )


@dataclass
class SketchCorpus:
    """All loaded sketches, addressable by source id and by label."""

    manifest: CorpusManifest
    by_label: dict[str, list[Sketch]] = field(default_factory=dict)
    by_id: dict[str, Sketch] = field(default_factory=dict)

    @classmethod
    def load(cls, directory, limit_per_category: int | None = None) -> "SketchCorpus":
        manifest = scan_corpus(directory)
        corpus = cls(manifest=manifest)
        for entry in manifest.categories:
            sketches = load_category(entry.path, entry.label, limit_per_category)
            corpus.by_label[entry.label] = sketches
            for s in sketches:
                corpus.by_id[s.source_id] = s
        return corpus
