"""Visual feature vectors for sketches.

Two sources are supported behind one contract: a deterministic built-in
extractor over normalized stroke geometry, and an importer for vectors
computed elsewhere (for example by a neural encoder) in a plain text
interchange format. All vectors are unit-normalized so Euclidean distances
are comparable regardless of origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import CorpusManifest
from .errors import DimensionMismatch, FormatError, UnknownSketchRef
from .sketch import CANVAS_MAX, Sketch, normalize

GRID = 6
DIRECTION_BINS = 8
BUILTIN_DIM = GRID * GRID + DIRECTION_BINS + 4  # 48

_CELL = (CANVAS_MAX + 1) / GRID

MAX_STROKES = 16.0
MAX_PATH_LENGTH = 2048.0


@dataclass(frozen=True)
class ExtractorSpec:
    kind: str  # "builtin" or "imported"
    dimension: int
    version: str


BUILTIN_SPEC = ExtractorSpec(kind="builtin", dimension=BUILTIN_DIM, version="builtin-1")


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    sketch_ref: str


def extract(sketch: Sketch) -> FeatureVector:
    """Compute the built-in 48-dim feature vector.

    Layout: 36 dims of ink density over a 6x6 grid of the normalized canvas,
    8 dims of stroke direction histogram (45 degree bins, weighted by segment
    length), then four scalars: stroke count / 16 (capped), path length / 2048
    (capped), bounding box aspect ratio, and endpoint straightness. The result
    is L2-normalized. Normalization of the geometry happens here, so the
    output is invariant to translation and uniform scaling of the input.
    """
    norm = normalize(sketch)
    segments = _segments(norm)

    grid = np.zeros((GRID, GRID))
    dirs = np.zeros(DIRECTION_BINS)
    path_length = 0.0
    for (x0, y0), (x1, y1) in segments:
        length = math.hypot(x1 - x0, y1 - y0)
        if length == 0.0:
            continue
        path_length += length
        _spread_over_cells(grid, x0, y0, x1, y1, length)
        angle = math.degrees(math.atan2(y1 - y0, x1 - x0)) % 360.0
        dirs[int(angle // 45.0) % DIRECTION_BINS] += length

    pts = norm.points()
    w = max(p.x for p in pts) - min(p.x for p in pts)
    h = max(p.y for p in pts) - min(p.y for p in pts)
    aspect = min(w, h) / max(w, h)

    first = norm.strokes[0].points[0]
    last = norm.strokes[-1].points[-1]
    span = math.hypot(last.x - first.x, last.y - first.y)
    straightness = span / path_length if path_length > 0 else 0.0

    scalars = np.array([
        min(len(norm.strokes) / MAX_STROKES, 1.0),
        min(path_length / MAX_PATH_LENGTH, 1.0),
        aspect,
        straightness,
    ])
    raw = np.concatenate([grid.ravel(), dirs, scalars])
    # the stroke-count scalar is always positive, so the norm never vanishes
    values = raw / np.linalg.norm(raw)
    return FeatureVector(values=values, sketch_ref=sketch.source_id)


def _segments(sketch: Sketch):
    for stroke in sketch.strokes:
        pts = stroke.points
        for a, b in zip(pts, pts[1:]):
            yield (float(a.x), float(a.y)), (float(b.x), float(b.y))


def _spread_over_cells(grid, x0, y0, x1, y1, length):
    """Split a segment's length exactly among the grid cells it crosses."""
    ts = {0.0, 1.0}
    for k in range(1, GRID):
        line = k * _CELL
        if x1 != x0:
            t = (line - x0) / (x1 - x0)
            if 0.0 < t < 1.0:
                ts.add(t)
        if y1 != y0:
            t = (line - y0) / (y1 - y0)
            if 0.0 < t < 1.0:
                ts.add(t)
    cuts = sorted(ts)
    for t0, t1 in zip(cuts, cuts[1:]):
        tm = (t0 + t1) / 2.0
        mx = x0 + tm * (x1 - x0)
        my = y0 + tm * (y1 - y0)
        cx = min(int(mx / _CELL), GRID - 1)
        cy = min(int(my / _CELL), GRID - 1)
        grid[cy, cx] += length * (t1 - t0)


def import_vectors(path, manifest: CorpusManifest) -> dict[str, FeatureVector]:
    """Load precomputed vectors from the text interchange format.

    Format: a header line ``D N`` followed by N lines of
    ``source_id v1 ... vD``. Every source id must name a sketch position
    within the manifest (``label:line``). Vectors are re-normalized to unit
    length on load.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such vector file: {path}")
    counts = manifest.counts()
    out: dict[str, FeatureVector] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise FormatError(f"{path}: expected header 'D N'")
        try:
            dim, n_rows = int(header[0]), int(header[1])
        except ValueError:
            raise FormatError(f"{path}: expected integer header 'D N'") from None
        if dim <= 0 or n_rows <= 0:
            raise FormatError(f"{path}: header must declare positive D and N")
        for i in range(n_rows):
            line = fh.readline()
            if not line:
                raise FormatError(f"{path}: declared {n_rows} rows, found {i}")
            fields = line.split()
            if not fields:
                raise FormatError(f"{path}: blank row {i + 1}")
            source_id = fields[0]
            if len(fields) - 1 != dim:
                raise DimensionMismatch(
                    f"{path} row {i + 1}: {len(fields) - 1} values, declared D={dim}"
                )
            _check_ref(source_id, counts, path, i + 1)
            try:
                vec = np.array([float(v) for v in fields[1:]], dtype=np.float64)
            except ValueError:
                raise FormatError(f"{path} row {i + 1}: non-numeric value") from None
            if not np.all(np.isfinite(vec)):
                raise FormatError(f"{path} row {i + 1}: non-finite value")
            norm = np.linalg.norm(vec)
            if norm == 0.0:
                raise FormatError(f"{path} row {i + 1}: zero vector")
            out[source_id] = FeatureVector(values=vec / norm, sketch_ref=source_id)
    return out


def _check_ref(source_id, counts, path, row):
    label, _, idx = source_id.rpartition(":")
    if not label or label not in counts or not idx.isdigit():
        raise UnknownSketchRef(f"{path} row {row}: unknown sketch '{source_id}'")
    if int(idx) >= counts[label]:
        raise UnknownSketchRef(
            f"{path} row {row}: '{source_id}' beyond {counts[label]} sketches"
        )
