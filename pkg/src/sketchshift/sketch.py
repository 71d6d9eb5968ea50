"""Sketch data model: strokes on a 0..255 integer canvas.

Two stroke encodings are supported: absolute points (the corpus form) and
delta events (dx, dy, pen flag) relative to the previous pen position.
All types are immutable values and every operation here is a pure function.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

from .errors import DegenerateSketch, EmptyInput, EmptySketch

CANVAS_MAX = 255

_WS = re.compile(r"\s+")


def normalize_label(raw: str) -> str:
    """Lowercase a category name and join internal whitespace with '_'."""
    return _WS.sub("_", raw.strip().lower())


@dataclass(frozen=True)
class Point:
    x: int
    y: int


@dataclass(frozen=True)
class Stroke:
    points: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class DeltaEvent:
    """One pen event; p=1 draws, p=0 moves the pen to a stroke start."""

    dx: int
    dy: int
    p: int


@dataclass(frozen=True)
class Sketch:
    label: str
    strokes: tuple[Stroke, ...]
    source_id: str = ""

    def points(self) -> list[Point]:
        return [p for s in self.strokes for p in s.points]

    def point_count(self) -> int:
        return sum(len(s) for s in self.strokes)


def sketch_from_drawing(label: str, drawing, source_id: str = "") -> Sketch:
    """Build a Sketch from the corpus stroke shape [[xs, ys], ...]."""
    strokes = []
    for xs, ys in drawing:
        strokes.append(Stroke(tuple(Point(int(x), int(y)) for x, y in zip(xs, ys))))
    return Sketch(label=normalize_label(label), strokes=tuple(strokes), source_id=source_id)


def sketch_to_drawing(sketch: Sketch) -> list[list[list[int]]]:
    """Inverse of :func:`sketch_from_drawing`: two parallel arrays per stroke."""
    return [
        [[p.x for p in s.points], [p.y for p in s.points]]
        for s in sketch.strokes
    ]


def to_delta_sequence(sketch: Sketch) -> list[DeltaEvent]:
    """Encode strokes as pen displacements.

    The first event of each stroke carries p=0 (a move), subsequent events
    p=1. Displacements are relative to the previous pen position across
    stroke boundaries; the very first event is relative to (0, 0), which
    makes the encoding self-contained.
    """
    if not sketch.strokes:
        raise EmptySketch("sketch has no strokes")
    events: list[DeltaEvent] = []
    px, py = 0, 0
    for stroke in sketch.strokes:
        for i, pt in enumerate(stroke.points):
            events.append(DeltaEvent(pt.x - px, pt.y - py, 0 if i == 0 else 1))
            px, py = pt.x, pt.y
    return events


def from_delta_sequence(events) -> Sketch:
    """Decode delta events back into absolute stroke geometry.

    Returns an unlabeled sketch. A p=0 event (or the first event regardless
    of its flag) starts a new stroke.
    """
    events = list(events)
    if not events:
        raise EmptyInput("no delta events")
    strokes: list[Stroke] = []
    current: list[Point] = []
    x = y = 0
    for ev in events:
        x += ev.dx
        y += ev.dy
        if ev.p == 0 and current:
            strokes.append(Stroke(tuple(current)))
            current = []
        current.append(Point(x, y))
    strokes.append(Stroke(tuple(current)))
    return Sketch(label="", strokes=tuple(strokes))


def normalize(sketch: Sketch) -> Sketch:
    """Fit a sketch to the canonical canvas.

    Translates and uniformly scales so the bounding box spans [0, 255] on its
    longest side (aspect ratio preserved), centers the short axis on the
    canvas midline, and collapses consecutive duplicate points. Idempotent:
    normalizing twice gives bit-identical geometry.
    """
    if not sketch.strokes:
        raise EmptySketch("sketch has no strokes")
    pts = sketch.points()
    if not pts:
        raise EmptySketch("sketch has no points")
    min_x = min(p.x for p in pts)
    max_x = max(p.x for p in pts)
    min_y = min(p.y for p in pts)
    max_y = max(p.y for p in pts)
    w = max_x - min_x
    h = max_y - min_y
    if w == 0 and h == 0:
        raise DegenerateSketch("all points identical")

    scale = CANVAS_MAX / max(w, h)
    scaled = [
        [(_round_half_up((p.x - min_x) * scale), _round_half_up((p.y - min_y) * scale))
         for p in stroke.points]
        for stroke in sketch.strokes
    ]

    # Center the short axis using the rounded integer extent. Deriving the
    # offset from integers (not the fractional scaled extent) is what makes
    # a second normalize reproduce the same coordinates exactly.
    if w >= h:
        ext = max(y for s in scaled for _, y in s)
        off = (CANVAS_MAX - ext) // 2
        scaled = [[(x, y + off) for x, y in s] for s in scaled]
    else:
        ext = max(x for s in scaled for x, _ in s)
        off = (CANVAS_MAX - ext) // 2
        scaled = [[(x + off, y) for x, y in s] for s in scaled]

    strokes = []
    for s in scaled:
        deduped: list[Point] = []
        for x, y in s:
            if deduped and deduped[-1].x == x and deduped[-1].y == y:
                continue
            deduped.append(Point(x, y))
        strokes.append(Stroke(tuple(deduped)))
    return replace(sketch, strokes=tuple(strokes))


def _round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))
