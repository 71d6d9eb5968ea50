#!/usr/bin/env python3
"""Generate a small demo corpus and build an index for it.

Writes demo/corpus/*.ndjson (eight categories of parametric doodles),
demo/embeddings.txt, and demo/index.bin, then prints the serve command.
Everything is seeded, so repeated runs produce identical artifacts.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sketchshift.cli import main as cli_main

SKETCHES_PER_CATEGORY = 40
THEMES = {
    "furniture": ["bench", "chair", "couch", "table"],
    "water": ["boat", "ship"],
    "structure": ["bridge", "fence"],
}


def jitter(rng, pts, amount=6):
    return [
        (int(np.clip(x + rng.integers(-amount, amount + 1), 0, 255)),
         int(np.clip(y + rng.integers(-amount, amount + 1), 0, 255)))
        for x, y in pts
    ]


def polyline(*pts):
    return [[p[0] for p in pts], [p[1] for p in pts]]


def draw_chair(rng):
    back = jitter(rng, [(60, 30), (60, 150)])
    seat = jitter(rng, [(60, 150), (190, 150)])
    front_leg = jitter(rng, [(185, 150), (185, 230)])
    rear_leg = jitter(rng, [(65, 150), (65, 230)])
    return [polyline(*s) for s in (back, seat, front_leg, rear_leg)]


def draw_table(rng):
    top = jitter(rng, [(30, 90), (225, 90)])
    left = jitter(rng, [(45, 90), (45, 220)])
    right = jitter(rng, [(210, 90), (210, 220)])
    return [polyline(*s) for s in (top, left, right)]


def draw_bench(rng):
    seat = jitter(rng, [(20, 160), (235, 160)])
    left = jitter(rng, [(40, 160), (40, 215)])
    right = jitter(rng, [(215, 160), (215, 215)])
    rail = jitter(rng, [(20, 130), (235, 130)])
    return [polyline(*s) for s in (seat, rail, left, right)]


def draw_couch(rng):
    base = jitter(rng, [(30, 190), (225, 190)])
    back = jitter(rng, [(30, 100), (225, 100)])
    left_arm = jitter(rng, [(30, 100), (30, 190)])
    right_arm = jitter(rng, [(225, 100), (225, 190)])
    cushion = jitter(rng, [(127, 100), (127, 190)])
    return [polyline(*s) for s in (base, back, left_arm, right_arm, cushion)]


def draw_boat(rng):
    hull = jitter(rng, [(40, 170), (70, 210), (185, 210), (215, 170)])
    deck = jitter(rng, [(40, 170), (215, 170)])
    mast = jitter(rng, [(127, 170), (127, 80)])
    return [polyline(*s) for s in (hull, deck, mast)]


def draw_ship(rng):
    hull = jitter(rng, [(20, 160), (55, 215), (200, 215), (235, 160)])
    deck = jitter(rng, [(20, 160), (235, 160)])
    fore = jitter(rng, [(85, 160), (85, 70)])
    aft = jitter(rng, [(170, 160), (170, 90)])
    return [polyline(*s) for s in (hull, deck, fore, aft)]


def draw_bridge(rng):
    deck = jitter(rng, [(10, 150), (245, 150)])
    arch = jitter(rng, [(40, 150), (90, 90), (165, 90), (215, 150)])
    pier1 = jitter(rng, [(70, 150), (70, 220)])
    pier2 = jitter(rng, [(185, 150), (185, 220)])
    return [polyline(*s) for s in (deck, arch, pier1, pier2)]


def draw_fence(rng):
    strokes = []
    for x in (40, 90, 140, 190):
        strokes.append(polyline(*jitter(rng, [(x, 90), (x, 210)])))
    strokes.append(polyline(*jitter(rng, [(25, 120), (230, 120)])))
    strokes.append(polyline(*jitter(rng, [(25, 180), (230, 180)])))
    return strokes


DRAWERS = {
    "chair": draw_chair, "table": draw_table, "bench": draw_bench,
    "couch": draw_couch, "boat": draw_boat, "ship": draw_ship,
    "bridge": draw_bridge, "fence": draw_fence,
}


def write_corpus(corpus_dir: Path, rng) -> list[str]:
    corpus_dir.mkdir(parents=True, exist_ok=True)
    for label, drawer in sorted(DRAWERS.items()):
        lines = [
            json.dumps({"word": label, "drawing": drawer(rng)})
            for _ in range(SKETCHES_PER_CATEGORY)
        ]
        (corpus_dir / f"{label}.ndjson").write_text("\n".join(lines) + "\n")
    return sorted(DRAWERS)


def write_embeddings(path: Path, labels: list[str]) -> None:
    dim = 16
    theme_axis = {theme: i for i, theme in enumerate(THEMES)}
    rows = []
    for label in labels:
        theme = next(t for t, members in THEMES.items() if label in members)
        vec = np.zeros(dim)
        vec[theme_axis[theme]] = 0.8
        vec[len(THEMES) + labels.index(label)] = 0.6
        rows.append((label, vec / np.linalg.norm(vec)))
    with open(path, "w") as fh:
        fh.write(f"{len(rows)} {dim}\n")
        for label, vec in rows:
            fh.write(label + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")


def main() -> int:
    root = Path(__file__).resolve().parents[1] / "demo"
    rng = np.random.default_rng(20)
    labels = write_corpus(root / "corpus", rng)
    write_embeddings(root / "embeddings.txt", labels)
    code = cli_main([
        "build-index",
        "--corpus", str(root / "corpus"),
        "--embeddings", str(root / "embeddings.txt"),
        "--out", str(root / "index.bin"),
        "--k", "10", "--seed", "1",
    ])
    if code != 0:
        return code
    print()
    print("demo ready; start the service with:")
    print(f"  sketchshift serve --index {root / 'index.bin'} "
          f"--embeddings {root / 'embeddings.txt'} "
          f"--corpus {root / 'corpus'} --port 8075")
    return 0


if __name__ == "__main__":
    sys.exit(main())
