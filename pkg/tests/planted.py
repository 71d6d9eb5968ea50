"""Synthetic corpus with planted cluster geometry.

Builds a 12-category corpus (200 sketches each) plus a precomputed-vector
file and a label embedding file whose geometry is fully controlled:

* Categories form 3 groups of 4. Within a group every category has one
  nearest partner, one mid partner and one far partner, and the pairing is
  symmetric (if B is A's nearest partner then A is B's).
* Each category's 200 vectors sit in 10 tight blobs of 20. Blob anchors are
  unit vectors of the form alpha*u_cat + sum of per-pair circle components,
  which makes the distance from any query blob to another category's blobs
  a fixed multiset: 7 near-partner blobs, all 10 mid-partner blobs and 3
  far-partner blobs land inside any query's 20 nearest cross-category
  clusters, in that distance order.
* Label embeddings carry cosine similarities tuned to the visual bands so
  the agreement filter passes inside each novelty bucket.

The generator asserts the realized geometry before writing anything, so a
fixture on disk is a verified one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

LABELS = [
    "bench", "chair", "couch", "table",
    "bridge", "fence", "gate", "ladder",
    "boat", "canoe", "raft", "ship",
]

K_BLOBS = 10
MEMBERS_PER_BLOB = 20
SKETCHES_PER_CATEGORY = K_BLOBS * MEMBERS_PER_BLOB
VECTOR_DIM = 256
EMBED_DIM = 16

# anchor dots within a group (near / mid / far partner)
G_N, G_M, G_F = 0.8, 0.45, 0.3
ALPHA2 = 0.55
BETA2 = {"n": 0.375, "m": 0.025, "f": 0.05}

# label-embedding cosines per role, tuned to the visual similarity bands
COS_N, COS_M, COS_F = 0.85, 0.105, 0.02

# within-group pair roles, by category offset 0..3
PAIR_ROLES = {(0, 1): "n", (2, 3): "n", (0, 2): "m", (1, 3): "m", (0, 3): "f", (1, 2): "f"}

MEMBER_NOISE = 0.002


@dataclass
class PlantedFixture:
    root: Path
    corpus_dir: Path
    vectors_path: Path
    embeddings_path: Path
    labels: list[str]
    # per label: the expected target category at each novelty level
    expected: dict[str, dict[str, str]]


def partner_map() -> dict[str, dict[str, str]]:
    novelty_of_role = {"n": "low", "m": "intermediate", "f": "high"}
    expected: dict[str, dict[str, str]] = {}
    for g in range(3):
        for (i, j), role in PAIR_ROLES.items():
            a, b = LABELS[g * 4 + i], LABELS[g * 4 + j]
            expected.setdefault(a, {})[novelty_of_role[role]] = b
            expected.setdefault(b, {})[novelty_of_role[role]] = a
    return expected


def _group_anchors() -> np.ndarray:
    """Four unit vectors with the within-group dot pattern."""
    gram = np.array([
        [1.0, G_N, G_M, G_F],
        [G_N, 1.0, G_F, G_M],
        [G_M, G_F, 1.0, G_N],
        [G_F, G_M, G_N, 1.0],
    ])
    w, u = np.linalg.eigh(gram)
    assert w.min() > 1e-9, "anchor gram must be positive definite"
    return u * np.sqrt(w)


def blob_anchors() -> np.ndarray:
    """(120, VECTOR_DIM) unit vectors with the planted tier structure."""
    anchors = np.zeros((len(LABELS) * K_BLOBS, VECTOR_DIM))
    offset = 0
    for g in range(3):
        cat_dirs = _group_anchors()
        anchor_dims = slice(offset, offset + 4)
        pair_dims = {}
        p = offset + 4
        for pair in PAIR_ROLES:
            pair_dims[pair] = (p, p + 1)
            p += 2
        for ci in range(4):
            cat = g * 4 + ci
            for a in range(K_BLOBS):
                v = np.zeros(VECTOR_DIM)
                v[anchor_dims] = np.sqrt(ALPHA2) * cat_dirs[ci]
                phi = 2.0 * np.pi * a / K_BLOBS
                for pair, role in PAIR_ROLES.items():
                    if ci in pair:
                        d1, d2 = pair_dims[pair]
                        b = np.sqrt(BETA2[role])
                        v[d1] += b * np.cos(phi)
                        v[d2] += b * np.sin(phi)
                anchors[cat * K_BLOBS + a] = v
        offset += 16
    norms = np.linalg.norm(anchors, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-9)
    return anchors


def _verify_tiers(anchors: np.ndarray, expected: dict[str, dict[str, str]]) -> None:
    """Every blob, used as a query viewpoint, must see the designed top-20."""
    dots = np.clip(anchors @ anchors.T, -1.0, 1.0)
    dist = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * dots))
    for cat, label in enumerate(LABELS):
        near = LABELS.index(expected[label]["low"])
        mid = LABELS.index(expected[label]["intermediate"])
        far = LABELS.index(expected[label]["high"])
        for a in range(K_BLOBS):
            row = dist[cat * K_BLOBS + a].copy()
            row[cat * K_BLOBS:(cat + 1) * K_BLOBS] = np.inf
            order = np.argsort(row)[:20]
            counts = np.bincount(order // K_BLOBS, minlength=len(LABELS))
            assert counts[near] == 7 and counts[mid] == 10 and counts[far] == 3, (
                label, a, counts)
            cutoff = row[order].max()
            rest = np.delete(row, order)
            assert rest.min() > cutoff + 0.015, "tier margin too small"


def _embedding_vectors() -> np.ndarray:
    gram = np.zeros((len(LABELS), len(LABELS)))
    np.fill_diagonal(gram, 1.0)
    value = {"n": COS_N, "m": COS_M, "f": COS_F}
    for g in range(3):
        for (i, j), role in PAIR_ROLES.items():
            gram[g * 4 + i, g * 4 + j] = gram[g * 4 + j, g * 4 + i] = value[role]
    w, u = np.linalg.eigh(gram)
    assert w.min() > 1e-9, "embedding gram must be positive definite"
    vecs = u * np.sqrt(w)
    out = np.zeros((len(LABELS), EMBED_DIM))
    out[:, :vecs.shape[1]] = vecs
    realized = out @ out.T
    assert np.allclose(realized, gram, atol=1e-9)
    return out


def _random_drawing(rng: np.random.Generator) -> list[list[list[int]]]:
    """A small valid polyline sketch; geometry is arbitrary but never degenerate."""
    drawing = []
    for _ in range(int(rng.integers(1, 4))):
        n = int(rng.integers(2, 8))
        xs = rng.integers(0, 256, size=n).tolist()
        ys = rng.integers(0, 256, size=n).tolist()
        drawing.append([xs, ys])
    xs0 = drawing[0][0]
    if len({(x, y) for s in drawing for x, y in zip(s[0], s[1])}) < 2:
        xs0[0] = (xs0[0] + 64) % 256  # force extent
    return drawing


def build_planted_fixture(root: Path, seed: int = 7) -> PlantedFixture:
    root = Path(root)
    corpus_dir = root / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    expected = partner_map()

    anchors = blob_anchors()
    _verify_tiers(anchors, expected)

    vector_rows: list[tuple[str, np.ndarray]] = []
    for cat, label in enumerate(LABELS):
        lines = []
        for i in range(SKETCHES_PER_CATEGORY):
            lines.append(json.dumps({"word": label, "drawing": _random_drawing(rng)}))
            blob = i // MEMBERS_PER_BLOB
            vec = anchors[cat * K_BLOBS + blob] + rng.normal(
                0.0, MEMBER_NOISE / np.sqrt(VECTOR_DIM), VECTOR_DIM)
            vec = vec / np.linalg.norm(vec)
            vector_rows.append((f"{label}:{i}", vec))
        (corpus_dir / f"{label}.ndjson").write_text(
            "\n".join(lines) + "\n", encoding="utf-8")

    vectors_path = root / "vectors.txt"
    with open(vectors_path, "w", encoding="utf-8") as fh:
        fh.write(f"{VECTOR_DIM} {len(vector_rows)}\n")
        for sid, vec in vector_rows:
            fh.write(sid + " " + " ".join(f"{v:.9f}" for v in vec) + "\n")

    embeddings_path = root / "embeddings.txt"
    emb = _embedding_vectors()
    with open(embeddings_path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(LABELS)} {EMBED_DIM}\n")
        for label, vec in zip(LABELS, emb):
            fh.write(label + " " + " ".join(repr(float(v)) for v in vec) + "\n")

    return PlantedFixture(
        root=root,
        corpus_dir=corpus_dir,
        vectors_path=vectors_path,
        embeddings_path=embeddings_path,
        labels=list(LABELS),
        expected=expected,
    )
