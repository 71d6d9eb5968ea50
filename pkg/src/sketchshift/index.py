"""The visual index: per-category clusters plus the inter-centroid distance
matrix, with versioned binary persistence.

The matrix is stored fully rectangular; entries that pair two clusters of
the same category are masked out of candidate retrieval rather than omitted
so any (category, slot) pair addresses a row directly.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .clustering import kmeans
from .errors import (
    CorruptIndex,
    DimensionMismatch,
    TooFewPoints,
    UnknownCategory,
    VersionMismatch,
)
from .features import ExtractorSpec, FeatureVector

INDEX_MAGIC = b"CSHIFTIX"
INDEX_VERSION = 1


class ClusterId(NamedTuple):
    category: str
    slot: int


@dataclass
class CategoryClusters:
    label: str
    centroids: np.ndarray        # (k, D)
    member_ids: tuple[str, ...]  # (n,)
    member_vectors: np.ndarray   # (n, D)
    assignment: np.ndarray       # (n,) slot per member
    wcss: np.ndarray             # (k,) per-slot within-cluster sum of squares


@dataclass
class ClusterModel:
    categories: dict[str, CategoryClusters]  # keyed and ordered by label
    k: int

    def labels(self) -> list[str]:
        return list(self.categories.keys())


@dataclass
class DistanceMatrix:
    ids: tuple[ClusterId, ...]
    values: np.ndarray          # (Q, Q) symmetric, zero diagonal
    same_category: np.ndarray   # (Q, Q) bool, True where both clusters share a category

    def index_of(self, cid: ClusterId) -> int:
        return self._lookup[cid]

    def row(self, cid: ClusterId) -> np.ndarray:
        return self.values[self.index_of(cid)]

    def __post_init__(self):
        self._lookup = {cid: i for i, cid in enumerate(self.ids)}


@dataclass
class VisualIndex:
    model: ClusterModel
    distances: DistanceMatrix
    extractor: ExtractorSpec
    seed: int
    version: int = INDEX_VERSION

    @property
    def k(self) -> int:
        return self.model.k

    @property
    def dimension(self) -> int:
        return self.extractor.dimension

    def labels(self) -> list[str]:
        return self.model.labels()


def build_index(
    vectors_by_category: dict[str, list[FeatureVector]],
    k: int = 10,
    seed: int = 1,
    extractor: ExtractorSpec | None = None,
) -> VisualIndex:
    """Cluster every category and assemble the cross-category matrix.

    Categories are processed in sorted label order with the same seed, so the
    result is a pure function of (vectors, k, seed) regardless of how callers
    parallelize ingestion.
    """
    if not vectors_by_category:
        raise ValueError("no categories to index")
    dims = {fv.values.shape[0] for fvs in vectors_by_category.values() for fv in fvs}
    if len(dims) != 1:
        raise DimensionMismatch(f"mixed vector dimensions: {sorted(dims)}")
    dim = dims.pop()
    if extractor is None:
        extractor = ExtractorSpec(kind="imported", dimension=dim, version="imported-1")
    if extractor.dimension != dim:
        raise DimensionMismatch(
            f"extractor declares D={extractor.dimension}, vectors have D={dim}"
        )

    categories: dict[str, CategoryClusters] = {}
    for label in sorted(vectors_by_category):
        fvs = vectors_by_category[label]
        if len(fvs) < k:
            raise TooFewPoints(f"category '{label}' has {len(fvs)} vectors for k={k}")
        X = np.stack([fv.values for fv in fvs])
        result = kmeans(X, k, seed)
        per_slot = np.zeros(k)
        d = np.linalg.norm(X - result.centroids[result.assignment], axis=1)
        np.add.at(per_slot, result.assignment, d * d)
        categories[label] = CategoryClusters(
            label=label,
            centroids=result.centroids,
            member_ids=tuple(fv.sketch_ref for fv in fvs),
            member_vectors=X,
            assignment=result.assignment,
            wcss=per_slot,
        )

    model = ClusterModel(categories=categories, k=k)
    return VisualIndex(
        model=model,
        distances=_distance_matrix(model),
        extractor=extractor,
        seed=seed,
    )


def _distance_matrix(model: ClusterModel) -> DistanceMatrix:
    ids = tuple(
        ClusterId(label, slot)
        for label in model.labels()
        for slot in range(model.k)
    )
    C = np.vstack([model.categories[label].centroids for label in model.labels()])
    q = C.shape[0]
    values = np.zeros((q, q))
    # fill one triangle and mirror so the matrix is symmetric to the bit
    for i in range(q - 1):
        d = np.linalg.norm(C[i + 1:] - C[i], axis=1)
        values[i, i + 1:] = d
        values[i + 1:, i] = d
    cats = np.array([cid.category for cid in ids])
    same = cats[:, None] == cats[None, :]
    return DistanceMatrix(ids=ids, values=values, same_category=same)


def representative_cluster(query: np.ndarray, label: str, model: ClusterModel) -> ClusterId:
    """The cluster of ``label`` whose centroid is L2-nearest to the query.

    Ties resolve to the lowest slot.
    """
    if label not in model.categories:
        raise UnknownCategory(f"'{label}' is not in the index")
    cat = model.categories[label]
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (cat.centroids.shape[1],):
        raise DimensionMismatch(
            f"query has D={query.shape}, index expects D={cat.centroids.shape[1]}"
        )
    d = np.linalg.norm(cat.centroids - query, axis=1)
    return ClusterId(label, int(d.argmin()))


def save_index(index: VisualIndex, path) -> None:
    """Write the index as one binary file: magic, version, JSON header,
    little-endian float64 arrays, trailing CRC32."""
    path = Path(path)
    labels = index.labels()
    header = {
        "assignment": {l: index.model.categories[l].assignment.tolist() for l in labels},
        "categories": labels,
        "dimension": index.dimension,
        "extractor": {
            "dimension": index.extractor.dimension,
            "kind": index.extractor.kind,
            "version": index.extractor.version,
        },
        "k": index.k,
        "members": {l: list(index.model.categories[l].member_ids) for l in labels},
        "seed": index.seed,
        "wcss": {l: index.model.categories[l].wcss.tolist() for l in labels},
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")

    blob = bytearray()
    blob += INDEX_MAGIC
    blob += struct.pack("<II", index.version, len(header_bytes))
    blob += header_bytes
    centroids = np.vstack([index.model.categories[l].centroids for l in labels])
    members = np.vstack([index.model.categories[l].member_vectors for l in labels])
    blob += centroids.astype("<f8").tobytes()
    blob += index.distances.values.astype("<f8").tobytes()
    blob += members.astype("<f8").tobytes()
    blob += struct.pack("<I", zlib.crc32(bytes(blob)))
    path.write_bytes(bytes(blob))


def load_index(path) -> VisualIndex:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such index file: {path}")
    blob = path.read_bytes()
    if len(blob) < len(INDEX_MAGIC) + 12 or blob[: len(INDEX_MAGIC)] != INDEX_MAGIC:
        raise CorruptIndex(f"{path}: not an index file")
    body, trailer = blob[:-4], blob[-4:]
    if zlib.crc32(body) != struct.unpack("<I", trailer)[0]:
        raise CorruptIndex(f"{path}: checksum failure")
    pos = len(INDEX_MAGIC)
    version, hlen = struct.unpack_from("<II", body, pos)
    if version != INDEX_VERSION:
        raise VersionMismatch(f"{path}: format version {version}, expected {INDEX_VERSION}")
    pos += 8
    try:
        header = json.loads(body[pos : pos + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptIndex(f"{path}: bad header ({exc})") from None
    pos += hlen

    labels = header["categories"]
    k = header["k"]
    dim = header["dimension"]
    q = len(labels) * k
    n_members = sum(len(header["members"][l]) for l in labels)
    expected = pos + 8 * (q * dim + q * q + n_members * dim)
    if len(body) != expected:
        raise CorruptIndex(f"{path}: payload size mismatch")

    def take(count):
        nonlocal pos
        arr = np.frombuffer(body, dtype="<f8", count=count, offset=pos).copy()
        pos += 8 * count
        return arr

    centroids = take(q * dim).reshape(q, dim)
    values = take(q * q).reshape(q, q)
    members = take(n_members * dim).reshape(n_members, dim)

    categories: dict[str, CategoryClusters] = {}
    c_off = m_off = 0
    for label in labels:
        ids = header["members"][label]
        n = len(ids)
        categories[label] = CategoryClusters(
            label=label,
            centroids=centroids[c_off : c_off + k],
            member_ids=tuple(ids),
            member_vectors=members[m_off : m_off + n],
            assignment=np.array(header["assignment"][label], dtype=np.int64),
            wcss=np.array(header["wcss"][label], dtype=np.float64),
        )
        c_off += k
        m_off += n

    model = ClusterModel(categories=categories, k=k)
    cluster_ids = tuple(ClusterId(l, s) for l in labels for s in range(k))
    cats = np.array([cid.category for cid in cluster_ids])
    distances = DistanceMatrix(
        ids=cluster_ids,
        values=values,
        same_category=cats[:, None] == cats[None, :],
    )
    spec = ExtractorSpec(
        kind=header["extractor"]["kind"],
        dimension=header["extractor"]["dimension"],
        version=header["extractor"]["version"],
    )
    return VisualIndex(
        model=model, distances=distances, extractor=spec,
        seed=header["seed"], version=version,
    )
