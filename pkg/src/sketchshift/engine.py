"""The conceptual-shift query path.

Given a sketch and its category, rank the most visually similar clusters
from other categories, fuse that with how semantically close the category
names are, bucket the candidates into low / intermediate / high novelty,
and pick a concrete response sketch at the requested level.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .corpus import SketchCorpus
from .embeddings import EmbeddingStore, conceptual_similarity
from .errors import (
    EmptyBucket,
    InsufficientCandidates,
    UnknownCategory,
    UnknownSketchRef,
)
from .features import extract
from .index import ClusterId, VisualIndex, representative_cluster
from .sketch import Sketch, normalize_label

TOP_N = 20
AGREEMENT_THRESHOLD = 0.05


class Novelty(str, enum.Enum):
    LOW = "low"
    INTERMEDIATE = "intermediate"
    HIGH = "high"


@dataclass(frozen=True)
class VisualCandidate:
    target: ClusterId
    raw_distance: float
    visual_sim: float


@dataclass(frozen=True)
class ShiftCandidate:
    target: ClusterId
    visual_sim: float
    conceptual_sim: float
    composite: float
    passed_filter: bool
    raw_distance: float
    novelty: Novelty | None = None


@dataclass(frozen=True)
class ShiftResponse:
    candidate: ShiftCandidate
    sketch: Sketch
    label: str
    fallback_used: bool


def rank_visual(
    query: np.ndarray,
    source_label: str,
    index: VisualIndex,
    top_n: int = TOP_N,
) -> list[VisualCandidate]:
    """Nearest cross-category clusters, with similarity on a [0, 1] scale.

    The query is routed to its representative cluster within its own
    category; candidates come from that cluster's distance-matrix row. Raw
    distances are min-max normalized across exactly the selected top_n, so
    the nearest candidate scores 1 and the farthest 0. When every candidate
    sits at the same distance the whole set scores 1. Ordering is by
    similarity descending with (category, slot) breaking ties.
    """
    source_label = normalize_label(source_label)
    rep = representative_cluster(query, source_label, index.model)
    row_i = index.distances.index_of(rep)
    row = index.distances.values[row_i]
    eligible = ~index.distances.same_category[row_i]
    pool = [
        (float(row[j]), index.distances.ids[j])
        for j in np.flatnonzero(eligible)
    ]
    if len(pool) < top_n:
        raise InsufficientCandidates(
            f"{len(pool)} cross-category clusters, need {top_n}"
        )
    pool.sort(key=lambda t: (t[0], t[1]))
    chosen = pool[:top_n]

    dmin = chosen[0][0]
    dmax = max(d for d, _ in chosen)
    span = dmax - dmin
    out = []
    for d, cid in chosen:
        sim = 1.0 if span == 0.0 else 1.0 - (d - dmin) / span
        out.append(VisualCandidate(target=cid, raw_distance=d, visual_sim=sim))
    out.sort(key=lambda c: (-c.visual_sim, c.target))
    return out


def fuse_scores(visual_sim: float, conceptual_sim: float,
                threshold: float = AGREEMENT_THRESHOLD) -> tuple[bool, float]:
    """Agreement filter plus composite: strict |v - c| < threshold, mean of the two."""
    passed = abs(visual_sim - conceptual_sim) < threshold
    return passed, (visual_sim + conceptual_sim) / 2.0


def fuse(
    candidates: list[VisualCandidate],
    store: EmbeddingStore,
    source_label: str,
    threshold: float = AGREEMENT_THRESHOLD,
) -> list[ShiftCandidate]:
    """Attach conceptual similarity to every visual candidate.

    Candidates failing the agreement filter are kept and flagged rather than
    dropped; selection decides what to do with them.
    """
    source_label = normalize_label(source_label)
    out = []
    for cand in candidates:
        c_sim = conceptual_similarity(source_label, cand.target.category, store)
        passed, composite = fuse_scores(cand.visual_sim, c_sim, threshold)
        out.append(ShiftCandidate(
            target=cand.target,
            visual_sim=cand.visual_sim,
            conceptual_sim=c_sim,
            composite=composite,
            passed_filter=passed,
            raw_distance=cand.raw_distance,
        ))
    return out


def classify_novelty(candidates: list[ShiftCandidate]) -> list[ShiftCandidate]:
    """Split candidates into similarity-rank tertiles.

    Sorted by composite descending, the most similar third is LOW novelty,
    the middle third INTERMEDIATE, the least similar third HIGH. When the
    count is not divisible by three the extra candidates go to the more
    similar buckets first (20 splits as 7/7/6). Ties order by (category,
    slot).
    """
    n = len(candidates)
    if n < 3:
        raise InsufficientCandidates(f"{n} candidates, need at least 3 to bucket")
    ordered = sorted(candidates, key=lambda c: (-c.composite, c.target))
    base, rem = divmod(n, 3)
    n_low = base + (1 if rem >= 1 else 0)
    n_mid = base + (1 if rem >= 2 else 0)
    out = []
    for i, cand in enumerate(ordered):
        if i < n_low:
            level = Novelty.LOW
        elif i < n_low + n_mid:
            level = Novelty.INTERMEDIATE
        else:
            level = Novelty.HIGH
        out.append(replace(cand, novelty=level))
    return out


def select_response(
    candidates: list[ShiftCandidate],
    requested: Novelty,
    index: VisualIndex,
    corpus: SketchCorpus,
) -> ShiftResponse:
    """Pick the concrete response sketch for the requested novelty level.

    Within the bucket, candidates that passed the agreement filter are
    preferred, choosing the smallest |visual - conceptual| gap; if none
    passed, the smallest-gap candidate is used anyway and the response is
    flagged as a fallback. The returned sketch is the member of the winning
    cluster whose vector lies nearest its centroid (ties by source id).
    """
    requested = Novelty(requested)
    bucket = [c for c in candidates if c.novelty == requested]
    if not bucket:
        raise EmptyBucket(f"no candidates classified as {requested.value}")
    passed = [c for c in bucket if c.passed_filter]
    pool = passed if passed else bucket
    winner = min(
        pool,
        key=lambda c: (abs(c.visual_sim - c.conceptual_sim), c.target),
    )
    sketch = _cluster_representative(winner.target, index, corpus)
    return ShiftResponse(
        candidate=winner,
        sketch=sketch,
        label=winner.target.category,
        fallback_used=not passed,
    )


def _cluster_representative(cid: ClusterId, index: VisualIndex, corpus: SketchCorpus) -> Sketch:
    cat = index.model.categories[cid.category]
    member_idx = np.flatnonzero(cat.assignment == cid.slot)
    if member_idx.size == 0:
        raise EmptyBucket(f"cluster {cid} has no members")
    centroid = cat.centroids[cid.slot]
    d = np.linalg.norm(cat.member_vectors[member_idx] - centroid, axis=1)
    best = min(zip(d, (cat.member_ids[i] for i in member_idx)))
    source_id = best[1]
    try:
        return corpus.by_id[source_id]
    except KeyError:
        raise UnknownSketchRef(f"corpus has no sketch '{source_id}'") from None


def query_vector(sketch: Sketch, index: VisualIndex) -> np.ndarray:
    """Resolve the feature vector for a query sketch.

    The built-in extractor computes it from geometry. An imported-vector
    index has no way to embed new drawings, so the sketch must be a corpus
    member and is looked up by source id.
    """
    if index.extractor.kind == "builtin":
        return extract(sketch).values
    label = normalize_label(sketch.label)
    cat = index.model.categories.get(label)
    if cat is None:
        raise UnknownCategory(f"'{label}' is not in the index")
    try:
        pos = cat.member_ids.index(sketch.source_id)
    except ValueError:
        raise UnknownSketchRef(
            f"imported index has no vector for '{sketch.source_id}'"
        ) from None
    return cat.member_vectors[pos]


def conceptual_shift(
    sketch: Sketch,
    requested: Novelty,
    index: VisualIndex,
    store: EmbeddingStore,
    corpus: SketchCorpus,
    top_n: int = TOP_N,
) -> ShiftResponse:
    """End-to-end query: vector, visual ranking, fusion, buckets, selection."""
    label = normalize_label(sketch.label)
    if label not in index.model.categories:
        raise UnknownCategory(f"'{label}' is not in the index")
    vec = query_vector(sketch, index)
    ranked = rank_visual(vec, label, index, top_n=top_n)
    fused = fuse(ranked, store, label)
    classified = classify_novelty(fused)
    return select_response(classified, requested, index, corpus)
