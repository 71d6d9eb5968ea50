"""Loading the artifact bundle (index, embeddings, corpus) used at query time."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .corpus import SketchCorpus
from .embeddings import EmbeddingStore, load_embeddings
from .index import VisualIndex, load_index


@dataclass
class Artifacts:
    index: VisualIndex
    store: EmbeddingStore
    corpus: SketchCorpus
    index_digest: str  # content hash, folded into reply ids for reproducibility


def load_artifacts(index_path, embeddings_path, corpus_dir,
                   limit_per_category: int | None = None) -> Artifacts:
    index = load_index(index_path)
    store = load_embeddings(embeddings_path, index.labels())
    corpus = SketchCorpus.load(corpus_dir, limit_per_category=limit_per_category)
    digest = hashlib.sha256(Path(index_path).read_bytes()).hexdigest()[:16]
    return Artifacts(index=index, store=store, corpus=corpus, index_digest=digest)
