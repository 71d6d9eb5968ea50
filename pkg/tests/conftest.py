"""Shared fixtures: one planted corpus per session, indexed two ways."""

from __future__ import annotations

from dataclasses import dataclass

import pytest

from sketchshift.corpus import SketchCorpus, scan_corpus
from sketchshift.embeddings import EmbeddingStore, load_embeddings
from sketchshift.features import BUILTIN_SPEC, ExtractorSpec, extract, import_vectors
from sketchshift.index import VisualIndex, build_index

from planted import PlantedFixture, build_planted_fixture


@dataclass
class Bundle:
    fixture: PlantedFixture
    index: VisualIndex
    store: EmbeddingStore
    corpus: SketchCorpus


@pytest.fixture(scope="session")
def planted(tmp_path_factory) -> PlantedFixture:
    return build_planted_fixture(tmp_path_factory.mktemp("planted"))


@pytest.fixture(scope="session")
def planted_bundle(planted) -> Bundle:
    """Index built from the planted precomputed vectors."""
    manifest = scan_corpus(planted.corpus_dir)
    corpus = SketchCorpus.load(planted.corpus_dir)
    vectors = import_vectors(planted.vectors_path, manifest)
    by_category = {
        label: [vectors[s.source_id] for s in corpus.by_label[label]]
        for label in manifest.labels()
    }
    dim = next(iter(vectors.values())).values.shape[0]
    index = build_index(
        by_category, k=10, seed=1,
        extractor=ExtractorSpec(kind="imported", dimension=dim, version="imported-1"),
    )
    store = load_embeddings(planted.embeddings_path, manifest.labels())
    return Bundle(fixture=planted, index=index, store=store, corpus=corpus)


@pytest.fixture(scope="session")
def builtin_bundle(planted) -> Bundle:
    """Index built from the built-in geometric extractor over the same corpus."""
    corpus = SketchCorpus.load(planted.corpus_dir, limit_per_category=40)
    by_category = {
        label: [extract(s) for s in sketches]
        for label, sketches in corpus.by_label.items()
    }
    index = build_index(by_category, k=10, seed=1, extractor=BUILTIN_SPEC)
    store = load_embeddings(planted.embeddings_path, list(corpus.by_label))
    return Bundle(fixture=planted, index=index, store=store, corpus=corpus)
