"""Acceptance suite: one test per release criterion, strict tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion. Criteria are property-based plus planted-structure reproduction;
corpus-scale figures are asserted by formula where stated.
"""

import itertools
import time

import numpy as np
from fastapi.testclient import TestClient

from sketchshift.artifacts import Artifacts
from sketchshift.clustering import kmeans
from sketchshift.corpus import SketchCorpus, scan_corpus
from sketchshift.embeddings import conceptual_similarity, load_embeddings
from sketchshift.engine import (
    Novelty,
    classify_novelty,
    conceptual_shift,
    fuse_scores,
    rank_visual,
)
from sketchshift.features import ExtractorSpec, FeatureVector, import_vectors
from sketchshift.index import build_index, load_index, save_index
from sketchshift.service import create_app
from sketchshift.sketch import (
    from_delta_sequence,
    sketch_to_drawing,
    to_delta_sequence,
)


def report(criterion, detail=""):
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance] {criterion}: PASS{suffix}")


def test_p1_pipeline_structure_planted_targets(planted):
    """P1: planted nearest / mid / farthest category per novelty level for
    at least 95 of 100 random queries, under 60 seconds end to end."""
    t0 = time.perf_counter()
    manifest = scan_corpus(planted.corpus_dir)
    corpus = SketchCorpus.load(planted.corpus_dir)
    vectors = import_vectors(planted.vectors_path, manifest)
    by_cat = {
        label: [vectors[s.source_id] for s in corpus.by_label[label]]
        for label in manifest.labels()
    }
    index = build_index(
        by_cat, k=10, seed=1,
        extractor=ExtractorSpec(kind="imported", dimension=256, version="imported-1"),
    )
    store = load_embeddings(planted.embeddings_path, manifest.labels())

    rng = np.random.default_rng(2024)
    successes = 0
    for _ in range(100):
        label = planted.labels[rng.integers(len(planted.labels))]
        sketch = corpus.by_label[label][rng.integers(len(corpus.by_label[label]))]
        ok = True
        for level in Novelty:
            got = conceptual_shift(sketch, level, index, store, corpus)
            if got.label != planted.expected[label][level.value]:
                ok = False
        successes += ok
    elapsed = time.perf_counter() - t0
    assert successes >= 95
    assert elapsed < 60.0
    report("P1 pipeline structure", f"{successes}/100 queries, {elapsed:.1f}s")


def test_p2_matrix_invariants(planted_bundle):
    """P2: exact symmetry, zero diagonal, dimension = categories x k."""
    m = planted_bundle.index.distances.values
    assert np.array_equal(m, m.T)
    assert np.all(np.diag(m) == 0.0)
    assert m.shape == (120, 120)
    assert len(planted_bundle.index.distances.ids) == 12 * 10
    assert 345 * 10 == 3450  # full-corpus shape, by formula
    report("P2 matrix invariants")


def brute_force_wcss(X, k):
    best = np.inf
    for assign in itertools.product(range(k), repeat=len(X)):
        a = np.array(assign)
        total = 0.0
        for j in range(k):
            members = X[a == j]
            if len(members):
                c = members.mean(axis=0)
                total += ((members - c) ** 2).sum()
        best = min(best, total)
    return best


def test_p3_kmeans_brute_force_oracle():
    """P3: best-of-10-seeds WCSS equals the brute-force optimum within 1e-9
    on 100 seeded tiny instances."""
    rng = np.random.default_rng(0)
    for _ in range(100):
        k = int(rng.integers(1, 4))
        n = int(rng.integers(k, 9))
        X = rng.normal(size=(n, 2)) * 3.0
        target = brute_force_wcss(X, k)
        best10 = min(kmeans(X, k, seed=seed).wcss for seed in range(10))
        assert abs(best10 - target) <= 1e-9
    report("P3 k-means oracle", "100 instances, best-of-10 optimal")


def test_p4_wcss_monotone_during_fixture_build(planted_bundle):
    """P4: every Lloyd iteration has nonincreasing WCSS (eps 1e-9)."""
    checked = 0
    for label in planted_bundle.index.labels():
        X = planted_bundle.index.model.categories[label].member_vectors
        result = kmeans(X, 10, seed=1)
        h = result.wcss_history
        assert all(h[i + 1] <= h[i] + 1e-9 for i in range(len(h) - 1))
        checked += len(h)
    report("P4 WCSS monotonicity", f"{checked} iterations checked")


def test_p5_normalization_arithmetic():
    """P5: raw distances [2, 4, 6] give similarities [1.0, 0.5, 0.0]; an
    all-equal candidate set gives all 1.0."""
    def fv(values, ref):
        return FeatureVector(values=np.asarray(values, float), sketch_ref=ref)

    spec1 = ExtractorSpec(kind="imported", dimension=1, version="test")
    line = build_index(
        {
            "a": [fv([0.0], "a:0")], "b": [fv([2.0], "b:0")],
            "c": [fv([4.0], "c:0")], "d": [fv([6.0], "d:0")],
        },
        k=1, seed=1, extractor=spec1,
    )
    got = rank_visual(np.array([0.0]), "a", line, top_n=3)
    assert [c.visual_sim for c in got] == [1.0, 0.5, 0.0]

    spec2 = ExtractorSpec(kind="imported", dimension=2, version="test")
    ring = build_index(
        {
            "q": [fv([0.0, 0.0], "q:0")],
            "e1": [fv([1.0, 0.0], "e1:0")],
            "e2": [fv([-1.0, 0.0], "e2:0")],
            "e3": [fv([0.0, 1.0], "e3:0")],
        },
        k=1, seed=1, extractor=spec2,
    )
    degenerate = rank_visual(np.array([0.0, 0.0]), "q", ring, top_n=3)
    assert [c.visual_sim for c in degenerate] == [1.0, 1.0, 1.0]
    report("P5 normalization arithmetic")


def test_p6_fusion_filter_sweep():
    """P6: on a 0.01 grid over [0,1]^2, passed iff |v-c| < 0.05 and the
    composite equals (v+c)/2 within 1e-12."""
    grid = [i / 100.0 for i in range(101)]
    checked = 0
    for v in grid:
        for c in grid:
            passed, composite = fuse_scores(v, c)
            assert passed == (abs(v - c) < 0.05)
            assert abs(composite - (v + c) / 2.0) <= 1e-12
            checked += 1
    report("P6 fusion filter", f"{checked} grid points")


def test_p7_tertile_partition():
    """P7: 20 candidates split 7/7/6 with monotone composite buckets."""
    from sketchshift.engine import ShiftCandidate
    from sketchshift.index import ClusterId

    rng = np.random.default_rng(5)
    for trial in range(20):
        vals = rng.uniform(0.0, 1.0, size=20)
        cands = []
        for i, v in enumerate(vals):
            passed, comp = fuse_scores(float(v), float(v))
            cands.append(ShiftCandidate(
                target=ClusterId("t", i), visual_sim=float(v),
                conceptual_sim=float(v), composite=comp,
                passed_filter=passed, raw_distance=1.0 - float(v),
            ))
        got = classify_novelty(cands)
        by_level = {level: [c.composite for c in got if c.novelty == level]
                    for level in Novelty}
        assert len(by_level[Novelty.LOW]) == 7
        assert len(by_level[Novelty.INTERMEDIATE]) == 7
        assert len(by_level[Novelty.HIGH]) == 6
        assert max(by_level[Novelty.HIGH]) <= min(by_level[Novelty.INTERMEDIATE])
        assert max(by_level[Novelty.INTERMEDIATE]) <= min(by_level[Novelty.LOW])
    report("P7 tertile partition", "20 trials of 20 candidates")


def test_p8_cosine_correctness():
    """P8: similarity matches direct dot/norm within 1e-9 over 1000 random
    pairs; symmetric exactly; self-similarity within 1e-9 of 1."""
    from sketchshift.embeddings import EmbeddingStore, cosine

    rng = np.random.default_rng(12)
    for _ in range(1000):
        dim = int(rng.integers(2, 24))
        a = rng.normal(size=dim)
        b = rng.normal(size=dim)
        store = EmbeddingStore(dimension=dim, table={"a": a, "b": b})
        direct = float(np.dot(a, b)) / (
            float(np.linalg.norm(a)) * float(np.linalg.norm(b))
        )
        assert abs(cosine("a", "b", store) - direct) <= 1e-9
        assert abs(conceptual_similarity("a", "b", store) - max(0.0, direct)) <= 1e-9
        assert conceptual_similarity("a", "b", store) == conceptual_similarity("b", "a", store)
        assert abs(conceptual_similarity("a", "a", store) - 1.0) <= 1e-9
    report("P8 cosine correctness", "1000 pairs")


def test_p9_determinism(planted, tmp_path, builtin_bundle):
    """P9: byte-identical index files from identical build invocations, and
    byte-identical bodies from identical service requests."""
    from sketchshift.cli import main

    outs = []
    for name in ("one.idx", "two.idx"):
        out = tmp_path / name
        code = main([
            "build-index",
            "--corpus", str(planted.corpus_dir),
            "--embeddings", str(planted.embeddings_path),
            "--vectors", str(planted.vectors_path),
            "--out", str(out), "--k", "10", "--seed", "1",
        ])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]

    bundle = Artifacts(
        index=builtin_bundle.index, store=builtin_bundle.store,
        corpus=builtin_bundle.corpus, index_digest="p9",
    )
    with TestClient(create_app(bundle)) as client:
        sketch = builtin_bundle.corpus.by_label["chair"][1]
        body = {"label": "chair", "strokes": sketch_to_drawing(sketch),
                "novelty": "intermediate"}
        first = client.post("/v1/shift", json=body)
        second = client.post("/v1/shift", json=body)
        assert first.status_code == second.status_code == 200
        assert first.content == second.content
    report("P9 determinism")


def test_p10_round_trips(planted_bundle, tmp_path):
    """P10: delta encoding round-trips 100 random sketches exactly; the
    index file round-trips bit-exactly through save and load."""
    rng = np.random.default_rng(99)
    from sketchshift.sketch import Point, Sketch, Stroke

    for _ in range(100):
        strokes = []
        for _ in range(int(rng.integers(1, 5))):
            pts = tuple(
                Point(int(rng.integers(0, 256)), int(rng.integers(0, 256)))
                for _ in range(int(rng.integers(1, 8)))
            )
            strokes.append(Stroke(pts))
        sketch = Sketch(label="r", strokes=tuple(strokes))
        back = from_delta_sequence(to_delta_sequence(sketch))
        assert [s.points for s in back.strokes] == [s.points for s in sketch.strokes]

    p1 = tmp_path / "a.idx"
    p2 = tmp_path / "b.idx"
    save_index(planted_bundle.index, p1)
    save_index(load_index(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()
    report("P10 round trips")


def test_p11_service_contract(builtin_bundle):
    """P11: /v1/shift answers under 100 ms median on the 120-cluster index
    and returns the pinned status codes for the error examples."""
    bundle = Artifacts(
        index=builtin_bundle.index, store=builtin_bundle.store,
        corpus=builtin_bundle.corpus, index_digest="p11",
    )
    assert len(builtin_bundle.index.distances.ids) == 120
    with TestClient(create_app(bundle)) as client:
        sketch = builtin_bundle.corpus.by_label["boat"][2]
        body = {"label": "boat", "strokes": sketch_to_drawing(sketch),
                "novelty": "high"}
        client.post("/v1/shift", json=body)  # warm-up

        times = []
        for _ in range(30):
            t0 = time.perf_counter()
            r = client.post("/v1/shift", json=body)
            times.append(time.perf_counter() - t0)
            assert r.status_code == 200
        median_ms = sorted(times)[len(times) // 2] * 1000.0
        assert median_ms < 100.0

        bad_novelty = client.post("/v1/shift", json=dict(body, novelty="extreme"))
        assert bad_novelty.status_code == 400
        assert bad_novelty.json()["error_code"] == "bad_novelty"

        unknown = client.post("/v1/shift", json=dict(body, label="zzz_unknown"))
        assert unknown.status_code == 404

        degenerate = client.post("/v1/shift", json={
            "label": "boat", "strokes": [[[7, 7], [3, 3]]], "novelty": "low",
        })
        assert degenerate.status_code == 422
    report("P11 service contract", f"median {median_ms:.2f} ms")
