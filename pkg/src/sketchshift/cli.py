"""Command-line entry points: build the index, run one-off queries, inspect
artifacts, and launch the HTTP service.

Exit codes: 0 success, 2 data or artifact error, 3 degenerate sketch input,
64 usage error. Every failure prints a single ``ErrorName: message`` line to
stderr so scripts can grep for the error class.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .artifacts import load_artifacts
from .clustering import elbow_curve
from .corpus import SketchCorpus, parse_record, scan_corpus
from .embeddings import load_embeddings
from .engine import Novelty, conceptual_shift
from .errors import DegenerateSketch, FormatError, SketchShiftError, UnknownCategory
from .features import BUILTIN_SPEC, ExtractorSpec, extract, import_vectors
from .index import build_index, load_index, save_index
from .sketch import normalize_label, sketch_to_drawing

EXIT_OK = 0
EXIT_DATA = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="sketchshift")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build-index", help="cluster a corpus and write the index file")
    b.add_argument("--corpus", required=True)
    b.add_argument("--embeddings", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--k", type=int, default=10)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--limit-per-category", type=int, default=None)
    b.add_argument("--vectors", default=None,
                   help="use precomputed vectors instead of the built-in extractor")

    q = sub.add_parser("query", help="run one conceptual-shift query")
    q.add_argument("--index", required=True)
    q.add_argument("--embeddings", required=True)
    q.add_argument("--corpus", required=True)
    q.add_argument("--sketch", required=True, help="file holding one corpus-format line")
    q.add_argument("--label", required=True)
    q.add_argument("--novelty", required=True, choices=[n.value for n in Novelty])
    q.add_argument("--source-id", default=None,
                   help="corpus id of the sketch; required by imported-vector indexes")
    q.add_argument("--json", action="store_true", dest="as_json")

    i = sub.add_parser("inspect", help="print index metadata")
    i.add_argument("--index", required=True)
    i.add_argument("--elbow", default=None, metavar="CATEGORY",
                   help="recompute the elbow table for one category")

    s = sub.add_parser("serve", help="launch the HTTP service")
    s.add_argument("--index", default=os.environ.get("CSP_INDEX"))
    s.add_argument("--embeddings", default=os.environ.get("CSP_EMBEDDINGS"))
    s.add_argument("--corpus", default=os.environ.get("CSP_CORPUS"))
    s.add_argument("--port", type=int,
                   default=int(os.environ.get("CSP_PORT", "8000")))
    s.add_argument("--host", default="127.0.0.1")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "build-index":
            return _cmd_build(args)
        if args.command == "query":
            return _cmd_query(args)
        if args.command == "inspect":
            return _cmd_inspect(args)
        if args.command == "serve":
            return _cmd_serve(args, parser)
    except DegenerateSketch as exc:
        print(f"DegenerateSketch: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (SketchShiftError, FileNotFoundError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def _cmd_build(args) -> int:
    manifest = scan_corpus(args.corpus)
    labels = manifest.labels()
    load_embeddings(args.embeddings, labels)  # fails listing any uncovered label

    corpus = SketchCorpus.load(args.corpus, limit_per_category=args.limit_per_category)
    if args.vectors:
        vectors = import_vectors(args.vectors, manifest)
        by_category = {}
        missing = []
        for label in labels:
            fvs = []
            for s in corpus.by_label[label]:
                fv = vectors.get(s.source_id)
                if fv is None:
                    missing.append(s.source_id)
                else:
                    fvs.append(fv)
            by_category[label] = fvs
        if missing:
            raise FormatError(
                f"{len(missing)} corpus sketches have no vector "
                f"(first: {missing[0]})"
            )
        dim = next(iter(vectors.values())).values.shape[0]
        spec = ExtractorSpec(kind="imported", dimension=dim, version="imported-1")
    else:
        by_category = {
            label: [extract(s) for s in corpus.by_label[label]] for label in labels
        }
        spec = BUILTIN_SPEC

    index = build_index(by_category, k=args.k, seed=args.seed, extractor=spec)
    save_index(index, args.out)

    for label in index.labels():
        wcss = index.model.categories[label].wcss
        print(f"{label}: clusters={index.k} wcss_total={wcss.sum():.6f}")
    q = len(index.distances.ids)
    print(f"matrix: {q}x{q} ({len(labels)} categories x k={index.k})")
    print(f"index written to {args.out}")
    return EXIT_OK


def _cmd_query(args) -> int:
    bundle = load_artifacts(args.index, args.embeddings, args.corpus)
    with open(args.sketch, "r", encoding="utf-8") as fh:
        line = next((l.strip() for l in fh if l.strip()), None)
    if line is None:
        raise FormatError(f"{args.sketch}: no record found")

    label = normalize_label(args.label)
    sketch = parse_record(line, label, args.source_id or "query", require_extent=False)
    if label not in bundle.index.model.categories:
        raise UnknownCategory(f"'{label}' is not in the index")

    result = conceptual_shift(
        sketch, Novelty(args.novelty), bundle.index, bundle.store, bundle.corpus
    )
    if args.as_json:
        from .service import ShiftRequest, make_reply, request_digest

        req = ShiftRequest(
            label=label,
            strokes=[[list(map(float, xs)), list(map(float, ys))]
                     for xs, ys in json.loads(line)["drawing"]],
            novelty=args.novelty,
        )
        reply = make_reply(result, args.novelty, request_digest(bundle.index_digest, req))
        print(reply.model_dump_json())
    else:
        c = result.candidate
        print(f"target: {result.label} (cluster {c.target.slot})")
        print(f"novelty: {args.novelty}")
        print(f"visual_similarity: {c.visual_sim:.6f}")
        print(f"conceptual_similarity: {c.conceptual_sim:.6f}")
        print(f"composite: {c.composite:.6f}")
        print(f"fallback_used: {result.fallback_used}")
        print(f"sketch: {json.dumps(sketch_to_drawing(result.sketch))}")
    return EXIT_OK


def _cmd_inspect(args) -> int:
    index = load_index(args.index)
    labels = index.labels()
    total_members = sum(
        len(c.member_ids) for c in index.model.categories.values()
    )
    q = len(index.distances.ids)
    print(f"index: {args.index}")
    print(f"format_version: {index.version}")
    print(f"extractor: {index.extractor.kind} D={index.extractor.dimension} "
          f"({index.extractor.version})")
    print(f"k: {index.k}  seed: {index.seed}")
    print(f"categories: {len(labels)}")
    print(f"labels: {', '.join(labels)}")
    print(f"members: {total_members}")
    print(f"matrix: {q}x{q}")
    if args.elbow:
        label = normalize_label(args.elbow)
        if label not in index.model.categories:
            raise UnknownCategory(f"'{label}' is not in the index")
        vectors = index.model.categories[label].member_vectors
        k_max = min(15, vectors.shape[0])
        result = elbow_curve(vectors, 1, k_max, seed=index.seed)
        print(f"elbow table for '{label}':")
        for k, wcss in result.points:
            print(f"  k={k:<3d} wcss={wcss:.6f}")
        flag = "" if result.elbow_defined else " (range too short; undefined)"
        print(f"elbow estimate: k={result.elbow_k}{flag}")
    return EXIT_OK


def _cmd_serve(args, parser) -> int:
    for name in ("index", "embeddings", "corpus"):
        if getattr(args, name) is None:
            parser.error(f"--{name} is required (or set CSP_{name.upper()})")

    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    bundle = load_artifacts(args.index, args.embeddings, args.corpus)

    from .service import create_app

    app = create_app(bundle)

    import signal
    import threading

    import uvicorn

    server = uvicorn.Server(uvicorn.Config(
        app, host=args.host, port=args.port, log_level="warning",
    ))
    # Run the server off the main thread so uvicorn leaves signal handling
    # to us: a termination signal then means graceful shutdown and exit 0
    # instead of dying by the re-raised signal.
    failures: list[BaseException] = []

    def _run():
        try:
            server.run()
        except BaseException as exc:  # surfaced below as exit 2
            failures.append(exc)

    thread = threading.Thread(target=_run, daemon=True)
    stop = threading.Event()
    for sig in (signal.SIGTERM, signal.SIGINT):
        signal.signal(sig, lambda *_: stop.set())
    thread.start()
    while thread.is_alive() and not stop.wait(0.1):
        pass
    if stop.is_set():
        server.should_exit = True
    thread.join(timeout=30.0)
    if failures or not server.started:
        detail = failures[0] if failures else "server failed to start"
        print(f"ServeError: {detail}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
