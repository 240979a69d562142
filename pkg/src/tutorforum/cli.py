"""Command-line entry points: ingest, detect, index, ask, serve, eval."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import (
    corpus_stats,
    doc_titles,
    ingest_corpus,
    load_corpus_file,
    save_doc_titles,
    save_passages,
)
from .evalharness import compute_report, load_records, render_report, report_to_json
from .index import (
    DEFAULT_DIM,
    DOCS_FILE,
    PASSAGES_FILE,
    HashedFrequencyEmbedder,
    HttpEmbeddingProvider,
    build_index,
    load_index,
    save_index,
)
from .language import detect_language
from .ragcore import ExternalBackend, StubBackend, answer_question
from .service import load_config, serve


def _cmd_ingest(args: argparse.Namespace) -> int:
    docs = load_corpus_file(args.corpus)
    passages = ingest_corpus(docs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_passages(passages, out / PASSAGES_FILE)
    save_doc_titles(doc_titles(docs), out / DOCS_FILE)
    print(json.dumps({"documents": len(docs), "passages": len(passages), **corpus_stats(passages)}))
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    verdict = detect_language(args.text)
    print(json.dumps({"language": verdict.language.value, "confidence": verdict.confidence}))
    return 0


def _make_provider(name: str, dim: int):
    if name == "http":
        return HttpEmbeddingProvider.from_env(dim=dim)
    return HashedFrequencyEmbedder(dim=dim)


def _cmd_index_build(args: argparse.Namespace) -> int:
    docs = load_corpus_file(args.corpus)
    passages = ingest_corpus(docs)
    index = build_index(passages, _make_provider(args.provider, args.dim), doc_titles(docs))
    save_index(index, args.out)
    print(json.dumps({"passages": len(index), "dim": args.dim, "provider": args.provider, "out": str(args.out)}))
    return 0


def _cmd_index_query(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    verdict = detect_language(args.text)
    tags = [t for t in (args.tags or "").split(",") if t] or None
    hits = index.retrieve(args.text, verdict.language, tags=tags, k=args.k)
    for hit in hits:
        print(json.dumps({"passage_id": hit.passage_id, "score": hit.score, "rank": hit.rank}))
    return 0


def _cmd_ask(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    backend = ExternalBackend.from_env() if args.backend == "external" else StubBackend()
    tags = [t for t in (args.tags or "").split(",") if t] or None
    answer = answer_question(index, args.text, tags=tags, backend=backend)
    print(answer.body)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    serve(load_config(args.config))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    report = compute_report(load_records(args.records))
    print(report_to_json(report) if args.json else render_report(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tutorforum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="split a corpus file into a passage bank")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("detect", help="detect the language of a question")
    p.add_argument("--text", required=True)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("index", help="build or query the retrieval index")
    index_sub = p.add_subparsers(dest="index_command", required=True)
    b = index_sub.add_parser("build")
    b.add_argument("--corpus", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--provider", choices=("ref", "http"), default="ref")
    b.add_argument("--dim", type=int, default=DEFAULT_DIM)
    b.set_defaults(func=_cmd_index_build)
    q = index_sub.add_parser("query")
    q.add_argument("--index", required=True)
    q.add_argument("--text", required=True)
    q.add_argument("--tags", default="")
    q.add_argument("--k", type=int, default=5)
    q.set_defaults(func=_cmd_index_query)

    p = sub.add_parser("ask", help="answer a question from the index")
    p.add_argument("--index", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--tags", default="")
    p.add_argument("--backend", choices=("stub", "external"), default="stub")
    p.set_defaults(func=_cmd_ask)

    p = sub.add_parser("serve", help="run the forum service")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("eval", help="compute deployment metrics from labeled records")
    p.add_argument("--records", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
