"""Command line: thin argparse layer over the engine facade.

Exit codes: 0 success, 1 domain error (bad input, unknown ids, corrupt
files), 2 usage error (argparse's own convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import ingest_document, write_record
from .engine import Engine
from .errors import OntosearchError
from .evalharness import compare, load_judgments, evaluate, write_curve_csv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontosearch",
        description="Ontology-driven literature search over a local corpus.")
    parser.add_argument("--config", default="ontosearch.json",
                        help="engine configuration file (default: %(default)s)")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="normalize raw files into the corpus directory")
    p.add_argument("files", nargs="+", help="input files (plain text or HTML)")
    p.add_argument("--format", choices=("plain", "html", "structured"),
                   help="input format (default: by file extension)")
    p.add_argument("--language", default="en")

    p = sub.add_parser("index", help="index the corpus directory")
    p.add_argument("--rebuild", action="store_true",
                   help="discard the existing index and start over")

    p = sub.add_parser("search", help="run a Boolean or free-text query")
    p.add_argument("query")
    p.add_argument("--text", action="store_true",
                   help="treat the query as free text instead of Boolean syntax")
    p.add_argument("--language", default="en", help="free-text query language")
    p.add_argument("--related", action="store_true",
                   help="also expand across 'related' concept links")
    p.add_argument("--limit", type=int, default=None)

    p = sub.add_parser("metadata", help="filter documents on header fields")
    for name in ("title", "author", "language", "source", "date-from", "date-to"):
        p.add_argument(f"--{name}")

    p = sub.add_parser("suggest", help="typeahead lookup over knowledge labels")
    p.add_argument("prefix")
    p.add_argument("--language", default="en")
    p.add_argument("--limit", type=int, default=10)

    sub.add_parser("tree", help="print the ontology tree")
    p = sub.add_parser("entity", help="show one class or concept")
    p.add_argument("id")
    p = sub.add_parser("document", help="show one indexed document")
    p.add_argument("id")

    sub.add_parser("enrich", help="extract and score vocabulary candidates")

    p = sub.add_parser("candidates", help="list enrichment candidates")
    p.add_argument("--state", default=None)

    p = sub.add_parser("candidate", help="curation actions on one candidate")
    csub = p.add_subparsers(dest="action", required=True)
    pc = csub.add_parser("set-state", help="move a candidate through the workflow")
    pc.add_argument("id")
    pc.add_argument("state")
    pc.add_argument("--note", default="")
    pc = csub.add_parser("show", help="print one candidate")
    pc.add_argument("id")

    p = sub.add_parser("export-suggestions",
                       help="export accepted candidates as thesaurus suggestions")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("eval", help="score retrieval against a judgments file")
    p.add_argument("judgments")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--compare", default=None,
                   help="second judgments file to run and diff against")
    p.add_argument("--curve", default=None,
                   help="write per-depth precision/recall points to this CSV")

    sub.add_parser("stats", help="index and knowledge-base statistics")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8040)
    p.add_argument("--ui", default=None, help="static directory to serve at /")
    return parser


def _emit(args, payload: dict | list, human: str | None = None) -> None:
    if args.json or human is None:
        json.dump(payload, sys.stdout, ensure_ascii=False, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(human + "\n")


def _format_results(response: dict) -> str:
    lines = [f"query: {response['query']}"]
    if response.get("or_fallback"):
        lines.append("note: no document matched every part; "
                     "showing any-part matches instead")
    for expansion_root, expansion in response.get("expansion", {}).items():
        lines.append(f"expanded {expansion_root}: "
                     + ", ".join(expansion["entities"]))
    lines.append(f"{response['total']} result(s)")
    for row in response["results"]:
        lines.append(f"  {row['doc_id']}  {row['score']:.4f}  {row['title']}")
        if row["snippet"]:
            lines.append(f"      {row['snippet']}")
    return "\n".join(lines)


def _cmd_ingest(engine: Engine, args) -> dict:
    corpus_dir = Path(engine.config.corpus_dir)
    corpus_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in args.files:
        source = Path(name)
        fmt = args.format
        if fmt is None:
            fmt = "html" if source.suffix.lower() in (".html", ".htm") else "plain"
        doc = ingest_document(source.read_bytes(), fmt,
                              {"title": source.stem, "language": args.language,
                               "source": source.name})
        target = corpus_dir / f"{doc.id}.rec"
        write_record(doc, target)
        written.append({"doc_id": doc.id, "file": str(target)})
    return {"ingested": written}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        engine = Engine.from_config_file(args.config)

        if args.command == "ingest":
            payload = _cmd_ingest(engine, args)
            _emit(args, payload,
                  "\n".join(f"{row['doc_id']}  {row['file']}"
                            for row in payload["ingested"]))
        elif args.command == "index":
            stats = engine.index_corpus(rebuild=args.rebuild)
            _emit(args, stats,
                  f"indexed {stats['documents']} document(s), "
                  f"{stats['terms']} term(s), {stats['entities']} entit(ies)"
                  + (f"; +{stats['added']} -{stats['removed']} ~{stats['updated']}"
                     if not stats["rebuilt"] else " (full rebuild)"))
        elif args.command == "search":
            if args.text:
                response = engine.search_text(args.query, args.language,
                                              args.related, args.limit)
            else:
                response = engine.search(args.query, args.related, args.limit)
            _emit(args, response, _format_results(response))
        elif args.command == "metadata":
            filters = {key.replace("-", "_"): value for key, value in (
                ("title", args.title), ("author", args.author),
                ("language", args.language), ("source", args.source),
                ("date-from", args.date_from), ("date-to", args.date_to))
                if value is not None}
            response = engine.search_fields(filters)
            _emit(args, response, _format_results({**response,
                                                   "query": json.dumps(filters),
                                                   "expansion": {}}))
        elif args.command == "suggest":
            rows = engine.suggest(args.prefix, args.language, args.limit)
            _emit(args, rows, "\n".join(
                f"{r['entity_id']}  [{r['kind']}]  {r['label']}  "
                f"({r['document_count']} doc(s))" for r in rows) or "no matches")
        elif args.command == "tree":
            tree = engine.ontology_tree()

            def render(node, depth):
                yield "  " * depth + f"{node['label']} [{node['entity_id']}]" + (
                    f" ({node['document_count']})" if node["document_count"] else "")
                for concept in node["concepts"]:
                    yield "  " * (depth + 1) + \
                        f"= {concept['label']} [{concept['entity_id']}, {concept['relation']}]"
                for child in node["children"]:
                    yield from render(child, depth + 1)

            _emit(args, tree, "\n".join(line for root in tree
                                        for line in render(root, 0)))
        elif args.command == "entity":
            _emit(args, engine.entity_card(args.id))
        elif args.command == "document":
            _emit(args, engine.document_card(args.id))
        elif args.command == "enrich":
            summary = engine.run_enrichment()
            _emit(args, summary,
                  f"{summary['candidates']} candidate(s), {summary['new']} new")
        elif args.command == "candidates":
            rows = engine.list_candidates(args.state)
            _emit(args, rows, "\n".join(
                f"{c['id']}  {c['state']:<12} {c['score']:.4f}  {c['surface']}"
                for c in rows) or "no candidates")
        elif args.command == "candidate":
            if args.action == "set-state":
                cand = engine.set_candidate_state(args.id, args.state, args.note)
                _emit(args, cand, f"{cand['id']} -> {cand['state']}")
            else:
                _emit(args, engine.candidates.get(args.id).to_dict())
        elif args.command == "export-suggestions":
            payload = engine.export_suggestions()
            if args.out:
                Path(args.out).write_text(
                    json.dumps(payload, ensure_ascii=False, indent=2) + "\n",
                    encoding="utf-8")
                _emit(args, {"written": args.out,
                             "suggestions": len(payload["suggestions"])},
                      f"wrote {len(payload['suggestions'])} suggestion(s) to {args.out}")
            else:
                _emit(args, payload)
        elif args.command == "eval":
            report = engine.evaluate_file(args.judgments, args.beta)
            payload: dict = report.to_dict()
            human = [f"macro precision {report.macro_precision:.4f}  "
                     f"recall {report.macro_recall:.4f}  F {report.macro_f:.4f}"]
            for qid, outcome in sorted(report.outcomes.items()):
                human.append(f"  {qid}: P {outcome.measure.precision:.4f} "
                             f"R {outcome.measure.recall:.4f} F {outcome.f_score:.4f}")
            if args.compare:
                other = evaluate(engine.run_judged_query,
                                 load_judgments(args.compare), args.beta)
                rows = compare(report, other)
                payload["comparison"] = [
                    {"query_id": c.query_id, "f_first": c.f_a,
                     "f_second": c.f_b, "delta": c.delta} for c in rows]
                human.append("versus " + args.compare + ":")
                for c in rows:
                    human.append(f"  {c.query_id}: F {c.f_a:.4f} vs {c.f_b:.4f} "
                                 f"(delta {c.delta:+.4f})")
            if args.curve:
                points = engine.curve_file(args.judgments, args.beta)
                write_curve_csv(points, args.curve)
                payload["curve_file"] = args.curve
                human.append(f"curve written to {args.curve}")
            _emit(args, payload, "\n".join(human))
        elif args.command == "stats":
            stats = engine.stats()
            _emit(args, stats, "\n".join(f"{k}: {v}" for k, v in stats.items()))
        elif args.command == "serve":
            from .server import serve
            serve(engine, host=args.host, port=args.port, ui_dir=args.ui)
        return 0
    except OntosearchError as exc:
        sys.stderr.write(f"error: {exc.code}: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: IoFailure: {exc}\n")
        return 1


def main() -> None:  # console-script entry point
    sys.exit(run())
