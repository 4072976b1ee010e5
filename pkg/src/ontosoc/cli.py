"""Command-line front door.

Subcommands: validate, query, derive-schema, export-alignment, stats,
serve.  Results go to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 validation violations, 2 usage/parse/missing-file errors.

The schema defaults to the builtin one; a replacement Turtle schema may
be given with --schema or the ONTOSOC_SCHEMA environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import hat, resources
from .rdf import RDF_TYPE, Graph, Iri, PrefixMap
from .schema import SchemaDef, builtin_schema, schema_from_graph, schema_prefixes, schema_to_graph
from .sparql import QueryError, evaluate, parse_query, to_json_results
from .turtle import Document, ParseError, parse_turtle, serialize_turtle
from .validation import validate

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def _load_schema(path: Optional[str]) -> SchemaDef:
    if path is None:
        path = os.environ.get("ONTOSOC_SCHEMA") or None
    if path is None:
        return builtin_schema()
    doc = _parse_file(path)
    return schema_from_graph(doc.graph)


def _parse_file(path: str) -> Document:
    p = Path(path)
    if not p.exists():
        raise CliError(f"no such file: {path}")
    try:
        return parse_turtle(p.read_text(encoding="utf-8"))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _merge_files(paths: list[str]) -> Document:
    merged = Document()
    for path in paths:
        doc = _parse_file(path)
        for label, ns in doc.prefixes.items():
            merged.prefixes.declare(label, ns)
        merged.graph.update(doc.graph)
    return merged


def _cmd_validate(args: argparse.Namespace) -> int:
    schema = _load_schema(args.schema)
    doc = _merge_files(args.files)
    report = validate(doc.graph, schema)
    if args.format == "json":
        payload = {
            "violations": [
                {
                    "kind": v.kind,
                    "message": v.message,
                    "machine": v.machine_line(),
                }
                for v in report.violations
            ],
            "checkedTriples": report.checked_triples,
            "entailedTypes": report.entailed_types,
            "skippedPredicates": report.skipped_predicates,
            "conforms": report.conforms,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(report.render_text())
    return EXIT_OK if report.conforms else EXIT_VIOLATIONS


def _cmd_query(args: argparse.Namespace) -> int:
    if args.query is not None:
        text = args.query
    else:
        qpath = Path(args.file)
        if not qpath.exists():
            raise CliError(f"no such file: {args.file}")
        text = qpath.read_text(encoding="utf-8")
    try:
        ast = parse_query(text)
    except QueryError as exc:
        raise CliError(f"query: {exc}") from exc
    for warning in ast.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    doc = _merge_files(args.files)
    table = evaluate(ast, doc.graph)
    if args.format == "json":
        print(to_json_results(table))
    else:
        print(table.render_text())
    return EXIT_OK


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out is None:
        print(text, end="" if text.endswith("\n") else "\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


def _schema_turtle(graph: Graph) -> str:
    doc = Document(graph=graph, prefixes=PrefixMap(schema_prefixes()))
    return serialize_turtle(doc)


def _cmd_derive_schema(args: argparse.Namespace) -> int:
    if args.triads is not None:
        tpath = Path(args.triads)
        if not tpath.exists():
            raise CliError(f"no such file: {args.triads}")
        triads = _parse_triads(tpath.read_text(encoding="utf-8"))
    else:
        triads = hat.default_triads()
    if args.decisions is not None:
        dpath = Path(args.decisions)
        if not dpath.exists():
            raise CliError(f"no such file: {args.decisions}")
        table = hat.parse_decision_table(dpath.read_text(encoding="utf-8"))
    else:
        table = hat.default_decision_table()

    impl = hat.implication_table(triads, hat.default_use_cases()) if triads == hat.default_triads() else None
    candidates = hat.candidate_relations(triads)
    pairs, stats = hat.dedupe_pairs(candidates)
    final = hat.full_relation_set(hat.apply_decisions(pairs, table))
    schema = hat.derive_schema(triads, table)

    if impl is not None:
        print(impl.render())
        print()
    if stats.triads != 12:
        print(f"note: {stats.triads} triads in play", file=sys.stderr)
    print(f"{stats.summary()} final={len(final)}")
    if args.out is not None:
        Path(args.out).write_text(_schema_turtle(schema_to_graph(schema)), encoding="utf-8")
        print(f"schema written to {args.out}", file=sys.stderr)
    return EXIT_OK


def _parse_triads(text: str) -> set:
    triads = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        poles = [hat.Pole.parse(p) for p in line.split(",")]
        try:
            triads.add(hat.triad(*poles))
        except ValueError as exc:
            raise CliError(f"triads file line {lineno}: {exc}") from exc
    return triads


def _cmd_export_alignment(args: argparse.Namespace) -> int:
    from .schema import export_alignment

    schema = _load_schema(args.schema)
    _write_or_print(_schema_turtle(export_alignment(schema)), args.out)
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    doc = _merge_files(args.files)
    graph = doc.graph
    by_class: dict[str, int] = {}
    for t in graph.match(predicate=Iri(RDF_TYPE)):
        if isinstance(t.object, Iri):
            by_class[t.object.value] = by_class.get(t.object.value, 0) + 1
    by_predicate: dict[str, int] = {}
    for t in graph:
        by_predicate[t.predicate.value] = by_predicate.get(t.predicate.value, 0) + 1
    if args.format == "json":
        print(
            json.dumps(
                {
                    "triples": len(graph),
                    "instancesByClass": dict(sorted(by_class.items())),
                    "triplesByPredicate": dict(sorted(by_predicate.items())),
                },
                indent=2,
            )
        )
    else:
        print(f"triples: {len(graph)}")
        print("instances by class:")
        for iri, n in sorted(by_class.items()):
            print(f"  {iri}: {n}")
        print("triples by predicate:")
        for iri, n in sorted(by_predicate.items()):
            print(f"  {iri}: {n}")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(
        port=args.port,
        data_path=args.data,
        schema_path=args.schema,
        validate_writes=not args.no_validate,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontosoc", description="Sociocultural knowledge-base engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check data files against the schema")
    p.add_argument("files", nargs="+")
    p.add_argument("--schema")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("query", help="evaluate a query over data files")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--query")
    src.add_argument("--file")
    p.add_argument("files", nargs="+")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("derive-schema", help="run the triad-analysis pipeline")
    p.add_argument("--triads")
    p.add_argument("--decisions")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_derive_schema)

    p = sub.add_parser("export-alignment", help="write the alignment triples")
    p.add_argument("--schema")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_export_alignment)

    p = sub.add_parser("stats", help="triple, class and predicate counts")
    p.add_argument("files", nargs="+")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("serve", help="run the HTTP knowledge-base service")
    p.add_argument("--port", type=int, default=7474)
    p.add_argument("--data")
    p.add_argument("--schema")
    p.add_argument("--no-validate", action="store_true")
    p.set_defaults(func=_cmd_serve)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ParseError, QueryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
