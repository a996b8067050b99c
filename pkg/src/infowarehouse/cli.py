"""Operator command line: validate schemas, replay scenarios, build indexes,
query, inspect context, emit profiles, export, and launch the service.

Exit codes: 0 success, 1 validation findings or operational failure,
2 usage error. ``--json`` switches stdout to machine-readable JSON;
human-readable diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .archive import Archive
from .config import load_config
from .errors import WarehouseError
from .retrieval import ScoringConfig, WorkContext, annotate_hits, build_index, contextual_search, search
from .scenario import load_script, replay
from .schema import parse_schema, validate_schema


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iw", description="granular information archive tooling")
    sub = parser.add_subparsers(dest="command", required=True)

    schema = sub.add_parser("schema", help="schema tooling")
    schema_sub = schema.add_subparsers(dest="schema_command", required=True)
    validate = schema_sub.add_parser("validate", help="parse and validate a schema document")
    validate.add_argument("file")
    validate.add_argument("--json", action="store_true")

    scenario = sub.add_parser("scenario", help="scenario tooling")
    scenario_sub = scenario.add_subparsers(dest="scenario_command", required=True)
    rep = scenario_sub.add_parser("replay", help="replay a scenario script into an archive")
    rep.add_argument("script")
    rep.add_argument("--archive", required=True)
    rep.add_argument("--seed", type=int, default=None,
                     help="deterministic id and timestamp assignment (for reproducible fixtures)")
    rep.add_argument("--json", action="store_true")

    index = sub.add_parser("index", help="index tooling")
    index_sub = index.add_subparsers(dest="index_command", required=True)
    build = index_sub.add_parser("build", help="build the postings index and write index.json")
    build.add_argument("--archive", required=True)
    build.add_argument("--stem", action="store_true")
    build.add_argument("--drop-stopwords", action="store_true")
    build.add_argument("--json", action="store_true")

    query = sub.add_parser("query", help="ranked search over element bodies")
    query.add_argument("text")
    query.add_argument("--archive", required=True)
    query.add_argument("--activity", help="activity category providing the work context")
    query.add_argument("--instance", help="task instance of the work context (default: last instance)")
    query.add_argument("--semantic", action="store_true")
    query.add_argument("--k", type=int, default=10)
    query.add_argument("--json", action="store_true")

    context = sub.add_parser("context", help="episodic context of an element")
    context.add_argument("element")
    context.add_argument("--archive", required=True)
    context.add_argument("--depth", type=int, default=1)
    context.add_argument("--json", action="store_true")

    profile = sub.add_parser("profile", help="expertise profile of an actor")
    profile.add_argument("actor")
    profile.add_argument("--archive", required=True)
    profile.add_argument("--json", action="store_true")

    export = sub.add_parser("export", help="canonical archive export to stdout")
    export.add_argument("--archive", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", default=None, help="config file (or IW_CONFIG env var)")

    return parser


def _cmd_schema_validate(args) -> int:
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return 1
    try:
        schema = parse_schema(text)
    except WarehouseError as exc:
        if args.json:
            print(json.dumps({"ok": False, "findings": [
                {"severity": "error", "code": exc.code, "message": exc.message, "subject": ""}
            ]}))
        else:
            print(f"error [{exc.code}] {exc.message}", file=sys.stderr)
        return 1
    report = validate_schema(schema)
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        for finding in report.findings:
            print(f"{finding.severity} [{finding.code}] {finding.message}", file=sys.stderr)
        if report.ok:
            print(f"{schema.id} v{schema.version}: ok "
                  f"({len(schema.activities)} activities, {len(schema.contents)} content categories)")
    return 0 if report.ok else 1


def _cmd_scenario_replay(args) -> int:
    script = load_script(args.script)
    archive = Archive.open(args.archive, seed=args.seed)
    try:
        mapping = replay(archive, script, base_dir=Path(args.script).parent)
    finally:
        archive.close()
    if args.json:
        print(json.dumps({"archive": args.archive, "seq": archive.seq, "ids": mapping}))
    else:
        print(f"replayed {len(script['steps'])} steps into {args.archive} (seq {archive.seq})")
        for symbol, real in mapping.items():
            print(f"  {symbol} -> {real}")
    return 0


def _cmd_index_build(args) -> int:
    archive = Archive.open(args.archive)
    index = build_index(archive, stem=args.stem, drop_stopwords=args.drop_stopwords)
    out_path = Path(args.archive) / "index.json"
    out_path.write_text(index.canonical_serialization(), encoding="utf-8")
    archive.close()
    if args.json:
        print(json.dumps({"built_at_seq": index.built_at_seq, "doc_count": index.N, "path": str(out_path)}))
    else:
        print(f"indexed {index.N} elements at seq {index.built_at_seq} -> {out_path}")
    return 0


def _resolve_context(archive: Archive, args) -> WorkContext:
    if args.instance:
        instance = archive.instance(args.instance)
        schema = archive.schema_for_instance(instance.id)
        return WorkContext(instance.id, args.activity, schema.id, schema.version)
    # Default: the lexicographically last instance whose schema knows the category.
    for instance in reversed(archive.instances()):
        schema = archive.schema_for_instance(instance.id)
        if args.activity in schema.activity_ids():
            return WorkContext(instance.id, args.activity, schema.id, schema.version)
    raise WarehouseError("unresolvable_context", f"no instance with activity category {args.activity!r}")


def _cmd_query(args) -> int:
    archive = Archive.open(args.archive)
    index = build_index(archive)
    if args.activity:
        ctx = _resolve_context(archive, args)
        schema = archive.get_schema(ctx.schema_id, ctx.schema_version)
        hits = contextual_search(index, schema, args.text, ctx, args.k, semantic=args.semantic,
                                 config=ScoringConfig())
    else:
        hits = search(index, args.text, args.k)
    hits = annotate_hits(archive, hits)
    archive.close()
    if args.json:
        print(json.dumps({"hits": [h.to_dict() for h in hits]}))
    else:
        if not hits:
            print("no matches")
        for rank, hit in enumerate(hits, start=1):
            badge = " [boosted]" if hit.boosted else ""
            category = hit.links.category if hit.links else "?"
            print(f"{rank}. {hit.ie} ({category}) score={hit.score:.6f}{badge}")
            print(f"   {hit.snippet}")
    return 0


def _cmd_context(args) -> int:
    archive = Archive.open(args.archive)
    subgraph = archive.episodic_context(args.element, args.depth)
    archive.close()
    if args.json:
        print(json.dumps(subgraph.to_dict()))
    else:
        for node in subgraph.nodes:
            marker = "*" if node.id == subgraph.focus else " "
            print(f"{marker} {node.id} ({node.category}) {node.direction} at depth {node.distance}")
        for edge in subgraph.edges:
            print(f"  {edge.from_element} -[{edge.kind}]-> {edge.to_element}")
    return 0


def _cmd_profile(args) -> int:
    archive = Archive.open(args.archive)
    report = archive.expertise_profile(args.actor)
    archive.close()
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        if not report.rows:
            print(f"no recorded work for {args.actor}")
        for row in report.rows:
            print(f"{row.schema_id} v{row.schema_version} / {row.activity_category} / "
                  f"{row.content_category}: {row.count} ({', '.join(row.evidence)})")
    return 0


def _cmd_export(args) -> int:
    archive = Archive.open(args.archive)
    sys.stdout.write(archive.canonical_export())
    archive.close()
    return 0


def _cmd_serve(args) -> int:  # pragma: no cover - long-running process
    from .service import serve

    serve(load_config(args.config))
    return 0


def run_cli(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "schema":
            return _cmd_schema_validate(args)
        if args.command == "scenario":
            return _cmd_scenario_replay(args)
        if args.command == "index":
            return _cmd_index_build(args)
        if args.command == "query":
            return _cmd_query(args)
        if args.command == "context":
            return _cmd_context(args)
        if args.command == "profile":
            return _cmd_profile(args)
        if args.command == "export":
            return _cmd_export(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except WarehouseError as exc:
        print(f"error [{exc.code}] {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
