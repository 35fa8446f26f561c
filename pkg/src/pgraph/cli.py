"""`pg` command line: build graphs from .ll files, process corpora into
training bundles, inspect stats, and debug numeric embeddings.

Exit codes: 0 success, 1 parse/semantic failure, 2 I/O or usage errors.
Configuration precedence: flags > environment (PG_SEED, PG_EMBED_DIM) >
defaults (seed 42, k 40).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .builder import UnresolvedReference
from .embedding import (
    DEFAULT_K,
    DEFAULT_SEED,
    Aggregation,
    EmbeddingTable,
    LiteralTooLong,
    NonNumeric,
    embed_number,
)
from .export import (
    SchemaError,
    build_vocab,
    from_json,
    to_dot,
    to_hetero_bundle,
    to_json,
    write_bundle,
    write_vocab,
)
from .graph import stats
from .parser import IrParseError, parse_module
from .transforms import TransformConfig, build_program_graph

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IO = 2


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        print(f"pg: invalid integer in ${name}: {raw!r}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from None


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return _env_int("PG_SEED", DEFAULT_SEED)


def _resolve_k(args) -> int:
    if getattr(args, "k", None) is not None:
        return args.k
    return _env_int("PG_EMBED_DIM", DEFAULT_K)


def _add_transform_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--no-unify", action="store_true", help="keep per-use memory identifier nodes")
    sub.add_argument("--no-store-edges", action="store_true", help="skip store-modification edges")
    sub.add_argument("--no-numeric", action="store_true", help="skip numeric value attachment")
    sub.add_argument("--no-aggregate", action="store_true", help="skip aggregate type chains")
    sub.add_argument("--lenient", action="store_true", help="degrade unknown IR constructs instead of failing")


def _config_from_args(parser: argparse.ArgumentParser, args) -> TransformConfig:
    try:
        return TransformConfig(
            unify_identifiers=not args.no_unify,
            store_modify_edges=not args.no_store_edges,
            numeric_values=not args.no_numeric,
            aggregate_chains=not args.no_aggregate,
        )
    except ValueError as exc:
        parser.error(str(exc))  # exits 2


def _config_dict(config: TransformConfig) -> dict:
    return {
        "unify_identifiers": config.unify_identifiers,
        "store_modify_edges": config.store_modify_edges,
        "numeric_values": config.numeric_values,
        "aggregate_chains": config.aggregate_chains,
    }


def _print_warnings(diags) -> None:
    for line, message in diags.warnings:
        print(f"pg: warning: line {line}: {message}", file=sys.stderr)


def cmd_build(parser: argparse.ArgumentParser, args) -> int:
    config = _config_from_args(parser, args)
    mode = "lenient" if args.lenient else "strict"
    source = Path(args.input)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"pg: cannot read {source}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        module, diags = parse_module(text, mode)
        _print_warnings(diags)
        graph = build_program_graph(module, config)
    except (IrParseError, UnresolvedReference) as exc:
        print(f"pg: {source}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    outdir = Path(args.output) if args.output else source.parent
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / f"{source.stem}.pg.json").write_bytes(to_json(graph))
        if args.dot:
            with open(outdir / f"{source.stem}.dot", "w", encoding="utf-8", newline="\n") as fh:
                fh.write(to_dot(graph))
    except OSError as exc:
        print(f"pg: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _corpus_parse_one(task: tuple[str, str, str, tuple[bool, bool, bool, bool]]):
    name, text, mode, config_values = task
    try:
        module, diags = parse_module(text, mode)
        graph = build_program_graph(module, TransformConfig(*config_values))
        return name, "ok", graph, len(diags.warnings)
    except (IrParseError, UnresolvedReference) as exc:
        return name, "error", None, str(exc)


def cmd_corpus(parser: argparse.ArgumentParser, args) -> int:
    config = _config_from_args(parser, args)
    mode = "lenient" if args.lenient else "strict"
    seed = _resolve_seed(args)
    k = _resolve_k(args)
    indir = Path(args.input)
    if not indir.is_dir():
        print(f"pg: not a directory: {indir}", file=sys.stderr)
        return EXIT_IO
    files = sorted(indir.glob("*.ll"))
    if not files:
        print(f"pg: no .ll files in {indir}", file=sys.stderr)
        return EXIT_FAIL

    config_values = (
        config.unify_identifiers,
        config.store_modify_edges,
        config.numeric_values,
        config.aggregate_chains,
    )
    tasks = []
    for path in files:
        try:
            tasks.append((path.name, path.read_text(encoding="utf-8"), mode, config_values))
        except OSError as exc:
            print(f"pg: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_IO
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_corpus_parse_one, tasks))
    else:
        results = [_corpus_parse_one(task) for task in tasks]

    failures = [(name, detail) for name, status, _, detail in results if status == "error"]
    if failures and not args.keep_going:
        name, detail = failures[0]
        print(f"pg: {name}: {detail}", file=sys.stderr)
        return EXIT_FAIL
    if len(failures) == len(results):
        for name, detail in failures:
            print(f"pg: {name}: {detail}", file=sys.stderr)
        return EXIT_FAIL

    outdir = Path(args.output)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        graphs = [graph for _, status, graph, _ in results if status == "ok"]
        vocab = build_vocab(graphs, min_count=args.min_count, seed=seed, k=k)
        vocab_sha = write_vocab(vocab, outdir / "vocab.json")
        manifest_files = []
        for name, status, graph, detail in results:
            if status == "error":
                print(f"pg: {name}: {detail}", file=sys.stderr)
                manifest_files.append({"file": name, "status": "error", "error": str(detail)})
                continue
            stem = Path(name).stem
            (outdir / f"{stem}.pg.json").write_bytes(to_json(graph))
            if args.dot:
                with open(outdir / f"{stem}.dot", "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(to_dot(graph))
            bundle = to_hetero_bundle(graph, vocab, vocab_sha, source_path=name, config=_config_dict(config))
            write_bundle(bundle, outdir / f"{stem}.bundle")
            summary = stats(graph)
            manifest_files.append(
                {
                    "file": name,
                    "status": "ok",
                    "graph": f"{stem}.pg.json",
                    "bundle": f"{stem}.bundle",
                    "nodes": sum(summary["nodes"].values()),
                    "edges": sum(summary["edges"].values()),
                }
            )
        manifest = {
            "format_version": 1,
            "config": _config_dict(config),
            "seed": seed,
            "k": k,
            "min_count": args.min_count,
            "vocab": "vocab.json",
            "vocab_sha256": vocab_sha,
            "files": manifest_files,
        }
        with open(outdir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(manifest, indent=2, ensure_ascii=False) + "\n")
    except OSError as exc:
        print(f"pg: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_stats(parser: argparse.ArgumentParser, args) -> int:
    path = Path(args.input)
    try:
        data = path.read_bytes()
    except OSError as exc:
        print(f"pg: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        graph = from_json(data)
    except SchemaError as exc:
        print(f"pg: {path}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    summary = stats(graph)
    if args.json:
        print(json.dumps(summary, indent=2))
        return EXIT_OK
    width = max(len(name) for name in list(summary["nodes"]) + list(summary["edges"]))
    print(f"module: {graph.module_name}")
    print("node counts:")
    for name, count in summary["nodes"].items():
        print(f"  {name:<{width}}  {count}")
    print("edge counts:")
    for name, count in summary["edges"].items():
        print(f"  {name:<{width}}  {count}")
    print(f"max degree: {summary['max_degree']}")
    return EXIT_OK


def cmd_embed(parser: argparse.ArgumentParser, args) -> int:
    seed = _resolve_seed(args)
    k = _resolve_k(args)
    table = EmbeddingTable.minimal(seed=seed, k=k)
    agg = {"mean": Aggregation.MEAN, "max": Aggregation.MAX, "sum": Aggregation.SUM}[args.agg]
    try:
        vector = embed_number(args.number, table, agg)
    except (NonNumeric, LiteralTooLong) as exc:
        print(f"pg: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(" ".join(repr(float(x)) for x in vector))
    return EXIT_OK


def _build_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pg", description="LLVM IR program graph toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a graph from one .ll file")
    p_build.add_argument("input", help="input .ll file")
    p_build.add_argument("-o", "--output", help="output directory (default: alongside input)")
    p_build.add_argument("--dot", action="store_true", help="also write a DOT rendering")
    _add_transform_flags(p_build)
    p_build.set_defaults(func=cmd_build, parser=p_build)

    p_corpus = sub.add_parser("corpus", help="process a directory of .ll files into bundles")
    p_corpus.add_argument("input", help="directory containing .ll files")
    p_corpus.add_argument("-o", "--output", required=True, help="output directory")
    p_corpus.add_argument("--jobs", type=int, default=None, help="worker count (default: logical CPUs)")
    p_corpus.add_argument("--keep-going", action="store_true", help="record failures and continue")
    p_corpus.add_argument("--min-count", type=int, default=1, help="vocabulary frequency threshold")
    p_corpus.add_argument("--seed", type=int, default=None, help="embedding table seed (recorded in vocab.json)")
    p_corpus.add_argument("--k", type=int, default=None, help="embedding dimension (recorded in vocab.json)")
    p_corpus.add_argument("--dot", action="store_true", help="also write DOT renderings")
    _add_transform_flags(p_corpus)
    p_corpus.set_defaults(func=cmd_corpus, parser=p_corpus)

    p_stats = sub.add_parser("stats", help="summarize a .pg.json graph file")
    p_stats.add_argument("input", help="graph .pg.json file")
    p_stats.add_argument("--json", action="store_true", help="machine-readable output")
    p_stats.set_defaults(func=cmd_stats, parser=p_stats)

    p_embed = sub.add_parser("embed", help="print the embedding vector of a numeric literal")
    p_embed.add_argument("--number", required=True, help="numeric literal to embed")
    p_embed.add_argument("--k", type=int, default=None, help="embedding dimension")
    p_embed.add_argument("--seed", type=int, default=None, help="table seed")
    p_embed.add_argument("--agg", choices=("mean", "max", "sum"), default="mean", help="aggregation")
    p_embed.set_defaults(func=cmd_embed, parser=p_embed)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
        return args.func(args.parser, args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
