"""Command-line front door.

Subcommands: citations, graph, metrics, communities, analyze, synth,
export.  Exit codes: 0 success, 1 usage error, 2 input/schema error,
3 numerical error.  File formats are documented in docs/formats.md.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .citations import extract_all
from .communities import (
    SpectralConfig,
    book_profile,
    community_graph_export,
    community_graph_graphml,
    spectral_partition,
)
from .corpus import Corpus, load_corpus
from .errors import CodexGraphError, NumericalError
from .export import (
    degree_distribution_to_csv,
    graph_to_csv,
    graph_to_dot,
    graph_to_graphml,
    graph_to_json,
    references_to_csv,
)
from .graph import build_graph, greatest_component
from .metrics import metrics_report
from .pipeline import (
    AnalysisConfig,
    round_floats,
    partition_to_dict,
    report_to_json,
    run_pipeline,
    stage_seed,
)
from .synth import SynthSpec, synth_corpus

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_output(text: str, out: str | None, quiet: bool) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        if not quiet:
            print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _load(path: str) -> Corpus:
    try:
        content = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CodexGraphError(f"cannot read {path}: {exc}") from None
    return load_corpus(content)


def _analysis_graph(corpus: Corpus, which: str):
    graph = build_graph(corpus, extract_all(corpus))
    return greatest_component(graph) if which == "greatest" else graph


def _cmd_citations(args) -> int:
    corpus = _load(args.corpus)
    _write_output(references_to_csv(extract_all(corpus)), args.out, args.quiet)
    return EXIT_OK


def _cmd_graph(args) -> int:
    corpus = _load(args.corpus)
    graph = _analysis_graph(corpus, args.component)
    exporters = {
        "graphml": lambda: graph_to_graphml(graph, corpus),
        "dot": lambda: graph_to_dot(graph, corpus),
        "json": lambda: graph_to_json(graph, corpus),
        "csv": lambda: graph_to_csv(graph),
    }
    _write_output(exporters[args.format](), args.out, args.quiet)
    return EXIT_OK


def _cmd_metrics(args) -> int:
    corpus = _load(args.corpus)
    graph = _analysis_graph(corpus, args.component)
    report = metrics_report(
        graph,
        baseline_samples=args.baseline_samples,
        seed=stage_seed(args.seed, "baseline"),
        c_policy=args.c_policy,
    )
    doc = round_floats(
        {
            "n": report.n,
            "m": report.m,
            "density": report.density,
            "char_path_length": report.char_path_length,
            "clustering": report.clustering,
            "c_policy": report.c_policy,
            "baseline": vars(report.baseline),
            "small_world": vars(report.small_world),
            "degree_distribution": {
                "points": [list(p) for p in report.degree_dist.points],
                "tail_slope": report.degree_dist.tail_slope,
            },
        }
    )
    _write_output(json.dumps(doc, indent=2) + "\n", args.out, args.quiet)
    if args.csv:
        Path(args.csv).write_text(
            degree_distribution_to_csv(report.degree_dist), encoding="utf-8"
        )
        if not args.quiet:
            print(f"wrote {args.csv}", file=sys.stderr)
    return EXIT_OK


def _communities_config(args) -> SpectralConfig:
    k = args.k
    if k != "auto":
        try:
            k = int(k)
        except ValueError:
            raise CodexGraphError(f"--k must be 'auto' or an integer, got {k!r}") from None
    return SpectralConfig(
        centrals_removed=args.centrals,
        k=k,
        eigengap_max_k=args.eigengap_max_k,
        kmeans_restarts=args.restarts,
        seed=stage_seed(args.seed, "clustering"),
        weighted=args.weighted,
    )


def _cmd_communities(args) -> int:
    corpus = _load(args.corpus)
    graph = _analysis_graph(corpus, args.component)
    config = _communities_config(args)
    partition, embedding, chosen_k = spectral_partition(graph, config)
    table = book_profile(partition, corpus)
    doc = round_floats(
        {
            "config": {
                "centrals_removed": config.centrals_removed,
                "k": args.k,
                "chosen_k": chosen_k,
                "eigengap_max_k": config.eigengap_max_k,
                "kmeans_restarts": config.kmeans_restarts,
                "seed": args.seed,
                "weighted": config.weighted,
            },
            "eigenvalues": [round(v, 9) for v in embedding.eigenvalues] if embedding else None,
            **partition_to_dict(partition, table),
        }
    )
    _write_output(json.dumps(doc, indent=2) + "\n", args.out, args.quiet)
    if args.community_graph:
        Path(args.community_graph).write_text(
            community_graph_export(partition), encoding="utf-8"
        )
        if not args.quiet:
            print(f"wrote {args.community_graph}", file=sys.stderr)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    corpus = _load(args.corpus)
    k = args.k
    if k != "auto":
        try:
            k = int(k)
        except ValueError:
            raise CodexGraphError(f"--k must be 'auto' or an integer, got {k!r}") from None
    config = AnalysisConfig(
        seed=args.seed,
        baseline_samples=args.baseline_samples,
        c_policy=args.c_policy,
        centrals_removed=args.centrals,
        communities_k=k,
        kmeans_restarts=args.restarts,
        weighted_laplacian=args.weighted,
    )
    report = run_pipeline(corpus, config)
    _write_output(report_to_json(report), args.out, args.quiet)
    return EXIT_OK


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        books=args.books,
        chapters_per_book=args.chapters_per_book,
        articles_per_chapter=args.articles_per_chapter,
        p_in=args.p_in,
        p_out=args.p_out,
        hub_count=args.hub_count,
        hub_degree=args.hub_degree,
        seed=stage_seed(args.seed, "synth"),
    )
    document, blocks = synth_corpus(spec)
    _write_output(json.dumps(document, indent=2, ensure_ascii=False) + "\n", args.out, args.quiet)
    blocks_path = args.blocks or (args.out + ".blocks.json" if args.out else None)
    if blocks_path:
        sidecar = {"schema": "codexgraph-synth-blocks-v1", "blocks": blocks}
        Path(blocks_path).write_text(
            json.dumps(sidecar, indent=2) + "\n", encoding="utf-8"
        )
        if not args.quiet:
            print(f"wrote {blocks_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_export(args) -> int:
    corpus = _load(args.corpus)
    graph = _analysis_graph(corpus, args.component)
    if args.what == "graph":
        exporters = {
            "graphml": lambda: graph_to_graphml(graph, corpus),
            "dot": lambda: graph_to_dot(graph, corpus),
            "json": lambda: graph_to_json(graph, corpus),
            "csv": lambda: graph_to_csv(graph),
        }
        _write_output(exporters[args.format](), args.out, args.quiet)
        return EXIT_OK

    config = SpectralConfig(seed=stage_seed(args.seed, "clustering"))
    partition, _, _ = spectral_partition(graph, config)
    table = book_profile(partition, corpus)
    if args.format == "dot":
        text = community_graph_export(partition)
    elif args.format == "graphml":
        text = community_graph_graphml(partition)
    elif args.format == "json":
        text = json.dumps(round_floats(partition_to_dict(partition, table)), indent=2) + "\n"
    else:
        lines = ["vertex,community"]
        lines += [f"{v},{c}" for v, c in sorted(partition.assignment.items())]
        text = "\n".join(lines) + "\n"
    _write_output(text, args.out, args.quiet)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all random stages")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")

    parser = _Parser(prog="codexgraph", description=__doc__)
    parser.add_argument("--version", action="version", version=f"codexgraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("citations", parents=[common], help="extract and resolve references")
    p.add_argument("corpus")
    p.set_defaults(func=_cmd_citations)

    p = sub.add_parser("graph", parents=[common], help="export the reference network")
    p.add_argument("corpus")
    p.add_argument("--component", choices=["full", "greatest"], default="full")
    p.add_argument("--format", choices=["graphml", "dot", "json", "csv"], default="graphml")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("metrics", parents=[common], help="small-world indices and baseline")
    p.add_argument("corpus")
    p.add_argument("--component", choices=["full", "greatest"], default="greatest")
    p.add_argument("--baseline-samples", type=int, default=30)
    p.add_argument("--c-policy", choices=["exclude", "zero"], default="exclude")
    p.add_argument("--csv", default=None, help="also write the degree distribution CSV here")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("communities", parents=[common], help="spectral community detection")
    p.add_argument("corpus")
    p.add_argument("--component", choices=["full", "greatest"], default="greatest")
    p.add_argument("--centrals", type=int, default=8)
    p.add_argument("--k", default="auto")
    p.add_argument("--eigengap-max-k", type=int, default=40)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--community-graph", default=None, help="write the community DOT here")
    p.set_defaults(func=_cmd_communities)

    p = sub.add_parser("analyze", parents=[common], help="full pipeline report")
    p.add_argument("corpus")
    p.add_argument("--baseline-samples", type=int, default=30)
    p.add_argument("--c-policy", choices=["exclude", "zero"], default="exclude")
    p.add_argument("--centrals", type=int, default=8)
    p.add_argument("--k", default="auto")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--weighted", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic corpus")
    p.add_argument("--books", type=int, default=4)
    p.add_argument("--chapters-per-book", type=int, default=1)
    p.add_argument("--articles-per-chapter", type=int, default=30)
    p.add_argument("--p-in", type=float, default=0.3)
    p.add_argument("--p-out", type=float, default=0.01)
    p.add_argument("--hub-count", type=int, default=0)
    p.add_argument("--hub-degree", type=int, default=0)
    p.add_argument("--blocks", default=None, help="sidecar path for ground-truth blocks")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("export", parents=[common], help="export graph or partition documents")
    p.add_argument("corpus")
    p.add_argument("--what", choices=["graph", "partition"], default="graph")
    p.add_argument("--component", choices=["full", "greatest"], default="full")
    p.add_argument("--format", choices=["graphml", "dot", "json", "csv"], default="graphml")
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"codexgraph: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CodexGraphError as exc:
        print(f"codexgraph: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
