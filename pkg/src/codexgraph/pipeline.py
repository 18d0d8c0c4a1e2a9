"""Full-pipeline orchestration and report assembly.

One seed stream drives every random stage: the user seed is split into
per-stage seeds by fixed labels (baseline, clustering, synth), so adding
a stage never shifts another stage's randomness and two runs with the
same corpus, config and seed produce byte-identical reports.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

from . import __version__
from .citations import ExtractionReport, extract_all
from .communities import Partition, SpectralConfig, book_profile, spectral_partition
from .corpus import Corpus, census, serialize
from .graph import (
    Graph,
    build_graph,
    components,
    degree_table,
    greatest_component,
    isolated_census,
)
from .metrics import (
    DEFAULT_C_RATIO_MIN,
    DEFAULT_L_RATIO_MAX,
    DEFAULT_RICH_CLUB_THRESHOLD,
    MetricsReport,
    betweenness,
    betweenness_table,
    metrics_report,
    rich_club_check,
)


def stage_seed(seed: int, label: str) -> int:
    """Derive a per-stage seed from the user seed and a fixed stage label."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def round_sig(x: float, digits: int = 12) -> float:
    """Trim floats for report output so serialization is byte-stable."""
    return float(f"{x:.{digits}g}")


@dataclass
class AnalysisConfig:
    seed: int = 0
    baseline_samples: int = 30
    c_policy: str = "exclude"
    l_ratio_max: float = DEFAULT_L_RATIO_MAX
    c_ratio_min: float = DEFAULT_C_RATIO_MIN
    degree_table_k: int = 9
    betweenness_table_k: int = 8
    rich_club_k: int = 8
    rich_club_threshold: float = DEFAULT_RICH_CLUB_THRESHOLD
    centrals_removed: int = 8
    communities_k: int | str = "auto"
    eigengap_max_k: int = 40
    kmeans_restarts: int = 8
    weighted_laplacian: bool = False
    k_min_fit: int = 1
    k_max_fit: int | None = None

    def echo(self) -> dict:
        return asdict(self)

    def config_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.echo(), sort_keys=True).encode()
        ).hexdigest()[:16]


@dataclass
class AnalysisReport:
    version: str
    corpus_fingerprint: str
    config: dict
    config_hash: str
    census: dict
    component_sizes: list[int]
    isolated: tuple[int, int, int]
    citations: dict
    status: str
    metrics: MetricsReport | None = None
    degree_table: list | None = None
    betweenness_table: list | None = None
    rich_club: object = None
    partition: Partition | None = None
    community_table: list | None = None
    eigenvalues: list[float] | None = None
    chosen_k: int | None = None
    graph: Graph | None = field(default=None, repr=False)
    analyzed_component: Graph | None = field(default=None, repr=False)


def corpus_fingerprint(corpus: Corpus) -> str:
    canonical = json.dumps(serialize(corpus), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode()).hexdigest()


def citation_summary(refs: ExtractionReport) -> dict:
    return {
        "resolved": len(refs.resolved),
        "external_dropped": len(refs.external_dropped),
        "unparsed": len(refs.unparsed),
        "self_refs": refs.self_refs,
    }


def run_pipeline(corpus: Corpus, config: AnalysisConfig) -> AnalysisReport:
    """Extract -> build -> greatest component -> metrics -> communities."""
    refs = extract_all(corpus)
    full_graph = build_graph(corpus, refs)
    decomp = components(full_graph)
    giant = greatest_component(full_graph)

    report = AnalysisReport(
        version=__version__,
        corpus_fingerprint=corpus_fingerprint(corpus),
        config=config.echo(),
        config_hash=config.config_hash(),
        census=census(corpus),
        component_sizes=decomp.sizes,
        isolated=isolated_census(full_graph, corpus),
        citations=citation_summary(refs),
        status="ok",
        graph=full_graph,
        analyzed_component=giant,
    )

    if giant.n < 2:
        report.status = (
            f"greatest component has {giant.n} vertex(es); "
            "metrics and communities skipped"
        )
        return report

    report.metrics = metrics_report(
        giant,
        baseline_samples=config.baseline_samples,
        seed=stage_seed(config.seed, "baseline"),
        c_policy=config.c_policy,
        l_ratio_max=config.l_ratio_max,
        c_ratio_min=config.c_ratio_min,
        k_min_fit=config.k_min_fit,
        k_max_fit=config.k_max_fit,
    )
    report.degree_table = degree_table(giant, config.degree_table_k)
    scores = betweenness(giant)
    report.betweenness_table = betweenness_table(scores, config.betweenness_table_k)
    if giant.n >= 2:
        report.rich_club = rich_club_check(
            giant, min(config.rich_club_k, giant.n), config.rich_club_threshold
        )

    spectral_config = SpectralConfig(
        centrals_removed=min(config.centrals_removed, giant.n),
        k=config.communities_k,
        eigengap_max_k=config.eigengap_max_k,
        kmeans_restarts=config.kmeans_restarts,
        seed=stage_seed(config.seed, "clustering"),
        weighted=config.weighted_laplacian,
    )
    partition, embedding, chosen_k = spectral_partition(giant, spectral_config, scores=scores)
    report.partition = partition
    report.community_table = book_profile(partition, corpus)
    report.eigenvalues = (
        [round_sig(v, 9) for v in embedding.eigenvalues] if embedding else None
    )
    report.chosen_k = chosen_k
    return report


def round_floats(value, digits: int = 12):
    if isinstance(value, float):
        return round_sig(value, digits)
    if isinstance(value, dict):
        return {k: round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    return value


def report_to_dict(report: AnalysisReport) -> dict:
    """Plain-JSON view of the report, floats trimmed for stability."""
    doc: dict = {
        "version": report.version,
        "corpus_fingerprint": report.corpus_fingerprint,
        "config": report.config,
        "config_hash": report.config_hash,
        "status": report.status,
        "census": report.census,
        "component_sizes": report.component_sizes,
        "isolated": {
            "total": report.isolated[0],
            "headings": report.isolated[1],
            "articles": report.isolated[2],
        },
        "citations": report.citations,
    }
    if report.metrics is None:
        doc["metrics"] = None
    else:
        m = report.metrics
        doc["metrics"] = {
            "n": m.n,
            "m": m.m,
            "density": m.density,
            "char_path_length": m.char_path_length,
            "clustering": m.clustering,
            "c_policy": m.c_policy,
            "baseline": asdict(m.baseline),
            "small_world": asdict(m.small_world),
            "degree_distribution": {
                "points": [list(p) for p in m.degree_dist.points],
                "tail_slope": m.degree_dist.tail_slope,
            },
        }
    doc["degree_table"] = (
        [list(row) for row in report.degree_table] if report.degree_table else None
    )
    doc["betweenness_table"] = (
        [list(row) for row in report.betweenness_table] if report.betweenness_table else None
    )
    doc["rich_club"] = asdict(report.rich_club) if report.rich_club else None
    doc["communities"] = partition_to_dict(report.partition, report.community_table)
    doc["eigenvalues"] = report.eigenvalues
    doc["chosen_k"] = report.chosen_k
    return round_floats(doc)


def partition_to_dict(partition: Partition | None, community_table=None) -> dict | None:
    if partition is None:
        return None
    table = community_table if community_table is not None else partition.communities
    return {
        "assignment": dict(sorted(partition.assignment.items())),
        "communities": [
            {
                "id": c.id,
                "size": c.size,
                "members": c.members,
                "book_fractions": c.book_fractions,
                "dominant_book": c.dominant_book,
                "dominant_fraction": c.dominant_fraction,
                "colored": c.colored,
            }
            for c in table
        ],
        "central_vertices": [
            {"vertex": a.vertex, "adjacent_communities": a.adjacent_communities}
            for a in partition.central_vertices
        ],
        "inter_edges": [
            {"a": a, "b": b, "edges": count, "citations": partition.inter_citations.get((a, b), count)}
            for (a, b), count in sorted(partition.inter_edges.items())
        ],
    }


def report_to_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"
