"""Frozen expectations for the bundled minicode fixture.

The constants here were computed by an independent audit script (JSON
walking, fresh BFS, brute-force shortest-path enumeration) before being
frozen; the tests assert the library reproduces them.
"""

import pytest

from codexgraph.communities import SpectralConfig, book_profile, community_graph_export, spectral_partition
from codexgraph.export import degree_distribution_to_csv
from codexgraph.graph import greatest_component
from codexgraph.metrics import betweenness, betweenness_table, degree_distribution
from codexgraph.pipeline import AnalysisConfig, report_to_json, run_pipeline, stage_seed

from .conftest import GOLDEN

BETWEENNESS_TOP3 = [
    ("L121-1", 3415 / 3, 7),
    ("L211-1", 2083 / 2, 6),
    ("L411-1", 913.0, 6),
]


def test_betweenness_top_rows_frozen(minicode_graph):
    rows = betweenness_table(betweenness(minicode_graph), 3)
    for got, expected in zip(rows, BETWEENNESS_TOP3):
        assert got[0] == expected[0]
        assert got[1] == pytest.approx(expected[1], abs=1e-9)
        assert got[2] == expected[2]


def test_low_degree_high_betweenness_pattern(minicode_graph):
    # the fixture reproduces the "low degree yet central" phenomenon
    rows = betweenness_table(betweenness(minicode_graph), 8)
    degrees = {v: d for v, _, d in rows}
    assert min(degrees.values()) <= 3


def test_degree_distribution_golden_csv(minicode_graph):
    giant = greatest_component(minicode_graph)
    csv_text = degree_distribution_to_csv(degree_distribution(giant))
    golden = GOLDEN.joinpath("minicode_degdist.csv").read_text(encoding="utf-8")
    assert csv_text == golden


def test_partition_golden_dot(minicode, minicode_graph):
    giant = greatest_component(minicode_graph)
    config = SpectralConfig(
        centrals_removed=8, k="auto", seed=stage_seed(42, "clustering")
    )
    partition, _, _ = spectral_partition(giant, config)
    book_profile(partition, minicode)
    dot = community_graph_export(partition)
    golden = GOLDEN.joinpath("minicode_communities.dot").read_text(encoding="utf-8")
    assert dot == golden


def test_analysis_report_golden(minicode):
    report = run_pipeline(minicode, AnalysisConfig(seed=42))
    golden = GOLDEN.joinpath("minicode_report.json").read_text(encoding="utf-8")
    assert report_to_json(report) == golden


def test_fixture_is_small_world(minicode):
    # the fixture's greatest component was planted to be a small world
    report = run_pipeline(minicode, AnalysisConfig(seed=42, baseline_samples=10))
    verdict = report.metrics.small_world
    assert verdict.is_small_world
    assert verdict.c_ratio > 10
