"""Structural indices of the reference network.

Covers density, characteristic path length (median over vertices of the
mean shortest-path distance), clustering coefficient (mean neighborhood
density), the cumulative degree distribution, Freeman betweenness via
Brandes' accumulation, the rich-club test, and an Erdős–Rényi G(n, m)
baseline for the small-world comparison.
"""

from __future__ import annotations

import bisect
import math
import random
import statistics
from collections import deque
from dataclasses import dataclass, field

from .errors import DomainError
from .graph import Graph, _assemble, components, degree_table, induced_subgraph

DEFAULT_L_RATIO_MAX = 2.0
DEFAULT_C_RATIO_MIN = 10.0
DEFAULT_RICH_CLUB_THRESHOLD = 0.5


def density_from_counts(n: int, m: int) -> float:
    """d = 2m / [n(n-1)]."""
    if n < 2:
        raise DomainError("density requires at least two vertices")
    return 2.0 * m / (n * (n - 1))


def density(graph: Graph) -> float:
    return density_from_counts(graph.n, graph.m)


def _bfs_distances(graph: Graph, source: int) -> list[int]:
    dist = [-1] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v]
        for w in graph.adjacency[v]:
            if dist[w] < 0:
                dist[w] = dv + 1
                queue.append(w)
    return dist


def characteristic_path_length(graph: Graph) -> float:
    """Median over vertices of the mean hop distance to all other vertices."""
    if graph.n < 2:
        raise DomainError("characteristic path length requires at least two vertices")
    means = []
    for source in range(graph.n):
        dist = _bfs_distances(graph, source)
        if any(d < 0 for d in dist):
            raise DomainError("graph is disconnected; extract a component first")
        means.append(sum(dist) / (graph.n - 1))
    return statistics.median(means)


def clustering_coefficient(graph: Graph, low_degree_policy: str = "exclude") -> float:
    """Mean of the edge densities of vertex neighborhoods.

    Vertices of degree < 2 have an undefined local coefficient; the policy
    either excludes them from the mean or counts them as zero.
    """
    if low_degree_policy not in ("exclude", "zero"):
        raise DomainError(f"unknown low-degree policy: {low_degree_policy!r}")
    locals_ = []
    neighbor_sets = [set(adj) for adj in graph.adjacency]
    for v in range(graph.n):
        deg = graph.degree(v)
        if deg < 2:
            if low_degree_policy == "zero":
                locals_.append(0.0)
            continue
        links = 0
        neighbors = graph.adjacency[v]
        for idx, a in enumerate(neighbors):
            set_a = neighbor_sets[a]
            for b in neighbors[idx + 1 :]:
                if b in set_a:
                    links += 1
        locals_.append(2.0 * links / (deg * (deg - 1)))
    if not locals_:
        raise DomainError("no vertex of degree >= 2; clustering coefficient undefined")
    return sum(locals_) / len(locals_)


@dataclass
class DegreeDistribution:
    """Empirical cumulative degree distribution.

    points: (k, count of vertices with degree exactly k, P(degree >= k))
    for every integer k between the minimum and maximum degree.
    loglog_points and tail_slope describe the log10 representation used
    to eyeball a power law; the slope is descriptive only.
    """

    points: list[tuple[int, int, float]]
    loglog_points: list[tuple[float, float]]
    tail_slope: float | None


def degree_distribution(graph: Graph, k_min_fit: int = 1, k_max_fit: int | None = None) -> DegreeDistribution:
    if graph.n < 1:
        raise DomainError("degree distribution of an empty graph")
    degrees = [graph.degree(i) for i in range(graph.n)]
    lo, hi = min(degrees), max(degrees)
    counts = {k: 0 for k in range(lo, hi + 1)}
    for d in degrees:
        counts[d] += 1

    points = []
    remaining = graph.n
    for k in range(lo, hi + 1):
        points.append((k, counts[k], remaining / graph.n))
        remaining -= counts[k]

    if k_max_fit is None:
        k_max_fit = hi
    loglog = []
    window = []
    for k, _, p in points:
        if k >= 1 and p > 0:
            pt = (math.log10(k), math.log10(p))
            loglog.append(pt)
            if k_min_fit <= k <= k_max_fit:
                window.append(pt)
    slope = _least_squares_slope(window) if len(window) >= 2 else None
    return DegreeDistribution(points=points, loglog_points=loglog, tail_slope=slope)


def _least_squares_slope(points: list[tuple[float, float]]) -> float:
    n = len(points)
    mean_x = sum(x for x, _ in points) / n
    mean_y = sum(y for _, y in points) / n
    sxx = sum((x - mean_x) ** 2 for x, _ in points)
    if sxx == 0:
        return 0.0
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in points)
    return sxy / sxx


@dataclass
class BetweennessScores:
    """Unnormalized Freeman betweenness, one score per vertex.

    Each unordered vertex pair {s, t} contributes sigma_st(v)/sigma_st to
    every interior vertex v; endpoints are excluded.
    """

    vertices: list[str]
    scores: list[float]
    degrees: list[int]

    def score_of(self, vertex_id: str) -> float:
        return self.scores[self.vertices.index(vertex_id)]


def betweenness(graph: Graph) -> BetweennessScores:
    """Brandes' accumulation algorithm; disconnected pairs contribute 0."""
    scores = [0.0] * graph.n
    adjacency = graph.adjacency
    for s in range(graph.n):
        # Single-source shortest-path DAG.
        dist = [-1] * graph.n
        sigma = [0] * graph.n
        preds: list[list[int]] = [[] for _ in range(graph.n)]
        dist[s] = 0
        sigma[s] = 1
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v]
            sv = sigma[v]
            for w in adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sv
                    preds[w].append(v)
        # Dependency accumulation in reverse BFS order.
        delta = [0.0] * graph.n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                scores[w] += delta[w]
    # Each unordered pair was counted from both endpoints.
    scores = [x / 2.0 for x in scores]
    return BetweennessScores(
        vertices=list(graph.vertices),
        scores=scores,
        degrees=[graph.degree(i) for i in range(graph.n)],
    )


def betweenness_table(scores: BetweennessScores, k: int) -> list[tuple[str, float, int]]:
    """Top-k rows (vertex, betweenness, degree); ties by vertex id."""
    ranked = sorted(
        zip(scores.vertices, scores.scores, scores.degrees),
        key=lambda row: (-row[1], row[0]),
    )
    return ranked[:k]


@dataclass
class RichClubResult:
    members: list[str]
    internal_edges: int
    internal_density: float
    is_rich_club: bool
    threshold: float


def rich_club_check(graph: Graph, k: int, threshold: float = DEFAULT_RICH_CLUB_THRESHOLD) -> RichClubResult:
    """Are the top-k degree vertices densely interconnected among themselves?"""
    if not 2 <= k <= graph.n:
        raise DomainError(f"rich-club size k={k} outside [2, {graph.n}]")
    members = [v for v, _ in degree_table(graph, k)]
    club = induced_subgraph(graph, members)
    internal_density = density_from_counts(club.n, club.m)
    return RichClubResult(
        members=members,
        internal_edges=club.m,
        internal_density=internal_density,
        is_rich_club=internal_density >= threshold,
        threshold=threshold,
    )


def sample_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniform simple graph with exactly n vertices and m edges."""
    if n < 0:
        raise DomainError("negative vertex count")
    max_edges = n * (n - 1) // 2
    if not 0 <= m <= max_edges:
        raise DomainError(f"m={m} outside [0, {max_edges}] for n={n}")
    rng = random.Random(seed)
    picks = rng.sample(range(max_edges), m)
    # Row offsets of the upper-triangle pair enumeration (0,1),(0,2),...
    offsets = []
    acc = 0
    for i in range(max(n - 1, 0)):
        offsets.append(acc)
        acc += n - 1 - i
    pair_counts = {}
    for idx in picks:
        i = bisect.bisect_right(offsets, idx) - 1
        j = i + 1 + (idx - offsets[i])
        pair_counts[(i, j)] = 1
    width = len(str(max(n - 1, 0)))
    vertices = [f"v{i:0{width}d}" for i in range(n)]
    return _assemble(vertices, pair_counts)


@dataclass
class BaselineStats:
    samples: int
    seed: int
    l_mean: float
    l_sd: float
    c_mean: float
    c_sd: float


def random_baseline(n: int, m: int, samples: int, seed: int) -> BaselineStats:
    """Small-world indices of G(n, m) samples.

    L is computed on each sample's greatest connected component, C on the
    whole sample with the exclude policy (0 when no vertex has degree 2).
    """
    if samples < 1:
        raise DomainError("need at least one baseline sample")
    rng = random.Random(seed)
    l_values, c_values = [], []
    for _ in range(samples):
        sample = sample_gnm(n, m, rng.getrandbits(63))
        giant = induced_subgraph(
            sample, [sample.vertices[i] for i in components(sample).members(0)]
        )
        l_values.append(characteristic_path_length(giant) if giant.n >= 2 else 0.0)
        try:
            c_values.append(clustering_coefficient(sample, "exclude"))
        except DomainError:
            c_values.append(0.0)
    return BaselineStats(
        samples=samples,
        seed=seed,
        l_mean=statistics.fmean(l_values),
        l_sd=statistics.pstdev(l_values),
        c_mean=statistics.fmean(c_values),
        c_sd=statistics.pstdev(c_values),
    )


@dataclass
class SmallWorldVerdict:
    l_value: float
    c_value: float
    l_ratio: float
    c_ratio: float
    is_small_world: bool
    l_ratio_max: float
    c_ratio_min: float


def small_world_verdict(
    l_value: float,
    c_value: float,
    baseline: BaselineStats,
    l_ratio_max: float = DEFAULT_L_RATIO_MAX,
    c_ratio_min: float = DEFAULT_C_RATIO_MIN,
) -> SmallWorldVerdict:
    """Compare observed L and C against the random baseline.

    Small world: L close to the baseline (ratio <= l_ratio_max) while C is
    far above it (ratio >= c_ratio_min).  A zero-clustering baseline makes
    the ratio infinite; the verdict then only requires C > 0.
    """
    l_ratio = l_value / baseline.l_mean if baseline.l_mean > 0 else math.inf
    if baseline.c_mean > 0:
        c_ratio = c_value / baseline.c_mean
        c_ok = c_ratio >= c_ratio_min
    else:
        c_ratio = math.inf if c_value > 0 else 0.0
        c_ok = c_value > 0
    return SmallWorldVerdict(
        l_value=l_value,
        c_value=c_value,
        l_ratio=l_ratio,
        c_ratio=c_ratio,
        is_small_world=(l_ratio <= l_ratio_max) and c_ok,
        l_ratio_max=l_ratio_max,
        c_ratio_min=c_ratio_min,
    )


def small_world_report(
    graph: Graph,
    baseline: BaselineStats,
    c_policy: str = "exclude",
    l_ratio_max: float = DEFAULT_L_RATIO_MAX,
    c_ratio_min: float = DEFAULT_C_RATIO_MIN,
) -> SmallWorldVerdict:
    """Compute L and C of a connected graph and compare to the baseline."""
    return small_world_verdict(
        characteristic_path_length(graph),
        clustering_coefficient(graph, c_policy),
        baseline,
        l_ratio_max=l_ratio_max,
        c_ratio_min=c_ratio_min,
    )


@dataclass
class MetricsReport:
    n: int
    m: int
    density: float
    char_path_length: float
    clustering: float
    c_policy: str
    baseline: BaselineStats
    small_world: SmallWorldVerdict
    degree_dist: DegreeDistribution | None = field(repr=False, default=None)


def metrics_report(
    graph: Graph,
    baseline_samples: int,
    seed: int,
    c_policy: str = "exclude",
    l_ratio_max: float = DEFAULT_L_RATIO_MAX,
    c_ratio_min: float = DEFAULT_C_RATIO_MIN,
    k_min_fit: int = 1,
    k_max_fit: int | None = None,
) -> MetricsReport:
    """All small-world quantities of a connected graph plus its baseline."""
    l_value = characteristic_path_length(graph)
    c_value = clustering_coefficient(graph, c_policy)
    baseline = random_baseline(graph.n, graph.m, baseline_samples, seed)
    verdict = small_world_verdict(l_value, c_value, baseline, l_ratio_max, c_ratio_min)
    return MetricsReport(
        n=graph.n,
        m=graph.m,
        density=density(graph),
        char_path_length=l_value,
        clustering=c_value,
        c_policy=c_policy,
        baseline=baseline,
        small_world=verdict,
        degree_dist=degree_distribution(graph, k_min_fit, k_max_fit),
    )
