"""Community detection: central-vertex removal, spectral partitioning on the
normalized graph Laplacian, reinsertion of the centrals, and book profiling.

The high-betweenness vertices are removed first so that communities they
bridge are not aggregated, then reinserted as bridge annotations (they join
no community).  Vertices isolated by the removal become singleton
communities before the eigen step, which keeps the Laplacian well-posed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus, book_of
from .errors import DomainError, NumericalError
from .graph import Graph, induced_subgraph
from .metrics import BetweennessScores, betweenness, betweenness_table

EIGEN_RESIDUAL_TOL = 1e-8
_KMEANS_MAX_ITER = 300
_KMEANS_RESEEDS = 5


@dataclass
class SpectralConfig:
    centrals_removed: int = 8
    k: int | str = "auto"
    eigengap_max_k: int = 40
    kmeans_restarts: int = 8
    seed: int = 0
    weighted: bool = False

    def validate(self) -> None:
        if self.centrals_removed < 0:
            raise DomainError("centrals_removed must be >= 0")
        if self.k != "auto" and (not isinstance(self.k, int) or self.k < 2):
            raise DomainError("k must be 'auto' or an integer >= 2")
        if self.kmeans_restarts < 1:
            raise DomainError("kmeans_restarts must be >= 1")


def remove_centrals(
    graph: Graph, scores: BetweennessScores, count: int
) -> tuple[Graph, list[str]]:
    """Drop the top-count betweenness vertices (ties by vertex id)."""
    if count > graph.n:
        raise DomainError(f"cannot remove {count} vertices from a graph of {graph.n}")
    centrals = [v for v, _, _ in betweenness_table(scores, count)] if count else []
    central_set = set(centrals)
    reduced = induced_subgraph(graph, [v for v in graph.vertices if v not in central_set])
    return reduced, centrals


def normalized_laplacian(graph: Graph, weighted: bool = False) -> np.ndarray:
    """L = I - D^{-1/2} A D^{-1/2}; rows of degree-0 vertices are all zero.

    A is the binary adjacency by default; with weighted=True the citation
    multiplicities are used instead.
    """
    n = graph.n
    a = np.zeros((n, n))
    for i, j, mult in graph.edges():
        w = float(mult) if weighted else 1.0
        a[i, j] = w
        a[j, i] = w
    deg = a.sum(axis=1)
    inv_sqrt = np.zeros(n)
    nonzero = deg > 0
    inv_sqrt[nonzero] = 1.0 / np.sqrt(deg[nonzero])
    lap = -(inv_sqrt[:, None] * a * inv_sqrt[None, :])
    lap[np.diag_indices(n)] = np.where(nonzero, 1.0, 0.0)
    return lap


@dataclass
class SpectralEmbedding:
    """Low eigenvectors of the normalized Laplacian of the non-isolated part.

    eigenvalues holds the full ascending spectrum (used by the eigengap
    rule); coordinates has one unit-normalized k-vector per non-isolated
    vertex, aligned with vertex_ids.
    """

    eigenvalues: list[float]
    coordinates: np.ndarray
    vertex_ids: list[str]
    isolated_preassigned: list[str]


def spectral_embedding(graph: Graph, k: int, weighted: bool = False) -> SpectralEmbedding:
    isolated = [graph.vertices[i] for i in range(graph.n) if graph.degree(i) == 0]
    active = [v for i, v in enumerate(graph.vertices) if graph.degree(i) > 0]
    if len(active) < k:
        raise DomainError(f"need at least k={k} non-isolated vertices, have {len(active)}")
    sub = induced_subgraph(graph, active)
    lap = normalized_laplacian(sub, weighted=weighted)
    eigenvalues, eigenvectors = np.linalg.eigh(lap)

    coords = eigenvectors[:, :k]
    residuals = np.linalg.norm(lap @ coords - coords * eigenvalues[:k], axis=0)
    worst = float(residuals.max()) if k else 0.0
    if worst > EIGEN_RESIDUAL_TOL:
        raise NumericalError(f"eigenpair residual {worst:.3e} exceeds {EIGEN_RESIDUAL_TOL:.0e}")

    norms = np.linalg.norm(coords, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    coords = coords / safe[:, None]
    return SpectralEmbedding(
        eigenvalues=[float(v) for v in eigenvalues],
        coordinates=coords,
        vertex_ids=list(sub.vertices),
        isolated_preassigned=isolated,
    )


def choose_k(eigenvalues: list[float], max_k: int) -> int:
    """Eigengap rule: the k maximizing lambda_{k+1} - lambda_k, 2 <= k <= max_k.

    Ties go to the smaller k; gaps within 1e-12 of each other count as tied
    so float noise cannot flip the choice.
    """
    if len(eigenvalues) < 3:
        raise DomainError("eigengap selection needs at least three eigenvalues")
    best_k, best_gap = 2, -math.inf
    for k in range(2, min(max_k, len(eigenvalues) - 1) + 1):
        gap = eigenvalues[k] - eigenvalues[k - 1]
        if gap > best_gap + 1e-12:
            best_k, best_gap = k, gap
    return best_k


def _farthest_point_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = np.empty((k, x.shape[1]))
    first = int(rng.integers(len(x)))
    centers[0] = x[first]
    dist2 = np.sum((x - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        centers[c] = x[int(np.argmax(dist2))]
        dist2 = np.minimum(dist2, np.sum((x - centers[c]) ** 2, axis=1))
    return centers


def _lloyd(x: np.ndarray, centers: np.ndarray, k: int) -> tuple[np.ndarray, float, bool]:
    labels = np.zeros(len(x), dtype=int)
    for _ in range(_KMEANS_MAX_ITER):
        dist2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(dist2, axis=1)
        new_centers = centers.copy()
        for c in range(k):
            mask = new_labels == c
            if mask.any():
                new_centers[c] = x[mask].mean(axis=0)
        if np.array_equal(new_labels, labels) and np.allclose(new_centers, centers):
            break
        labels, centers = new_labels, new_centers
    dist2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(dist2, axis=1)
    wcss = float(dist2[np.arange(len(x)), labels].sum())
    complete = len(np.unique(labels)) == k
    return labels, wcss, complete


def cluster(embedding: SpectralEmbedding, k: int, config: SpectralConfig) -> dict[str, int]:
    """Seeded k-means over the embedding rows; best of the configured restarts.

    Restart selection minimizes within-cluster sum of squares with the
    earlier restart winning ties, so the result only depends on the seed.
    """
    if k < 2:
        raise DomainError("cluster requires k >= 2")
    x = embedding.coordinates
    if x.shape[1] != k:
        raise DomainError(f"embedding has {x.shape[1]} columns, expected k={k}")
    rng = np.random.default_rng(config.seed)
    best_labels, best_wcss = None, math.inf
    for _ in range(config.kmeans_restarts):
        labels = None
        for _ in range(_KMEANS_RESEEDS):
            centers = _farthest_point_init(x, k, rng)
            labels, wcss, complete = _lloyd(x, centers, k)
            if complete:
                break
        else:
            raise NumericalError("k-means kept converging with an empty cluster")
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
    return {v: int(label) for v, label in zip(embedding.vertex_ids, best_labels)}


def assign_singletons(assignment: dict[str, int], isolated: list[str]) -> dict[str, int]:
    """Give every isolated vertex its own fresh community label."""
    merged = dict(assignment)
    next_label = max(merged.values(), default=-1) + 1
    for v in isolated:
        merged[v] = next_label
        next_label += 1
    return merged


@dataclass
class Community:
    id: int
    members: list[str]
    size: int
    book_fractions: dict[str, float] | None = None
    dominant_book: str | None = None
    dominant_fraction: float | None = None
    colored: bool | None = None


@dataclass
class CentralAnnotation:
    vertex: str
    adjacent_communities: list[int]


@dataclass
class Partition:
    assignment: dict[str, int]
    communities: list[Community]
    central_vertices: list[CentralAnnotation]
    inter_edges: dict[tuple[int, int], int] = field(default_factory=dict)
    inter_citations: dict[tuple[int, int], int] = field(default_factory=dict)

    def community(self, label: int) -> Community:
        return self.communities[label]


def reinsert_centrals(
    assignment: dict[str, int], centrals: list[str], graph: Graph
) -> Partition:
    """Assemble the Partition over the full analyzed graph.

    Communities are relabelled canonically (size descending, ties by the
    smallest member id).  Centrals join no community: each is annotated
    with the set of communities among its neighbors, and edges incident to
    a central are attributed to that annotation rather than inter_edges.
    """
    groups: dict[int, list[str]] = {}
    for v, label in assignment.items():
        groups.setdefault(label, []).append(v)
    order = sorted(groups, key=lambda g: (-len(groups[g]), min(groups[g])))
    relabel = {old: new for new, old in enumerate(order)}

    canonical = {v: relabel[label] for v, label in assignment.items()}
    communities = [
        Community(id=new, members=sorted(groups[old]), size=len(groups[old]))
        for new, old in enumerate(order)
    ]

    central_set = set(centrals)
    annotations = []
    for c in centrals:
        ci = graph.vertex_index(c)
        adjacent = {
            canonical[graph.vertices[w]]
            for w in graph.adjacency[ci]
            if graph.vertices[w] in canonical
        }
        annotations.append(CentralAnnotation(vertex=c, adjacent_communities=sorted(adjacent)))

    inter_edges: dict[tuple[int, int], int] = {}
    inter_citations: dict[tuple[int, int], int] = {}
    for i, j, mult in graph.edges():
        a, b = graph.vertices[i], graph.vertices[j]
        if a in central_set or b in central_set:
            continue
        ca, cb = canonical[a], canonical[b]
        if ca == cb:
            continue
        key = (min(ca, cb), max(ca, cb))
        inter_edges[key] = inter_edges.get(key, 0) + 1
        inter_citations[key] = inter_citations.get(key, 0) + mult

    return Partition(
        assignment=canonical,
        communities=communities,
        central_vertices=annotations,
        inter_edges=inter_edges,
        inter_citations=inter_citations,
    )


def book_profile(partition: Partition, corpus: Corpus) -> list[Community]:
    """Fill per-community book statistics; return rows sorted by size desc.

    A community is colored when strictly more than 75% of its members
    belong to the same book.
    """
    for community in partition.communities:
        fractions: dict[str, int] = {}
        for member in community.members:
            book = book_of(corpus, member) or "(none)"
            fractions[book] = fractions.get(book, 0) + 1
        total = community.size
        community.book_fractions = {b: c / total for b, c in sorted(fractions.items())}
        # Break count ties on the smaller book id for determinism.
        best_count = max(fractions.values())
        dominant_book = min(b for b, c in fractions.items() if c == best_count)
        community.dominant_book = dominant_book
        community.dominant_fraction = best_count / total
        community.colored = community.dominant_fraction > 0.75
    return sorted(partition.communities, key=lambda c: (-c.size, c.id))


def community_graph_export(partition: Partition) -> str:
    """DOT document of the community-level graph.

    One node per community carrying size, dominant book and the colored
    flag (the renderer scales disk areas from the size attribute); one
    edge per community pair that shares citations, weighted by the simple
    edge count with the citation multiplicity alongside.  Central vertices
    appear as diamonds linked to their adjacent communities.
    """
    from .export import _dot_quote, book_color

    lines = ["graph communities {"]
    for community in partition.communities:
        color = book_color(community.dominant_book) if community.colored else "white"
        attrs = [
            f"label={_dot_quote(f'c{community.id} ({community.size})')}",
            f"size={community.size}",
            "shape=circle",
            "style=filled",
            f"fillcolor={_dot_quote(color)}",
        ]
        if community.dominant_book is not None:
            attrs.append(f"dominant_book={_dot_quote(community.dominant_book)}")
        if community.dominant_fraction is not None:
            attrs.append(f"dominant_fraction=\"{community.dominant_fraction:.4f}\"")
        lines.append(f"  {_dot_quote(f'c{community.id}')} [{', '.join(attrs)}];")
    for central in partition.central_vertices:
        lines.append(
            f"  {_dot_quote(central.vertex)} [shape=diamond, style=filled, fillcolor=white];"
        )
    for (a, b), count in sorted(partition.inter_edges.items()):
        citations = partition.inter_citations.get((a, b), count)
        lines.append(
            f"  {_dot_quote(f'c{a}')} -- {_dot_quote(f'c{b}')}"
            f" [weight={count}, citations={citations}];"
        )
    for central in partition.central_vertices:
        for label in central.adjacent_communities:
            lines.append(f"  {_dot_quote(central.vertex)} -- {_dot_quote(f'c{label}')};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def community_graph_graphml(partition: Partition) -> str:
    """GraphML flavor of the community-level graph (same content as the DOT)."""
    import xml.etree.ElementTree as ET

    from .export import book_color

    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    keys = (
        ("d_size", "node", "size", "int"),
        ("d_book", "node", "dominant_book", "string"),
        ("d_color", "node", "color", "string"),
        ("d_role", "node", "role", "string"),
        ("d_edges", "edge", "edges", "int"),
        ("d_cit", "edge", "citations", "int"),
    )
    for key_id, domain, name, typ in keys:
        ET.SubElement(root, "key", id=key_id,
                      **{"for": domain, "attr.name": name, "attr.type": typ})
    g = ET.SubElement(root, "graph", id="communities", edgedefault="undirected")
    for community in partition.communities:
        node = ET.SubElement(g, "node", id=f"c{community.id}")
        ET.SubElement(node, "data", key="d_size").text = str(community.size)
        ET.SubElement(node, "data", key="d_book").text = community.dominant_book or ""
        color = book_color(community.dominant_book) if community.colored else "white"
        ET.SubElement(node, "data", key="d_color").text = color
        ET.SubElement(node, "data", key="d_role").text = "community"
    for central in partition.central_vertices:
        node = ET.SubElement(g, "node", id=central.vertex)
        ET.SubElement(node, "data", key="d_role").text = "central"
    for (a, b), count in sorted(partition.inter_edges.items()):
        edge = ET.SubElement(g, "edge", source=f"c{a}", target=f"c{b}")
        ET.SubElement(edge, "data", key="d_edges").text = str(count)
        ET.SubElement(edge, "data", key="d_cit").text = str(
            partition.inter_citations.get((a, b), count))
    for central in partition.central_vertices:
        for label in central.adjacent_communities:
            ET.SubElement(g, "edge", source=central.vertex, target=f"c{label}")
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def spectral_partition(
    graph: Graph,
    config: SpectralConfig,
    scores: BetweennessScores | None = None,
) -> tuple[Partition, SpectralEmbedding | None, int | None]:
    """Run the full removal / embedding / clustering / reinsertion pipeline.

    Returns the partition, the embedding actually clustered (None when the
    reduced graph had no edges), and the community count used.
    """
    config.validate()
    if scores is None:
        scores = betweenness(graph)
    reduced, centrals = remove_centrals(graph, scores, config.centrals_removed)

    active = sum(1 for i in range(reduced.n) if reduced.degree(i) > 0)
    if active == 0:
        assignment = assign_singletons({}, list(reduced.vertices))
        return reinsert_centrals(assignment, centrals, graph), None, None

    if config.k == "auto":
        if active >= 3:
            probe = spectral_embedding(reduced, 2, weighted=config.weighted)
            k = choose_k(probe.eigenvalues, config.eigengap_max_k)
        else:
            k = min(2, active)
    else:
        k = config.k
    if k > active:
        raise DomainError(f"k={k} exceeds the {active} non-isolated vertices")

    if k < 2:
        # Single non-isolated vertex: nothing to cluster.
        embedding = None
        assignment = {v: 0 for i, v in enumerate(reduced.vertices) if reduced.degree(i) > 0}
    else:
        embedding = spectral_embedding(reduced, k, weighted=config.weighted)
        assignment = cluster(embedding, k, config)
    assignment = assign_singletons(
        assignment, [v for i, v in enumerate(reduced.vertices) if reduced.degree(i) == 0]
    )
    return reinsert_centrals(assignment, centrals, graph), embedding, k
