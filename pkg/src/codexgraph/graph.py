"""The undirected simple reference network and its basic structure queries.

Vertices are corpus node ids (every node except the code root).  Edges are
selection-type links only: one edge per unordered pair cited at least once
in either direction, with the number of underlying citations kept as a
multiplicity attribute.  Hierarchy (influence-type) links are not edges;
they stay in the Corpus for book attribution.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .citations import ExtractionReport
from .corpus import Corpus, NodeKind
from .errors import UnknownIdError


@dataclass
class Graph:
    vertices: list[str]
    adjacency: list[list[int]]
    multiplicity: dict[tuple[int, int], int]
    index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {v: i for i, v in enumerate(self.vertices)}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.multiplicity)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.multiplicity

    def edges(self):
        """Yield (i, j, multiplicity) with i < j, in deterministic order."""
        for (i, j) in sorted(self.multiplicity):
            yield i, j, self.multiplicity[(i, j)]

    def vertex_index(self, vertex_id: str) -> int:
        try:
            return self.index[vertex_id]
        except KeyError:
            raise UnknownIdError(f"unknown vertex: {vertex_id!r}") from None


def _assemble(vertices: list[str], pair_counts: dict[tuple[int, int], int]) -> Graph:
    adjacency: list[list[int]] = [[] for _ in vertices]
    for i, j in pair_counts:
        adjacency[i].append(j)
        adjacency[j].append(i)
    for neighbors in adjacency:
        neighbors.sort()
    return Graph(vertices=vertices, adjacency=adjacency, multiplicity=dict(pair_counts))


def from_pairs(vertices: list[str], pairs) -> Graph:
    """Build a graph from id pairs; repeated pairs accumulate multiplicity."""
    index = {v: i for i, v in enumerate(vertices)}
    pair_counts: dict[tuple[int, int], int] = {}
    for a, b in pairs:
        if a not in index or b not in index:
            raise UnknownIdError(f"edge touches unknown vertex: {(a, b)!r}")
        if a == b:
            continue
        i, j = index[a], index[b]
        key = (min(i, j), max(i, j))
        pair_counts[key] = pair_counts.get(key, 0) + 1
    return _assemble(vertices, pair_counts)


def build_graph(corpus: Corpus, refs: ExtractionReport) -> Graph:
    """Construct the reference network from resolved citations.

    The vertex set is every corpus node except the code root, in document
    order.  Citation direction is collapsed: multiplicity counts refs in
    both directions.
    """
    vertices = [n.id for n in corpus.walk() if n.kind is not NodeKind.CODE]
    index = {v: i for i, v in enumerate(vertices)}
    pair_counts: dict[tuple[int, int], int] = {}
    for ref in refs.resolved:
        if ref.source not in index or ref.target not in index:
            raise UnknownIdError(
                f"citation touches id outside the graph: {ref.source!r} -> {ref.target!r}"
            )
        i, j = index[ref.source], index[ref.target]
        if i == j:
            continue  # self references never become edges
        key = (min(i, j), max(i, j))
        pair_counts[key] = pair_counts.get(key, 0) + 1
    return _assemble(vertices, pair_counts)


def isolated_census(graph: Graph, corpus: Corpus) -> tuple[int, int, int]:
    """Count degree-0 vertices: (total, headings, articles)."""
    headings = 0
    articles = 0
    for i, vertex in enumerate(graph.vertices):
        if graph.degree(i) == 0:
            if corpus.node(vertex).kind is NodeKind.ARTICLE:
                articles += 1
            else:
                headings += 1
    return headings + articles, headings, articles


@dataclass
class ComponentDecomposition:
    component_id: list[int]
    sizes: list[int]
    greatest: int

    def members(self, label: int) -> list[int]:
        return [i for i, c in enumerate(self.component_id) if c == label]


def components(graph: Graph) -> ComponentDecomposition:
    """Label connected components; labels ordered by size descending.

    Ties are broken by the smallest vertex index a component contains, so
    the labelling is deterministic.  Label 0 is the greatest component.
    """
    raw = [-1] * graph.n
    groups = []
    for start in range(graph.n):
        if raw[start] >= 0:
            continue
        label = len(groups)
        raw[start] = label
        queue = deque([start])
        members = [start]
        while queue:
            v = queue.popleft()
            for w in graph.adjacency[v]:
                if raw[w] < 0:
                    raw[w] = label
                    members.append(w)
                    queue.append(w)
        groups.append(members)

    order = sorted(range(len(groups)), key=lambda g: (-len(groups[g]), min(groups[g])))
    relabel = {old: new for new, old in enumerate(order)}
    component_id = [relabel[c] for c in raw]
    sizes = [len(groups[old]) for old in order]
    return ComponentDecomposition(component_id=component_id, sizes=sizes, greatest=0)


def induced_subgraph(graph: Graph, keep) -> Graph:
    """Subgraph on the given vertex ids, multiplicities inherited."""
    keep_ids = list(keep)
    keep_set = set(keep_ids)
    for v in keep_ids:
        if v not in graph.index:
            raise UnknownIdError(f"unknown vertex: {v!r}")
    vertices = [v for v in graph.vertices if v in keep_set]
    new_index = {v: i for i, v in enumerate(vertices)}
    pair_counts = {}
    for i, j, mult in graph.edges():
        a, b = graph.vertices[i], graph.vertices[j]
        if a in new_index and b in new_index:
            ni, nj = new_index[a], new_index[b]
            pair_counts[(min(ni, nj), max(ni, nj))] = mult
    return _assemble(vertices, pair_counts)


def greatest_component(graph: Graph) -> Graph:
    """The induced subgraph on the largest connected component."""
    decomp = components(graph)
    return induced_subgraph(graph, [graph.vertices[i] for i in decomp.members(0)])


def degree_table(graph: Graph, k: int) -> list[tuple[str, int]]:
    """Top-k vertices by degree, ties broken by vertex id ascending."""
    ranked = sorted(
        ((graph.vertices[i], graph.degree(i)) for i in range(graph.n)),
        key=lambda row: (-row[1], row[0]),
    )
    return ranked[:k]
