"""Graph and table serialization: GraphML, DOT, JSON, CSV.

CSV numbers use 6 significant digits and LF line endings so golden files
stay byte-stable.
"""

from __future__ import annotations

import csv
import io
import json
import re
import xml.etree.ElementTree as ET

from .citations import ExtractionReport
from .corpus import Corpus, book_of
from .graph import Graph
from .metrics import DegreeDistribution

BOOK_PALETTE = ("blue", "green", "orange", "yellow", "pink", "darkblue", "grey")


def book_color(book_id: str | None) -> str:
    if not book_id:
        return "white"
    m = re.search(r"book:(\d+)$", book_id)
    if not m:
        return "white"
    return BOOK_PALETTE[(int(m.group(1)) - 1) % len(BOOK_PALETTE)]


def format_number(x: float) -> str:
    """6 significant digits, plain decimal point."""
    return f"{x:.6g}"


def _vertex_rows(graph: Graph, corpus: Corpus | None):
    for i, vertex in enumerate(graph.vertices):
        kind = corpus.node(vertex).kind.value if corpus else ""
        book = (book_of(corpus, vertex) or "") if corpus else ""
        yield vertex, kind, book, graph.degree(i)


def graph_to_graphml(graph: Graph, corpus: Corpus | None = None) -> str:
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    keys = (
        ("d_kind", "node", "kind", "string"),
        ("d_book", "node", "book", "string"),
        ("d_degree", "node", "degree", "int"),
        ("d_mult", "edge", "multiplicity", "int"),
    )
    for key_id, domain, name, typ in keys:
        ET.SubElement(
            root, "key", id=key_id,
            **{"for": domain, "attr.name": name, "attr.type": typ},
        )
    g = ET.SubElement(root, "graph", id="G", edgedefault="undirected")
    for vertex, kind, book, degree in _vertex_rows(graph, corpus):
        node = ET.SubElement(g, "node", id=vertex)
        ET.SubElement(node, "data", key="d_kind").text = kind
        ET.SubElement(node, "data", key="d_book").text = book
        ET.SubElement(node, "data", key="d_degree").text = str(degree)
    for i, j, mult in graph.edges():
        edge = ET.SubElement(g, "edge", source=graph.vertices[i], target=graph.vertices[j])
        ET.SubElement(edge, "data", key="d_mult").text = str(mult)
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(graph: Graph, corpus: Corpus | None = None) -> str:
    lines = ["graph G {", "  node [style=filled];"]
    for vertex, kind, book, degree in _vertex_rows(graph, corpus):
        attrs = [f"fillcolor={_dot_quote(book_color(book))}", f"degree={degree}"]
        if kind:
            attrs.append(f"kind={_dot_quote(kind)}")
        if book:
            attrs.append(f"book={_dot_quote(book)}")
        lines.append(f"  {_dot_quote(vertex)} [{', '.join(attrs)}];")
    for i, j, mult in graph.edges():
        lines.append(
            f"  {_dot_quote(graph.vertices[i])} -- {_dot_quote(graph.vertices[j])}"
            f" [multiplicity={mult}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph: Graph, corpus: Corpus | None = None) -> str:
    doc = {
        "nodes": [
            {"id": vertex, "kind": kind, "book": book, "degree": degree}
            for vertex, kind, book, degree in _vertex_rows(graph, corpus)
        ],
        "edges": [
            {"source": graph.vertices[i], "target": graph.vertices[j], "multiplicity": mult}
            for i, j, mult in graph.edges()
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def graph_to_csv(graph: Graph) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "multiplicity"])
    for i, j, mult in graph.edges():
        writer.writerow([graph.vertices[i], graph.vertices[j], mult])
    return buf.getvalue()


def references_to_csv(report: ExtractionReport) -> str:
    """Citation rows as source,target,raw_span,offset,status."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "raw_span", "offset", "status"])
    rows = (
        [(r.source, r.target, r.raw_span, r.span_offset, "resolved") for r in report.resolved]
        + [(s, "", span, off, "external") for s, span, off in report.external_dropped]
        + [(s, "", span, off, "unparsed") for s, span, off in report.unparsed]
        + [(s, "", span, off, "self") for s, span, off in report.self_detail]
    )
    rows.sort(key=lambda row: (row[0], row[3], row[4], row[1]))
    writer.writerows(rows)
    return buf.getvalue()


def degree_distribution_to_csv(dist: DegreeDistribution) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "count", "cum_prob"])
    for k, count, cum_prob in dist.points:
        writer.writerow([k, count, format_number(cum_prob)])
    return buf.getvalue()
