import json

import pytest

from codexgraph.citations import extract_all, extract_references, resolve
from codexgraph.errors import UnknownIdError

from .conftest import corpus_from

L211_3_BODY = (
    "In addition to the general regulations mentioned in Article L. 211-2, national or "
    "particular provisions with regard to certain parts of the territory are established "
    "by a Conseil d'Etat decree in order to ensure the protection of the principles set "
    "out in Article 211-1."
)


def water_corpus():
    """Articles L211-1..3 under book 2, plus a regulatory-free corpus."""
    return corpus_from({
        "schema": "codexgraph-corpus-v1",
        "root": {
            "id": "c", "kind": "code", "heading": "c",
            "children": [{
                "id": "book:2", "kind": "book", "heading": "Book II",
                "children": [{
                    "id": "chapter:1", "kind": "chapter", "heading": "Chapter I",
                    "children": [
                        {"id": "L211-1", "kind": "article", "heading": "a", "text": ""},
                        {"id": "L211-2", "kind": "article", "heading": "a", "text": ""},
                        {"id": "L211-3", "kind": "article", "heading": "a", "text": L211_3_BODY},
                    ],
                }],
            }],
        },
    })


def test_quoted_extract_gives_two_expressions():
    expressions = extract_references(L211_3_BODY)
    assert [e.text for e in expressions] == ["Article L. 211-2", "Article 211-1"]
    assert all(e.kind == "article" for e in expressions)
    assert [L211_3_BODY[e.offset : e.offset + len(e.text)] for e in expressions] == [
        "Article L. 211-2", "Article 211-1",
    ]


def test_l222_4_pattern_expressions():
    text = ("This plan explicitly cites the Article L222-1 and the "
            "Chapter III of Title III of Book I.")
    expressions = extract_references(text)
    assert [e.kind for e in expressions] == ["article", "path"]
    assert expressions[0].parts == ("L222-1",)
    assert expressions[1].text == "Chapter III of Title III of Book I"


def test_empty_text():
    assert extract_references("") == []


def test_enumeration_splits_per_member():
    expressions = extract_references("aux articles L. 211-2, L. 211-3 et L. 211-4 du code")
    assert [e.parts for e in expressions] == [("L. 211-2",), ("L. 211-3",), ("L. 211-4",)]


def test_range_detection_french_and_english():
    for text in ("articles L. 511-1 à L. 517-2", "Articles L. 511-1 to L. 517-2"):
        (expr,) = extract_references(text)
        assert expr.kind == "range"
        assert expr.parts == ("L. 511-1", "L. 517-2")


def test_resolve_quoted_extract():
    corpus = water_corpus()
    report = resolve(corpus, "L211-3", extract_references(L211_3_BODY))
    assert [(r.source, r.target) for r in report.resolved] == [
        ("L211-3", "L211-2"), ("L211-3", "L211-1"),
    ]
    assert report.self_refs == 0 and not report.external_dropped


def test_resolve_self_reference_counted():
    corpus = water_corpus()
    report = resolve(corpus, "L211-3", extract_references("see Article L. 211-3 itself"))
    assert report.self_refs == 1
    assert not report.resolved


def test_resolve_regulatory_reference_dropped():
    corpus = water_corpus()
    report = resolve(corpus, "L211-3", extract_references("fixé par l'article R. 211-1"))
    assert [t[:2] for t in report.external_dropped] == [("L211-3", "article R. 211-1")]


def test_resolve_unknown_source():
    with pytest.raises(UnknownIdError):
        resolve(water_corpus(), "L999-9", [])


def test_range_expands_to_existing_articles_only():
    corpus = corpus_from({
        "schema": "codexgraph-corpus-v1",
        "root": {
            "id": "c", "kind": "code", "heading": "c",
            "children": [{
                "id": "book:5", "kind": "book", "heading": "Book V",
                "children": [
                    {"id": "L511-1", "kind": "article", "heading": "a", "text": ""},
                    {"id": "L513-9", "kind": "article", "heading": "a", "text": ""},
                    {"id": "L517-2", "kind": "article", "heading": "a", "text": ""},
                    {"id": "L600-1", "kind": "article", "heading": "a",
                     "text": "Les articles L. 511-1 à L. 517-2 s'appliquent."},
                ],
            }],
        },
    })
    report = resolve(
        corpus, "L600-1", extract_references(corpus.index["L600-1"].text)
    )
    assert [r.target for r in report.resolved] == ["L511-1", "L513-9", "L517-2"]
    # all expansion targets stay inside the numeric interval
    for ref in report.resolved:
        key = tuple(int(x) for x in ref.target[1:].split("-"))
        assert (511, 1) <= key <= (517, 2)


def test_empty_range_is_external():
    corpus = water_corpus()
    report = resolve(corpus, "L211-1", extract_references("articles L. 891-1 à L. 891-5"))
    assert len(report.external_dropped) == 1
    assert not report.resolved


def test_reciprocal_citations_keep_direction():
    corpus = corpus_from({
        "schema": "codexgraph-corpus-v1",
        "root": {
            "id": "c", "kind": "code", "heading": "c",
            "children": [{
                "id": "book:1", "kind": "book", "heading": "b",
                "children": [
                    {"id": "L101-1", "kind": "article", "heading": "a",
                     "text": "Voir l'article L. 101-2."},
                    {"id": "L101-2", "kind": "article", "heading": "a",
                     "text": "Voir l'article L. 101-1."},
                ],
            }],
        },
    })
    report = extract_all(corpus)
    assert [(r.source, r.target) for r in report.resolved] == [
        ("L101-1", "L101-2"), ("L101-2", "L101-1"),
    ]


def test_no_references_means_empty_report(minimal_doc=None):
    corpus = water_corpus()
    report = resolve(corpus, "L211-1", extract_references("No references here."))
    assert not report.resolved and not report.external_dropped
    assert not report.unparsed and report.self_refs == 0


def test_minicode_totals(minicode_report):
    assert len(minicode_report.resolved) == 118
    assert len(minicode_report.external_dropped) == 6
    assert len(minicode_report.unparsed) == 0
    assert minicode_report.self_refs == 0


def test_conservation_per_article(minicode):
    for article in minicode.articles():
        expressions = extract_references(article.text)
        report = resolve(minicode, article.id, expressions)
        assert report.span_count == len(expressions), article.id


def test_resolved_targets_exist(minicode, minicode_report):
    for ref in minicode_report.resolved:
        assert ref.target in minicode.index
        assert ref.source in minicode.index
        assert ref.source != ref.target


def test_extract_all_deterministic(minicode):
    first = extract_all(minicode)
    second = extract_all(minicode)
    assert first.resolved == second.resolved
    assert first.external_dropped == second.external_dropped
