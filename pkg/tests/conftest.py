import json
from pathlib import Path

import pytest

from codexgraph.citations import extract_all
from codexgraph.corpus import load_corpus
from codexgraph.graph import build_graph

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def minicode():
    return load_corpus(FIXTURES.joinpath("minicode.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def minicode_report(minicode):
    return extract_all(minicode)


@pytest.fixture(scope="session")
def minicode_graph(minicode, minicode_report):
    return build_graph(minicode, minicode_report)


@pytest.fixture(scope="session")
def cited_extracts():
    return load_corpus(FIXTURES.joinpath("cited_extracts.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def minicode_path():
    return str(FIXTURES / "minicode.json")


def make_minimal_doc():
    """Smallest valid tree: code -> book -> title -> chapter -> article."""
    return {
        "schema": "codexgraph-corpus-v1",
        "root": {
            "id": "mini", "kind": "code", "heading": "Mini code",
            "children": [{
                "id": "Book I", "kind": "book", "heading": "Book I",
                "children": [{
                    "id": "Title I", "kind": "title", "heading": "Title I",
                    "children": [{
                        "id": "Chapter I", "kind": "chapter", "heading": "Chapter I",
                        "children": [{
                            "id": "L111-1", "kind": "article",
                            "heading": "Article L111-1", "text": "",
                        }],
                    }],
                }],
            }],
        },
    }


@pytest.fixture
def minimal_doc():
    return make_minimal_doc()


def corpus_from(doc) -> "object":
    return load_corpus(json.dumps(doc))
