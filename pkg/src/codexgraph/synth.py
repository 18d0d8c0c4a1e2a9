"""Seeded synthetic-corpus generator for tests and demos.

Article texts carry literal reference sentences realized from a planted
block model: pairs inside one chapter cite each other with probability
p_in, pairs in different chapters (same book or not) with p_out.  The
chapter is the ground-truth block label, returned as a sidecar mapping.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainError

_SENTENCES = (
    "Les conditions d'application sont fixées à l'article {ref}.",
    "The requirements laid down in Article {ref} apply.",
    "Sans préjudice de l'article {ref}, les mesures restent applicables.",
    "The procedure follows the rules of Article {ref}.",
)

_ROMAN = (
    "", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X",
    "XI", "XII", "XIII", "XIV", "XV", "XVI", "XVII", "XVIII", "XIX", "XX",
)


@dataclass
class SynthSpec:
    books: int
    chapters_per_book: int
    articles_per_chapter: int
    p_in: float
    p_out: float
    hub_count: int = 0
    hub_degree: int = 0
    seed: int = 0

    def validate(self) -> None:
        if min(self.books, self.chapters_per_book, self.articles_per_chapter) < 1:
            raise DomainError("books, chapters and articles counts must be >= 1")
        for p in (self.p_in, self.p_out):
            if not 0.0 <= p <= 1.0:
                raise DomainError(f"probability {p} outside [0, 1]")
        if self.hub_count < 0 or self.hub_degree < 0:
            raise DomainError("hub parameters must be >= 0")


def _roman(n: int) -> str:
    return _ROMAN[n] if n < len(_ROMAN) else str(n)


def _ref_text(article_id: str) -> str:
    # "L101-1" -> "L. 101-1", the surface form the reference grammar reads.
    return f"{article_id[0]}. {article_id[1:]}"


def synth_corpus(spec: SynthSpec) -> tuple[dict, dict[str, str]]:
    """Generate a corpus document and its ground-truth block sidecar.

    Returns (corpus document, {article id -> chapter block id}).
    """
    spec.validate()
    rng = random.Random(spec.seed)

    articles: list[str] = []
    block_of: dict[str, str] = {}
    for b in range(1, spec.books + 1):
        for c in range(1, spec.chapters_per_book + 1):
            block = f"book:{b}/chapter:{c}"
            for a in range(1, spec.articles_per_chapter + 1):
                article_id = f"L{b}{c:02d}-{a}"
                articles.append(article_id)
                block_of[article_id] = block

    total = len(articles)
    if spec.hub_count and spec.hub_degree > total - 1:
        raise DomainError(f"hub_degree {spec.hub_degree} exceeds {total - 1} possible neighbors")

    cites: dict[str, list[str]] = {a: [] for a in articles}
    neighbors: dict[str, set[str]] = {a: set() for a in articles}

    def plant(source: str, target: str) -> None:
        cites[source].append(target)
        neighbors[source].add(target)
        neighbors[target].add(source)

    for i, u in enumerate(articles):
        for v in articles[i + 1 :]:
            p = spec.p_in if block_of[u] == block_of[v] else spec.p_out
            if rng.random() < p:
                if rng.random() < 0.5:
                    plant(u, v)
                else:
                    plant(v, u)

    if spec.hub_count:
        hubs = rng.sample(articles, spec.hub_count)
        for hub in hubs:
            candidates = [a for a in articles if a != hub and a not in neighbors[hub]]
            missing = spec.hub_degree - len(neighbors[hub])
            for target in rng.sample(candidates, max(missing, 0)):
                plant(hub, target)

    def article_node(article_id: str) -> dict:
        sentences = [
            _SENTENCES[rng.randrange(len(_SENTENCES))].format(ref=_ref_text(t))
            for t in cites[article_id]
        ]
        return {
            "id": article_id,
            "kind": "article",
            "heading": f"Article {article_id}",
            "text": " ".join(sentences),
        }

    books = []
    for b in range(1, spec.books + 1):
        chapters = []
        for c in range(1, spec.chapters_per_book + 1):
            chapters.append(
                {
                    "id": f"chapter:{c}",
                    "kind": "chapter",
                    "heading": f"Chapter {_roman(c)}",
                    "children": [
                        article_node(f"L{b}{c:02d}-{a}")
                        for a in range(1, spec.articles_per_chapter + 1)
                    ],
                }
            )
        books.append(
            {
                "id": f"book:{b}",
                "kind": "book",
                "heading": f"Book {_roman(b)}",
                "children": chapters,
            }
        )

    document = {
        "schema": "codexgraph-corpus-v1",
        "root": {
            "id": "synth-code",
            "kind": "code",
            "heading": "Synthetic code",
            "children": books,
        },
    }
    return document, block_of
