"""Extraction and resolution of explicit cross-references in article text.

The reference grammar is deterministic pattern matching, no NLP:

* article references: ``article(s)``/``art.`` followed by ids like
  ``L. 211-2``, with comma/"et"/"and" enumerations and "à"/"to" ranges;
* hierarchy references: chains such as ``Chapter III of Title III of
  Book I`` or ``chapitre III du titre III du livre Ier``.

Both French and English surface forms are accepted.  References to objects
outside the corpus are dropped (and counted), never invented.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import Corpus, NodeKind, normalize_id, split_article_id
from .errors import NormalizationError, UnknownIdError

_ID = r"(?:[LRDlrd]\.?\s*)?[0-9]+(?:-[0-9]+)+"
_ID_RE = re.compile(_ID)

# Maximal article expression: lead word, first id, then any number of
# enumeration (',', 'et', 'and') or range ('à', 'to') continuations.
_ARTICLE_EXPR_RE = re.compile(
    r"\b(?:[Aa]rticles?|[Aa]rt\.)\s+" + _ID +
    r"(?:(?:\s*,\s*(?:et\s+|and\s+)?|\s+(?:et|and|à|to)\s+)(?:l'article\s+|articles?\s+|art\.\s+)?" + _ID + r")*"
)
_RANGE_CONNECTOR_RE = re.compile(r"(?:^|\s)(?:à|to)\s*$")

_LEVELS = (
    "livre", "book", "titre", "title", "chapitre", "chapter",
    "sous-section", "sub-section", "subsection", "section",
    "paragraphe", "paragraph",
)
_LEVEL_ALT = "|".join(_LEVELS)
_NUMERAL = r"(?:[0-9]+|[IVXivx]+)(?:er|ère|ere|ème|eme|e)?"
_PATH_EXPR_RE = re.compile(
    rf"\b(?:{_LEVEL_ALT})\s+{_NUMERAL}"
    rf"(?:\s+(?:of|du|de\s+la|de\s+l')\s+(?:the\s+)?(?:{_LEVEL_ALT})\s+{_NUMERAL})*\b",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class RefExpression:
    """One reference expression located in article text.

    kind is 'article' (parts = (id,)), 'range' (parts = (start, end)) or
    'path' (parts = (chain text,)).
    """

    text: str
    offset: int
    kind: str
    parts: tuple[str, ...]


@dataclass(frozen=True)
class CitationRef:
    source: str
    target: str
    raw_span: str
    span_offset: int


@dataclass
class ExtractionReport:
    """Per-corpus (or per-article) account of every matched reference span.

    Every span lands in exactly one bucket: resolved (>=1 CitationRef
    sharing the span), external_dropped, unparsed, or self.  self_refs is
    the count; self_detail carries the spans for CSV output.
    """

    resolved: list[CitationRef] = field(default_factory=list)
    external_dropped: list[tuple[str, str, int]] = field(default_factory=list)
    unparsed: list[tuple[str, str, int]] = field(default_factory=list)
    self_refs: int = 0
    self_detail: list[tuple[str, str, int]] = field(default_factory=list)

    def merge(self, other: "ExtractionReport") -> None:
        self.resolved.extend(other.resolved)
        self.external_dropped.extend(other.external_dropped)
        self.unparsed.extend(other.unparsed)
        self.self_refs += other.self_refs
        self.self_detail.extend(other.self_detail)

    @property
    def span_count(self) -> int:
        """Number of distinct matched spans accounted for in this report."""
        resolved_spans = {(r.source, r.span_offset) for r in self.resolved}
        return (
            len(resolved_spans)
            + len(self.external_dropped)
            + len(self.unparsed)
            + self.self_refs
        )


def extract_references(text: str) -> list[RefExpression]:
    """Return every reference expression in the text, in document order.

    Enumerations are split into one expression per member; ranges stay a
    single expression (only the corpus can enumerate them).
    """
    expressions = []
    for m in _ARTICLE_EXPR_RE.finditer(text):
        expressions.extend(_split_article_expr(text, m))
    for m in _PATH_EXPR_RE.finditer(text):
        span = (m.start(), m.end())
        if any(e.offset < span[1] and span[0] < e.offset + len(e.text) for e in expressions):
            continue  # already consumed by an article expression
        expressions.append(RefExpression(m.group(0), m.start(), "path", (m.group(0),)))
    expressions.sort(key=lambda e: e.offset)
    return expressions


def _split_article_expr(text: str, match: re.Match) -> list[RefExpression]:
    span = match.group(0)
    base = match.start()
    ids = list(_ID_RE.finditer(span))
    expressions: list[RefExpression] = []
    i = 0
    while i < len(ids):
        cur = ids[i]
        is_range = False
        if i + 1 < len(ids):
            gap = span[cur.end() : ids[i + 1].start()]
            is_range = bool(_RANGE_CONNECTOR_RE.search(gap))
        if is_range:
            nxt = ids[i + 1]
            expressions.append(
                RefExpression(
                    span[cur.start() : nxt.end()],
                    base + cur.start(),
                    "range",
                    (cur.group(0), nxt.group(0)),
                )
            )
            i += 2
        else:
            # The first member keeps the lead word ("Article L. 211-2").
            start = 0 if i == 0 else cur.start()
            expressions.append(
                RefExpression(
                    span[start : cur.end()],
                    base + start,
                    "article",
                    (cur.group(0),),
                )
            )
            i += 1
    return expressions


def _source_prefix(source: str) -> str:
    try:
        prefix, _ = split_article_id(source)
    except NormalizationError:
        return ""
    return prefix


def _normalize_article(raw: str, source: str) -> str:
    norm = normalize_id(raw)
    if norm and norm[0].isdigit():
        # Bare numeric references inherit the source's letter prefix.
        norm = _source_prefix(source) + norm
    return norm


def resolve(corpus: Corpus, source: str, expressions: list[RefExpression]) -> ExtractionReport:
    """Resolve expressions against the corpus.

    Range expressions expand to every existing article whose numeric key
    falls inclusively between the endpoints (same letter prefix).  Hits on
    the source itself are counted as self references; well-formed ids with
    no corpus node are dropped as external; malformed fragments are
    reported unparsed.
    """
    if source not in corpus.index:
        raise UnknownIdError(f"unknown source id: {source!r}")
    report = ExtractionReport()
    for expr in expressions:
        try:
            if expr.kind == "article":
                _resolve_single(corpus, source, expr, report)
            elif expr.kind == "range":
                _resolve_range(corpus, source, expr, report)
            else:
                _resolve_path(corpus, source, expr, report)
        except NormalizationError:
            report.unparsed.append((source, expr.text, expr.offset))
    return report


def _resolve_single(corpus, source, expr, report):
    target = _normalize_article(expr.parts[0], source)
    if target == source:
        report.self_refs += 1
        report.self_detail.append((source, expr.text, expr.offset))
    elif target in corpus.index:
        report.resolved.append(CitationRef(source, target, expr.text, expr.offset))
    else:
        report.external_dropped.append((source, expr.text, expr.offset))


def _resolve_range(corpus, source, expr, report):
    lo_id = _normalize_article(expr.parts[0], source)
    hi_id = _normalize_article(expr.parts[1], source)
    lo_prefix, lo_key = split_article_id(lo_id)
    hi_prefix, hi_key = split_article_id(hi_id)
    if lo_prefix != hi_prefix:
        raise NormalizationError(f"range endpoints disagree on prefix: {expr.text!r}")
    lo_key, hi_key = min(lo_key, hi_key), max(lo_key, hi_key)

    hits = []
    self_hit = False
    for node in corpus.articles():
        try:
            prefix, key = split_article_id(node.id)
        except NormalizationError:
            continue
        if prefix == lo_prefix and lo_key <= key <= hi_key:
            if node.id == source:
                self_hit = True
            else:
                hits.append((key, node.id))
    hits.sort()
    if hits:
        for _, target in hits:
            report.resolved.append(CitationRef(source, target, expr.text, expr.offset))
    elif self_hit:
        report.self_refs += 1
        report.self_detail.append((source, expr.text, expr.offset))
    else:
        report.external_dropped.append((source, expr.text, expr.offset))


def _resolve_path(corpus, source, expr, report):
    target = normalize_id(expr.parts[0])
    if target == source:
        report.self_refs += 1
        report.self_detail.append((source, expr.text, expr.offset))
    elif target in corpus.index:
        report.resolved.append(CitationRef(source, target, expr.text, expr.offset))
    else:
        report.external_dropped.append((source, expr.text, expr.offset))


def extract_all(corpus: Corpus) -> ExtractionReport:
    """Extract and resolve references from every article, in document order."""
    report = ExtractionReport()
    for article in corpus.articles():
        expressions = extract_references(article.text)
        report.merge(resolve(corpus, article.id, expressions))
    return report
