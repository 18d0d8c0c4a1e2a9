"""In-memory model of a legal code's hierarchy and its ingestion from JSON.

A corpus is a tree: one ``code`` root, below it books, titles, chapters,
sections, subsections, paragraphs and articles.  Only articles carry body
text.  Levels may be skipped on the way down (a title may directly hold
articles) but a child never sits at a level above its parent.

Identifiers are normalized at load time:

* article ids become ``L211-3`` style (uppercase letter prefix, no dots or
  spaces),
* heading ids become positional paths such as ``book:1/title:3/chapter:3``
  (Roman numerals converted to Arabic, components ordered book-first).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DuplicateIdError,
    HierarchyError,
    NormalizationError,
    SchemaError,
    UnknownIdError,
)

SCHEMA_NAME = "codexgraph-corpus-v1"


class NodeKind(str, Enum):
    CODE = "code"
    BOOK = "book"
    TITLE = "title"
    CHAPTER = "chapter"
    SECTION = "section"
    SUBSECTION = "subsection"
    PARAGRAPH = "paragraph"
    ARTICLE = "article"


# Depth rank used for the "children never ascend" check.
KIND_RANK = {
    NodeKind.CODE: 0,
    NodeKind.BOOK: 1,
    NodeKind.TITLE: 2,
    NodeKind.CHAPTER: 3,
    NodeKind.SECTION: 4,
    NodeKind.SUBSECTION: 5,
    NodeKind.PARAGRAPH: 6,
    NodeKind.ARTICLE: 7,
}

HEADING_KINDS = (
    NodeKind.BOOK,
    NodeKind.TITLE,
    NodeKind.CHAPTER,
    NodeKind.SECTION,
    NodeKind.SUBSECTION,
    NodeKind.PARAGRAPH,
)

# Surface forms of hierarchy levels accepted in references and raw ids.
_LEVEL_WORDS = {
    "book": NodeKind.BOOK,
    "livre": NodeKind.BOOK,
    "title": NodeKind.TITLE,
    "titre": NodeKind.TITLE,
    "chapter": NodeKind.CHAPTER,
    "chapitre": NodeKind.CHAPTER,
    "section": NodeKind.SECTION,
    "subsection": NodeKind.SUBSECTION,
    "sub-section": NodeKind.SUBSECTION,
    "sous-section": NodeKind.SUBSECTION,
    "paragraph": NodeKind.PARAGRAPH,
    "paragraphe": NodeKind.PARAGRAPH,
}

_ROMAN_RE = re.compile(r"^(X{0,3})(IX|IV|V?I{0,3})$")
_ROMAN_VALUES = {"X": 10, "IX": 9, "IV": 4, "V": 5, "I": 1}

# One hierarchy component: level word + numeral, with optional French
# ordinal suffix ("Ier", "1er", "2e", "IIIème").
_COMPONENT_RE = re.compile(
    r"(?:the\s+)?(" + "|".join(sorted(_LEVEL_WORDS, key=len, reverse=True)) + r")"
    r"\s+([0-9]+|[ivxIVX]+)(?:er|ère|ere|ème|eme|e)?\b",
    re.IGNORECASE,
)
_CONNECTOR_RE = re.compile(r"^(?:,?\s*(?:of|du|de\s+la|de\s+l'|de)\s*)$", re.IGNORECASE)

_CANONICAL_PATH_RE = re.compile(
    r"^(?:book|title|chapter|section|subsection|paragraph):[0-9]+"
    r"(?:/(?:book|title|chapter|section|subsection|paragraph):[0-9]+)*$"
)

_ARTICLE_RE = re.compile(
    r"^(?:articles?\s+|art\.?\s+)?([A-Za-z])?\s*\.?\s*([0-9]+(?:\s*-\s*[0-9]+)*)$",
    re.IGNORECASE,
)


def roman_to_int(token: str) -> int:
    """Convert a Roman numeral in I..XXXIX to an integer."""
    m = _ROMAN_RE.match(token.upper())
    if not m or not token:
        raise NormalizationError(f"not a Roman numeral in I..XXXIX: {token!r}")
    value = 0
    for group in m.groups():
        i = 0
        while i < len(group):
            if group[i : i + 2] in _ROMAN_VALUES:
                value += _ROMAN_VALUES[group[i : i + 2]]
                i += 2
            else:
                value += _ROMAN_VALUES[group[i]]
                i += 1
    if not 1 <= value <= 39:
        raise NormalizationError(f"Roman numeral out of supported range I..XXXIX: {token!r}")
    return value


def _numeral_to_int(token: str) -> int:
    if token.isdigit():
        value = int(token)
        if value < 1:
            raise NormalizationError(f"hierarchy numbers start at 1: {token!r}")
        return value
    return roman_to_int(token)


def _parse_components(raw: str) -> list[tuple[NodeKind, int]] | None:
    """Parse 'Chapter III of Title III of Book I' style chains.

    Returns None when the string is not entirely made of level/numeral
    pairs joined by connectors, so other grammars can be tried.
    """
    components = []
    pos = 0
    text = raw.strip()
    while pos < len(text):
        m = _COMPONENT_RE.match(text, pos)
        if not m:
            return None
        components.append((_LEVEL_WORDS[m.group(1).lower()], _numeral_to_int(m.group(2))))
        pos = m.end()
        if pos >= len(text):
            break
        nxt = _COMPONENT_RE.search(text, pos)
        if not nxt:
            return None
        if not _CONNECTOR_RE.match(text[pos : nxt.start()]):
            return None
        pos = nxt.start()
    return components or None


def normalize_id(raw: str, kind: NodeKind | None = None) -> str:
    """Return the canonical form of an identifier or reference fragment.

    Articles: "L. 211-3" -> "L211-3" (bare numerics like "211-1" stay
    unprefixed; the citation resolver supplies the source's prefix).
    Hierarchy fragments: "Chapter III of Title III of Book I" ->
    "book:1/title:3/chapter:3".  A ``kind`` hint lets a bare numeral such
    as "III" normalize as that level.
    """
    text = raw.strip()
    if not text:
        raise NormalizationError("empty identifier")

    if _CANONICAL_PATH_RE.match(text.lower()):
        parts = [p.split(":") for p in text.lower().split("/")]
        components = [(NodeKind(k), int(n)) for k, n in parts]
        return _join_components(components)

    if kind in HEADING_KINDS:
        # Bare numeral with an explicit level from the corpus file.
        try:
            return f"{kind.value}:{_numeral_to_int(text)}"
        except NormalizationError:
            pass

    components = _parse_components(text)
    if components:
        return _join_components(components)

    m = _ARTICLE_RE.match(text)
    if m:
        letter = (m.group(1) or "").upper()
        digits = re.sub(r"\s*", "", m.group(2))
        return f"{letter}{digits}"

    raise NormalizationError(f"cannot normalize identifier: {raw!r}")


def _join_components(components: list[tuple[NodeKind, int]]) -> str:
    ranks = [KIND_RANK[k] for k, _ in components]
    if len(set(ranks)) != len(ranks):
        raise NormalizationError("hierarchy path repeats a level")
    ordered = sorted(components, key=lambda c: KIND_RANK[c[0]])
    return "/".join(f"{k.value}:{n}" for k, n in ordered)


def split_article_id(norm_id: str) -> tuple[str, tuple[int, ...]]:
    """Split a normalized article id into (letter prefix, numeric key).

    "L511-1" -> ("L", (511, 1)).  Used for ordering and range expansion.
    """
    m = re.match(r"^([A-Z]?)([0-9]+(?:-[0-9]+)*)$", norm_id)
    if not m:
        raise NormalizationError(f"not an article identifier: {norm_id!r}")
    return m.group(1), tuple(int(p) for p in m.group(2).split("-"))


@dataclass
class CorpusNode:
    id: str
    kind: NodeKind
    heading: str
    text: str = ""
    children: list["CorpusNode"] = field(default_factory=list)


@dataclass
class Corpus:
    root: CorpusNode
    index: dict[str, CorpusNode]
    parent: dict[str, str]

    def node(self, node_id: str) -> CorpusNode:
        try:
            return self.index[node_id]
        except KeyError:
            raise UnknownIdError(f"unknown node id: {node_id!r}") from None

    def walk(self):
        """Yield all nodes in document (pre-)order."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def articles(self):
        return (n for n in self.walk() if n.kind is NodeKind.ARTICLE)


def book_of(corpus: Corpus, node_id: str) -> str | None:
    """Return the id of the book the node belongs to (None for the root)."""
    node = corpus.node(node_id)
    while node.kind is not NodeKind.CODE:
        if node.kind is NodeKind.BOOK:
            return node.id
        parent_id = corpus.parent.get(node.id)
        if parent_id is None:
            return None
        node = corpus.index[parent_id]
    return None


def census(corpus: Corpus) -> dict[str, int]:
    """Count nodes of each kind; values sum to the index size."""
    counts = {kind.value: 0 for kind in NodeKind}
    for node in corpus.walk():
        counts[node.kind.value] += 1
    return counts


def serialize(corpus: Corpus) -> dict:
    """Inverse of load_corpus on valid corpora (ids stay canonical)."""

    def node_doc(node: CorpusNode) -> dict:
        doc = {"id": node.id, "kind": node.kind.value, "heading": node.heading}
        if node.kind is NodeKind.ARTICLE:
            doc["text"] = node.text
        if node.children:
            doc["children"] = [node_doc(c) for c in node.children]
        return doc

    return {"schema": SCHEMA_NAME, "root": node_doc(corpus.root)}


def load_corpus(document: str | bytes | dict) -> Corpus:
    """Parse and validate a corpus document.

    Accepts the raw JSON text or an already-parsed dict.  Ids in the file
    may be raw ("L. 211-3", "Title III"); they are normalized here and
    heading ids are composed with their parent's path so positional ids
    are unique corpus-wide.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise SchemaError("top level must be a JSON object")
    if document.get("schema") != SCHEMA_NAME:
        raise SchemaError(f"missing or unsupported schema marker (expected {SCHEMA_NAME!r})")
    if "root" not in document:
        raise SchemaError("missing 'root' node")

    index: dict[str, CorpusNode] = {}
    parent: dict[str, str] = {}
    locations: dict[str, str] = {}

    def build(doc, path: str, parent_node: CorpusNode | None) -> CorpusNode:
        if not isinstance(doc, dict):
            raise SchemaError(f"{path}: node must be an object")
        for key in ("id", "kind", "heading"):
            if key not in doc:
                raise SchemaError(f"{path}: missing required field {key!r}")
            if not isinstance(doc[key], str):
                raise SchemaError(f"{path}: field {key!r} must be a string")
        try:
            kind = NodeKind(doc["kind"])
        except ValueError:
            raise SchemaError(f"{path}: unknown kind {doc['kind']!r}") from None

        if parent_node is None:
            if kind is not NodeKind.CODE:
                raise SchemaError(f"{path}: root node must have kind 'code'")
        elif KIND_RANK[kind] <= KIND_RANK[parent_node.kind]:
            raise HierarchyError(
                f"{path}: kind {kind.value!r} may not appear under {parent_node.kind.value!r}"
            )

        if "text" in doc:
            if kind is not NodeKind.ARTICLE:
                raise SchemaError(f"{path}: only articles may carry text")
            if not isinstance(doc["text"], str):
                raise SchemaError(f"{path}: field 'text' must be a string")

        node_id = _normalize_node_id(doc["id"], kind, parent_node, path)
        if node_id in locations:
            raise DuplicateIdError(
                f"duplicate id {node_id!r} at {path} (first seen at {locations[node_id]})"
            )
        locations[node_id] = path

        node = CorpusNode(id=node_id, kind=kind, heading=doc["heading"], text=doc.get("text", ""))
        index[node_id] = node
        if parent_node is not None:
            parent[node_id] = parent_node.id

        children = doc.get("children", [])
        if not isinstance(children, list):
            raise SchemaError(f"{path}: 'children' must be a list")
        if children and kind is NodeKind.ARTICLE:
            raise SchemaError(f"{path}: articles may not have children")
        for i, child in enumerate(children):
            node.children.append(build(child, f"{path}.children[{i}]", node))
        return node

    root = build(document["root"], "root", None)
    return Corpus(root=root, index=index, parent=parent)


def _normalize_node_id(raw: str, kind: NodeKind, parent_node: CorpusNode | None, path: str) -> str:
    if kind is NodeKind.CODE:
        return raw.strip()
    if kind is NodeKind.ARTICLE:
        try:
            return normalize_id(raw)
        except NormalizationError as exc:
            raise SchemaError(f"{path}: {exc}") from None
    try:
        norm = normalize_id(raw, kind=kind)
    except NormalizationError:
        # Headings with free-form ids are kept verbatim; only uniqueness
        # is enforced for them.
        return raw.strip()
    if ":" not in norm:
        return raw.strip()  # parsed as an article-style id; keep verbatim
    last_kind = norm.rsplit("/", 1)[-1].split(":")[0]
    if last_kind != kind.value:
        raise HierarchyError(
            f"{path}: id {raw!r} names a {last_kind}, but the node kind is {kind.value!r}"
        )
    if "/" in norm:
        return norm
    # Single component: compose with the parent's positional path.
    if parent_node is not None and parent_node.kind in HEADING_KINDS:
        return f"{parent_node.id}/{norm}"
    return norm
