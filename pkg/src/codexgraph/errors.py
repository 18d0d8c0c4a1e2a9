"""Exception hierarchy shared by all codexgraph modules."""


class CodexGraphError(Exception):
    """Base class for all codexgraph errors."""


class SchemaError(CodexGraphError):
    """Corpus document does not conform to the corpus JSON schema."""


class DuplicateIdError(SchemaError):
    """Two corpus nodes normalize to the same identifier."""


class HierarchyError(SchemaError):
    """A child node's kind ascends the hierarchy relative to its parent."""


class NormalizationError(CodexGraphError):
    """A reference fragment cannot be turned into a canonical identifier."""


class UnknownIdError(CodexGraphError):
    """Lookup of an identifier that is not present in the corpus or graph."""


class DomainError(CodexGraphError):
    """Operation called outside its mathematical domain (e.g. disconnected graph)."""


class NumericalError(CodexGraphError):
    """A numerical procedure failed to reach its required accuracy."""
