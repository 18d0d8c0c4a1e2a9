"""codexgraph: citation-network analysis for hierarchically structured legal codes."""

__version__ = "0.1.0"
