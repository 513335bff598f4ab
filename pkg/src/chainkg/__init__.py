"""chainkg: incremental knowledge graph over EVM chain and social media data."""

__version__ = "0.1.0"
