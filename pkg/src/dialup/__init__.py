"""Synthetic dialect generation and lexicon-driven dialect-to-standard swapping."""

__version__ = "0.1.0"
