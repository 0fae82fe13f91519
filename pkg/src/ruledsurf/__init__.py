"""Exact generating functions for sheaves on ruled surfaces."""

__version__ = "0.1.0"
