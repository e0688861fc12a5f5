"""Reshetikhin-Turaev invariants of lens spaces and Seifert fibered 3-manifolds."""

__version__ = "0.1.0"
